"""
Tests for neutrality conditions, coating constructions and weakly neutral bonding parameters
"""

import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from neutral_inclusions.errors import (
    BDNotZero,
    BDTooLarge,
    GammaTooLarge,
    InvalidInputError,
    NonPositiveBeta,
    NoPositiveSolution,
    ShellTooConductive,
)
from neutral_inclusions.fields import CoreShellInclusion, far_field_coefficients, solve_field
from neutral_inclusions.geometry.conformal import ConformalMap, identity_map
from neutral_inclusions.geometry.curves import CircleSpec, PerturbedDiskSpec, build_curve
from neutral_inclusions.neutrality import (
    BondingParameter,
    beta_disk,
    beta_weakly_neutral,
    confocal_matrix_conductivity,
    construct_coating_bD0,
    find_coating_perturbed_disk,
    neutral_matrix_conductivity,
    neutral_volume_fraction,
    refine_weakly_neutral_beta,
    solve_lc_disk,
)
from neutral_inclusions.neutrality.bonding import BD_LIMIT, weakly_neutral_profile
from neutral_inclusions.polarization import ConductivityProfile, pt_coreshell, pt_simple


# ---------------------------------------------------------------------------
# Closed-form conditions
# ---------------------------------------------------------------------------

def test_neutral_matrix_conductivity_concentric_disks():
    assert_allclose(neutral_matrix_conductivity(5.0, 2.0, 0.25), 2.48, rtol=1e-14)
    assert_allclose(neutral_volume_fraction(5.0, 2.0, 2.48), 0.25, rtol=1e-12)


def test_neutral_conditions_for_perfect_core():
    f = 1.0 / 3.0
    assert_allclose(neutral_matrix_conductivity("inf", 0.5, f), 0.5 * (1.0 + f) / (1.0 - f))
    assert_allclose(neutral_volume_fraction(math.inf, 0.5, 1.0), f)


def test_neutral_conditions_in_three_dimensions():
    sigma_m = neutral_matrix_conductivity(5.0, 2.0, 0.25, d=3)
    assert_allclose(neutral_volume_fraction(5.0, 2.0, sigma_m, d=3), 0.25, rtol=1e-12)


def test_neutral_conditions_reject_impossible_inputs():
    with pytest.raises(NoPositiveSolution):
        neutral_volume_fraction(5.0, 2.0, 1.5)
    with pytest.raises(InvalidInputError):
        neutral_matrix_conductivity(5.0, 2.0, 1.5)
    with pytest.raises(InvalidInputError):
        neutral_matrix_conductivity(5.0, 2.0, 0.5, d=4)


def test_concentric_disks_are_neutral():
    sigma_m = neutral_matrix_conductivity(5.0, 2.0, 0.25)
    core = build_curve(CircleSpec(1.0), 256)
    shell = build_curve(CircleSpec(2.0), 256)
    profile = ConductivityProfile(5.0, 2.0, sigma_m)

    tensor = pt_coreshell(core, shell, profile)
    assert tensor.norm <= 1e-8 * tensor.shell_area

    theta = np.linspace(0.0, 2.0 * np.pi, 32, endpoint=False)
    ring = 6.0 * np.column_stack([np.cos(theta), np.sin(theta)])
    perturbation = solve_field(CoreShellInclusion(core, shell, profile), (1.0, 0.0)).perturbation(ring)
    assert np.max(np.abs(perturbation)) <= 1e-9


def test_lc_disk_neutral_bonding():
    beta = beta_disk(1.0, 3.0, 1.0)
    assert_allclose(beta, 1.5)
    solution = solve_lc_disk(1.0, 3.0, 1.0, beta)
    assert abs(solution.d) < 1e-14
    assert_allclose(solution.c, 1.0 / 3.0)
    assert_allclose(beta_disk(2.0, math.inf, 1.0), 0.5)


def test_lc_disk_perfect_bonding_matches_polarization_tensor(unit_circle):
    solution = solve_lc_disk(1.0, 3.0, 1.0, math.inf)
    assert_allclose(solution.d, -0.5)
    assert_allclose(solution.polarization(1.0), pt_simple(unit_circle, 3.0).matrix[0, 0], rtol=1e-8)

    perfect = solve_lc_disk(1.0, math.inf, 1.0, "inf")
    assert perfect.d == -1.0
    assert_allclose(perfect.polarization(1.0), pt_simple(unit_circle, math.inf).matrix[0, 0], rtol=1e-8)


def test_lc_disk_without_bonding_screens_the_core():
    solution = solve_lc_disk(1.0, 3.0, 1.0, 0.0)
    assert_allclose(solution.d, 1.0)
    assert_allclose(solution.c, 0.0, atol=1e-15)


@pytest.mark.parametrize("sigma_c", [3.0, 0.5, math.inf])
def test_lc_disk_dipole_decreases_with_bonding(sigma_c):
    betas = [0.0, 0.1, 0.5, 1.5, 5.0, 50.0, math.inf]
    d = [solve_lc_disk(1.0, sigma_c, 1.0, beta).d for beta in betas]
    assert np.all(np.diff(d) < 0)


def test_lc_disk_rejects_bad_inputs():
    with pytest.raises(NonPositiveBeta):
        beta_disk(1.0, 0.5, 1.0)
    with pytest.raises(InvalidInputError):
        solve_lc_disk(1.0, 3.0, 1.0, -1.0)
    with pytest.raises(InvalidInputError):
        beta_disk(0.0, 3.0, 1.0)


def test_confocal_matrix_conductivity():
    result = confocal_matrix_conductivity((4.0, 2.0, 1.0), 2.0, 1.5, 1.0)
    assert_allclose(result.volume_fraction, 1.0 / 3.0, rtol=1e-12)
    assert abs(result.trace_residual) < 1e-10
    assert min(result.sigma_m) > 0
    assert len(set(np.round(result.sigma_m, 12))) == 3

    homogeneous = confocal_matrix_conductivity((4.0, 2.0, 1.0), 2.0, 1.0, 1.0)
    assert homogeneous.sigma_m == (1.0, 1.0, 1.0)

    with pytest.raises(GammaTooLarge):
        confocal_matrix_conductivity((4.0, 2.0, 1.0), 2.0, math.inf, 1.0)
    with pytest.raises(GammaTooLarge):
        confocal_matrix_conductivity((4.0, 2.0, 1.0), 2.0, 1e6, 1.0)


# ---------------------------------------------------------------------------
# Coatings
# ---------------------------------------------------------------------------

def test_bD0_coating_radius_and_neutrality(quadratic_tail_map):
    coating = construct_coating_bD0(quadratic_tail_map, 0.5)
    assert_allclose(coating.r, math.sqrt(3.0))
    assert_allclose(coating.volume_fraction, 1.0 / 3.0)

    core, shell = coating.curves(512)
    tensor = pt_coreshell(core, shell, coating.profile)
    assert tensor.norm <= 1e-6 * tensor.shell_area


def test_bD0_coating_of_disk_is_concentric_neutral_pair():
    coating = construct_coating_bD0(identity_map(), 0.5)
    assert_allclose(coating.volume_fraction, neutral_volume_fraction(math.inf, 0.5, 1.0))


def test_bD0_coating_rejections(quadratic_tail_map):
    with pytest.raises(BDNotZero):
        construct_coating_bD0(ConformalMap((0.1,)), 0.5)
    with pytest.raises(ShellTooConductive):
        construct_coating_bD0(quadratic_tail_map, 1.2)
    with pytest.raises(InvalidInputError):
        construct_coating_bD0(quadratic_tail_map, 0.0)


def test_coating_search_without_perturbation_does_not_iterate():
    sigma_m = neutral_matrix_conductivity(5.0, 2.0, 0.25)
    result = find_coating_perturbed_disk(PerturbedDiskSpec(1.0), 5.0, 2.0, sigma_m, n_nodes=128)
    assert result.iterations == 0
    assert result.b == (0.0, 0.0, 0.0)
    assert_allclose(result.r_e, 2.0)
    assert len(result.trace) == 1


def test_coating_search_for_perturbed_disk():
    sigma_m = neutral_matrix_conductivity(5.0, 2.0, 0.25)
    core = PerturbedDiskSpec(1.0, cos=(0.0, 0.0, 0.05))
    result = find_coating_perturbed_disk(core, 5.0, 2.0, sigma_m, n_nodes=128)
    assert 1 <= result.iterations <= 10
    assert result.residual <= 1e-8
    # threefold symmetry keeps the tensor isotropic
    assert abs(result.b[1]) < 1e-6 and abs(result.b[2]) < 1e-6

    shell = build_curve(result.shell_spec, 128)
    tensor = pt_coreshell(build_curve(core, 128), shell, ConductivityProfile(5.0, 2.0, sigma_m))
    assert tensor.norm <= 2e-8 * tensor.shell_area
    assert result.to_dict()["trace"][-1]["residual"] == result.residual


def test_coating_search_rotates_with_the_core():
    """Rotating the core by tau rotates the cos 2theta / sin 2theta shell modes by 2 tau."""
    sigma_m = neutral_matrix_conductivity(5.0, 2.0, 0.25)
    tau = 0.4
    core = PerturbedDiskSpec(1.0, cos=(0.02, 0.05))
    rotated_core = PerturbedDiskSpec(
        1.0,
        cos=(0.02 * math.cos(tau), 0.05 * math.cos(2.0 * tau)),
        sin=(0.02 * math.sin(tau), 0.05 * math.sin(2.0 * tau)),
    )
    result = find_coating_perturbed_disk(core, 5.0, 2.0, sigma_m, n_nodes=128)
    rotated = find_coating_perturbed_disk(rotated_core, 5.0, 2.0, sigma_m, n_nodes=128)
    assert result.residual <= 1e-8 and rotated.residual <= 1e-8
    assert abs(result.b[1]) > 1e-2

    c, s = math.cos(2.0 * tau), math.sin(2.0 * tau)
    b0, b1, b2 = result.b
    assert_allclose(rotated.b, (b0, c * b1 - s * b2, s * b1 + c * b2), atol=1e-6)


# ---------------------------------------------------------------------------
# Bonding parameters
# ---------------------------------------------------------------------------

def test_weakly_neutral_profile_at_zero():
    assert weakly_neutral_profile(0.0) == (1.0, 0.0)
    assert_allclose(BD_LIMIT, 2.0 - math.sqrt(3.0))


def test_bonding_parameter_sampling():
    phi = ConformalMap((0.1,))
    beta = BondingParameter.constant(phi, 2.0)
    theta = np.linspace(0.0, 2.0 * np.pi, 11)
    assert_allclose(beta.at(theta), 2.0, rtol=1e-12)
    assert_allclose(beta.min_value(), 2.0, rtol=1e-12)

    with pytest.raises(NonPositiveBeta):
        BondingParameter.from_profile(phi, (1.0, 1.5, 0.0))


def test_weakly_neutral_beta_limits():
    with pytest.raises(BDTooLarge):
        beta_weakly_neutral(ConformalMap((0.3,)))
    beta = beta_weakly_neutral(ConformalMap((0.25j,)))
    assert_allclose(beta.angle, np.pi / 4.0)
    assert beta.min_value() > 0


def test_weakly_neutral_beta_is_exact_for_disk():
    coefficients = far_field_coefficients(identity_map(), beta_weakly_neutral(identity_map()))
    assert coefficients.max_abs < 1e-12


@pytest.mark.parametrize("b", [0.1, 0.25])
def test_weakly_neutral_beta_leaves_second_order_residue(b):
    phi = ConformalMap((b,))
    coefficients = far_field_coefficients(phi, beta_weakly_neutral(phi))
    assert coefficients.max_abs <= 2.0 * b * b


@pytest.mark.parametrize("b", [0.1, 0.25, 0.1j])
def test_refined_beta_is_weakly_neutral(b):
    phi = ConformalMap((b,))
    refined = refine_weakly_neutral_beta(phi)
    assert far_field_coefficients(phi, refined).max_abs <= 1e-8
    assert refined.min_value() > 0
    assert refined.label == "weakly neutral (refined)"


def test_constant_beta_is_not_weakly_neutral():
    phi = ConformalMap((0.1,))
    coefficients = far_field_coefficients(phi, BondingParameter.constant(phi, 1.0))
    assert coefficients.max_abs >= 1e-3
