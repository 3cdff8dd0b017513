"""
End-to-end tests of the command-line entry point
"""

import json
import math

import pytest

from neutral_inclusions.cli import EXIT_NUMERICAL, EXIT_OK, EXIT_VALIDATION, build_parser, run
from neutral_inclusions.config import ENV_LOG_LEVEL, ENV_NODES
from neutral_inclusions.fields import ImperfectInclusion
from neutral_inclusions.service import COMMANDS, NeutralInclusionService

DISK_PT = {"curve": {"kind": "circle", "r": 1.0}, "k": 2.0, "nodes": 256}


def _spec_file(tmp_path, spec, name="spec.json"):
    path = tmp_path / name
    path.write_text(json.dumps(spec), encoding="utf-8")
    return str(path)


def _run(tmp_path, command, spec, *extra):
    output = tmp_path / f"{command}.json"
    status = run([command, "--input", _spec_file(tmp_path, spec), "--output", str(output), *extra])
    return status, json.loads(output.read_text(encoding="utf-8"))


def test_parser_knows_every_command():
    parser = build_parser()
    for command in COMMANDS:
        args = parser.parse_args([command, "--input", "x.json"])
        assert args.command == command
    with pytest.raises(SystemExit):
        parser.parse_args(["pt"])


def test_polarization_tensor_of_disk(tmp_path):
    status, payload = _run(tmp_path, "pt", DISK_PT)
    assert status == EXIT_OK
    assert payload["success"]
    assert payload["result"]["nodes"] == 256
    matrix = payload["result"]["matrix"]
    assert matrix[0][0] == pytest.approx(2.0 * math.pi / 3.0, rel=1e-8)
    assert matrix[0][1] == pytest.approx(0.0, abs=1e-10)


def test_result_goes_to_stdout_without_output(tmp_path, capsys):
    status = run(["pt", "--input", _spec_file(tmp_path, DISK_PT)])
    assert status == EXIT_OK
    payload = json.loads(capsys.readouterr().out)
    assert payload["command"] == "pt"
    assert payload["result"]["matrix"][1][1] == pytest.approx(2.0943951, rel=1e-6)


def test_reruns_are_byte_identical(tmp_path):
    spec = _spec_file(tmp_path, DISK_PT)
    first, second = tmp_path / "first.json", tmp_path / "second.json"
    assert run(["pt", "--input", spec, "--output", str(first)]) == EXIT_OK
    assert run(["pt", "--input", spec, "--output", str(second)]) == EXIT_OK
    assert first.read_bytes() == second.read_bytes()


def test_coating_command(tmp_path):
    status, payload = _run(tmp_path, "coat", {"map": [0.0, 0.25], "sigma_s": 0.5, "nodes": 512})
    assert status == EXIT_OK
    result = payload["result"]
    assert result["r"] == pytest.approx(math.sqrt(3.0))
    assert result["volume_fraction"] == pytest.approx(1.0 / 3.0)
    assert result["verification"]["relative_norm"] <= 1e-6


def test_coating_with_nonzero_bD_is_a_validation_error(tmp_path):
    status, payload = _run(tmp_path, "coat", {"map": [0.1], "sigma_s": 0.5})
    assert status == EXIT_VALIDATION
    assert not payload["success"]
    assert payload["error_type"] == "BDNotZero"
    assert payload["error_kind"] == "validation"


def test_newton_search_without_convergence_is_numerical(tmp_path):
    spec = {
        "core": {"kind": "perturbed_disk", "r_i": 1.0, "cos": [0.0, 0.0, 0.05]},
        "sigma_c": 5.0, "sigma_s": 2.0, "f": 0.25,
        "nodes": 128, "tol": 1e-15, "max_iter": 1,
    }
    status, payload = _run(tmp_path, "newton-coat", spec)
    assert status == EXIT_NUMERICAL
    assert payload["error_type"] == "NoConvergence"
    assert payload["error_kind"] == "numerical"


def test_neumann_oval_quadrature(tmp_path):
    status, payload = _run(tmp_path, "quad", {"identity": "neumann_oval", "alpha": 1.0, "epsilon": 0.5})
    assert status == EXIT_OK
    foci = payload["result"]["parameters"]["foci"]
    assert foci[0][0] == pytest.approx(0.5, abs=1e-10)
    assert foci[1][0] == pytest.approx(-0.5, abs=1e-10)
    assert payload["result"]["residual"] <= 1e-8


def test_lc_disk_reports_infinite_bonding_as_string(tmp_path):
    status, payload = _run(tmp_path, "lc-disk", {"r": 1.0, "sigma_c": 3.0, "sigma_m": 1.0, "beta": "inf"})
    assert status == EXIT_OK
    assert payload["result"]["beta"] == "inf"
    assert payload["result"]["d"] == pytest.approx(-0.5)


def test_shell_problem_for_balls(tmp_path):
    status, payload = _run(tmp_path, "odp", {"pair": {"kind": "balls", "r_i": 1.0, "r_e": 2.0}})
    assert status == EXIT_OK
    assert payload["result"]["A"][0][0] == pytest.approx(-7.0 / 3.0)
    assert payload["result"]["residuals"]["outer_grad_max"] <= 1e-10


def test_field_writes_grid_csv(tmp_path):
    spec = {
        "inclusion": {"type": "simple", "curve": {"kind": "circle", "r": 1.0}, "k": 2.0},
        "nodes": 128,
        "a": [1.0, 0.0],
        "points": [[3.0, 0.0]],
        "grid": {"bbox": [-3.0, 3.0, -3.0, 3.0], "resolution": 21},
    }
    grid = tmp_path / "grid.csv"
    status, payload = _run(tmp_path, "field", spec, "--grid", str(grid))
    assert status == EXIT_OK
    result = payload["result"]
    assert result["points"][0]["pert"] == pytest.approx(-1.0 / 9.0, abs=1e-12)
    assert result["grid"]["rows"] == 441
    assert result["grid"]["shape"] == [21, 21]
    lines = grid.read_text(encoding="utf-8").splitlines()
    assert lines[0] == "x,y,u,pert,mask"
    assert len(lines) == 442


def test_field_of_imperfectly_bonded_disk(tmp_path):
    spec = {
        "inclusion": {"type": "imperfect", "map": [0.0], "beta": 0.5},
        "nodes": 128,
        "modes": 32,
        "points": [[2.5, 0.0]],
    }
    config = NeutralInclusionService()._inclusion(spec)
    assert isinstance(config, ImperfectInclusion)
    assert config.n_modes == 32

    status, payload = _run(tmp_path, "field", spec)
    assert status == EXIT_OK
    result = payload["result"]
    assert result["points"][0]["pert"] == pytest.approx(2.5 / (3.0 * 6.25), abs=1e-12)
    assert result["spectral"]["interface_residual"] < 1e-12


def test_missing_input_file(tmp_path):
    output = tmp_path / "out.json"
    status = run(["pt", "--input", str(tmp_path / "absent.json"), "--output", str(output)])
    assert status == EXIT_VALIDATION
    payload = json.loads(output.read_text(encoding="utf-8"))
    assert payload["error_type"] == "SpecError"


def test_malformed_json_input(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text("{not json", encoding="utf-8")
    assert run(["pt", "--input", str(path), "--output", str(tmp_path / "out.json")]) == EXIT_VALIDATION


def test_missing_field_is_a_validation_error(tmp_path):
    status, payload = _run(tmp_path, "pt", {"curve": {"kind": "circle", "r": 1.0}})
    assert status == EXIT_VALIDATION
    assert "'k'" in payload["error"]


def test_node_count_from_environment(tmp_path, monkeypatch):
    monkeypatch.setenv(ENV_NODES, "128")
    status, payload = _run(tmp_path, "pt", {"curve": {"kind": "circle", "r": 1.0}, "k": 2.0})
    assert status == EXIT_OK
    assert payload["result"]["nodes"] == 128


def test_malformed_environment_is_rejected(tmp_path, monkeypatch):
    monkeypatch.setenv(ENV_NODES, "many")
    with pytest.raises(ValueError, match=ENV_NODES):
        run(["pt", "--input", _spec_file(tmp_path, DISK_PT)])

    monkeypatch.delenv(ENV_NODES)
    monkeypatch.setenv(ENV_LOG_LEVEL, "LOUD")
    with pytest.raises(ValueError, match=ENV_LOG_LEVEL):
        run(["pt", "--input", _spec_file(tmp_path, DISK_PT)])


def test_service_rejects_unknown_command():
    outcome = NeutralInclusionService().run("bogus", {})
    assert not outcome["success"]
    assert outcome["error_kind"] == "validation"
