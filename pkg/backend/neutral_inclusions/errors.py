"""
Exception hierarchy for the neutral inclusions toolkit.

Validation problems derive from ``InvalidInputError`` (also a ``ValueError``);
solver breakdowns derive from ``NumericalFailure`` (also a ``RuntimeError``).
The CLI maps the two families to exit codes 2 and 3.
"""


class NeutralInclusionError(Exception):
    """Base class for all toolkit errors."""


class InvalidInputError(NeutralInclusionError, ValueError):
    """Input violates a documented precondition."""


class NumericalFailure(NeutralInclusionError, RuntimeError):
    """A numerical procedure failed on valid input."""


# Geometry
class NonInjectiveMap(InvalidInputError):
    pass


class DegenerateCurve(InvalidInputError):
    pass


# Layer potentials
class PointTooClose(InvalidInputError):
    pass


class CurvesTooClose(InvalidInputError):
    pass


# Polarization
class SingularContrast(InvalidInputError):
    pass


class NotDefinite(InvalidInputError):
    pass


# Neutrality
class NoPositiveSolution(InvalidInputError):
    pass


class BDNotZero(InvalidInputError):
    pass


class ShellTooConductive(InvalidInputError):
    pass


class NonPositiveBeta(InvalidInputError):
    pass


class BDTooLarge(InvalidInputError):
    pass


class GammaTooLarge(InvalidInputError):
    pass


# Ellipsoids and quadrature domains
class InsideCore(InvalidInputError):
    pass


class OutsideShell(InvalidInputError):
    pass


class DegenerateFoci(InvalidInputError):
    pass


class SpecError(InvalidInputError):
    """Malformed problem input."""


# Numerical failures
class SolveFailure(NumericalFailure):
    pass


class SingularSystem(NumericalFailure):
    pass


class IllConditioned(NumericalFailure):
    pass


class NoConvergence(NumericalFailure):
    pass
