"""Exception hierarchy shared by every module of the package."""


class SliceBergmanError(Exception):
    """Base class; ``kind`` is the machine-readable tag used by the CLI."""

    kind = "error"


class ZeroDivisor(SliceBergmanError, ZeroDivisionError):
    kind = "zero_divisor"


class DomainError(SliceBergmanError, ValueError):
    kind = "domain"


class SingularKernel(SliceBergmanError, ZeroDivisionError):
    kind = "singular_kernel"


class BadParameter(SliceBergmanError, ValueError):
    kind = "bad_parameter"


class NonFiniteSample(SliceBergmanError, FloatingPointError):
    kind = "non_finite_sample"


class DivergenceSuspected(SliceBergmanError, ArithmeticError):
    kind = "divergence_suspected"


class BoundaryLimitNotReal(SliceBergmanError, ValueError):
    kind = "boundary_limit_not_real"


class ContourTooClose(SliceBergmanError, ValueError):
    kind = "contour_too_close"


class SpecError(SliceBergmanError, ValueError):
    """Malformed function description (JSON) or command-line value."""

    kind = "input"
