"""Exception hierarchy shared by the whole package.

Errors fall into two broad families: bad input (wall definitions that do
not describe a physical construction, malformed wall files) and numerical
failure (the series/rational-function machinery breaking down for an
otherwise legal wall).  The CLI maps the former to exit code 2 and the
latter to exit code 3.
"""


class CtfkitError(Exception):
    """Base class for every error raised by this package."""


class InvalidConstructionError(CtfkitError, ValueError):
    """A layer or wall violates a physical precondition (non-positive
    conductivity, empty layer list, zero total resistance, ...)."""


class WallFormatError(InvalidConstructionError):
    """A wall document could not be parsed; the message names the
    offending field."""


class NumericalError(CtfkitError, ArithmeticError):
    """Base class for numerical failures in the transfer-function
    pipeline."""


class ApproximationError(NumericalError):
    """The rational approximation step failed (singular moment system or
    a solve residual above tolerance); retrying with a lower order is the
    usual remedy."""


class RootFindingError(NumericalError):
    """The denominator root finder did not converge or produced roots
    that cannot be grouped into real values and conjugate pairs."""


class InstabilityError(NumericalError):
    """A denominator root with non-negative real part was found; the
    transfer function would be unstable.  The message names the root."""


class RepeatedPoleError(NumericalError):
    """Two denominator roots coincide (or nearly so); the simple-pole
    expansion used here does not apply."""


class AssemblyError(NumericalError):
    """An internal consistency check failed while assembling discrete
    coefficients (e.g. a structurally-zero coefficient came out large)."""


class OracleError(NumericalError):
    """The finite-difference reference solver could not be applied to the
    given wall or failed during time stepping."""
