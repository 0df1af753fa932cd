# reprosamples/utils/errors.py
from typing import Optional

USAGE_EXIT_CODE = 2
NUMERICAL_EXIT_CODE = 3


class ReproError(Exception):
    """Base class for every error raised by the library"""

    exit_code = NUMERICAL_EXIT_CODE


class DimensionMismatch(ReproError):
    """Vector or matrix shapes do not line up"""

    exit_code = USAGE_EXIT_CODE


class InvalidLevel(ReproError):
    """A confidence level or probability outside (0, 1)"""

    exit_code = USAGE_EXIT_CODE


class InvalidConfig(ReproError):
    """Configuration values that violate their invariants"""

    exit_code = USAGE_EXIT_CODE


class FlagConflict(ReproError):
    """Mutually exclusive command-line flags were combined"""

    exit_code = USAGE_EXIT_CODE


class CsvParseError(ReproError):
    """Malformed CSV input, with the offending row and column when known"""

    exit_code = USAGE_EXIT_CODE

    def __init__(self, message: str, row: Optional[int] = None, column: Optional[int] = None):
        location = []
        if row is not None:
            location.append(f"row {row}")
        if column is not None:
            location.append(f"column {column}")
        if location:
            message = f"{message} ({', '.join(location)})"
        super().__init__(message)
        self.row = row
        self.column = column


class EmptySupport(ReproError):
    """An operation needed at least one column but got an empty support"""


class ZeroVector(ReproError):
    """A vector that must be nonzero is zero"""


class TooLarge(ReproError):
    """An exhaustive enumeration would exceed its guard"""


class DegenerateResidual(ReproError):
    """The response lies in the span of the model columns"""


class DegenerateDenominator(ReproError):
    """The residual sum of squares in an F ratio vanished"""


class SingularTransform(ReproError):
    """The completed linear transform is singular or ill-conditioned"""


class NonConvergence(ReproError):
    """The coordinate-descent solver stopped before reaching its tolerance"""

    def __init__(self, lam: float, gap: float):
        super().__init__(f"solver did not converge at lambda={lam:.6g} (duality gap {gap:.3g})")
        self.lam = lam
        self.gap = gap
