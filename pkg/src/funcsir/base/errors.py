from typing import Optional

__all__ = [
    "FuncSirError",
    "InputError",
    "DomainError",
    "MembershipError",
    "DegenerateDirectionError",
    "UndefinedGapError",
    "EmptySliceError",
    "DataError",
    "NumericalError",
    "FuncSirWarning",
    "EigengapWarning",
    "ReducedRankWarning",
    "DegenerateResponseWarning",
    "DominanceWarning",
    "BandwidthWarning",
    "FallbackWarning",
    "ClippingWarning",
]


class FuncSirError(Exception):
    """Base class for all errors raised by funcsir"""


class InputError(FuncSirError, ValueError):
    """Rejected input: bad shapes, non-finite entries, out-of-range arguments"""


class DomainError(InputError):
    """A kernel was evaluated outside its domain"""


class MembershipError(InputError):
    """A vector lies detectably outside the range of a Gram matrix"""


class DegenerateDirectionError(InputError):
    """The Fortet ratio denominator vanishes for the given direction"""


class UndefinedGapError(InputError):
    """The eigengap is undefined because all eigenvalues coincide"""


class EmptySliceError(InputError):
    """A slice received no observations"""


class DataError(InputError):
    """Malformed data file content.

    Attributes:
        row: 1-based data row (header excluded) of the offending cell, if known
        column: name of the offending column, if known
    """

    def __init__(
        self, message: str, row: Optional[int] = None, column: Optional[str] = None
    ):
        self.row = row
        self.column = column
        location = []
        if row is not None:
            location.append(f"row {row}")
        if column is not None:
            location.append(f"column {column!r}")
        if location:
            message = f"{message} (at {', '.join(location)})"
        super().__init__(message)


class NumericalError(FuncSirError, RuntimeError):
    """A numerical routine failed to produce a usable result"""


class FuncSirWarning(UserWarning):
    """Base class for funcsir warnings"""


class EigengapWarning(FuncSirWarning):
    """Eigenvalues tie at a truncation cut"""


class ReducedRankWarning(FuncSirWarning):
    """The requested rank exceeds the numerical rank"""


class DegenerateResponseWarning(FuncSirWarning):
    """Tied responses straddle a slice boundary"""


class DominanceWarning(FuncSirWarning):
    """K2 - K1 is not positive semi-definite"""


class BandwidthWarning(FuncSirWarning):
    """A smoother bandwidth was floored"""


class FallbackWarning(FuncSirWarning):
    """All smoother weights underflowed at a query"""


class ClippingWarning(FuncSirWarning):
    """Small negative eigenvalues were clipped to zero"""
