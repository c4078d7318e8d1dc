from .dataset import Dataset, GridFunction, as_grid, as_values
from .errors import (
    BandwidthWarning,
    ClippingWarning,
    DataError,
    DegenerateDirectionError,
    DegenerateResponseWarning,
    DomainError,
    DominanceWarning,
    EigengapWarning,
    EmptySliceError,
    FallbackWarning,
    FuncSirError,
    FuncSirWarning,
    InputError,
    MembershipError,
    NumericalError,
    ReducedRankWarning,
    UndefinedGapError,
)
from .policy import DEFAULT_POLICY, RankPolicy

__all__ = [
    "Dataset", "GridFunction", "as_grid", "as_values",
    "RankPolicy", "DEFAULT_POLICY",
    "FuncSirError", "InputError", "DomainError", "MembershipError",
    "DegenerateDirectionError", "UndefinedGapError", "EmptySliceError",
    "DataError", "NumericalError",
    "FuncSirWarning", "EigengapWarning", "ReducedRankWarning",
    "DegenerateResponseWarning", "DominanceWarning", "BandwidthWarning",
    "FallbackWarning", "ClippingWarning",
]
