"""Orientation rules and set determination for partial ancestral graphs."""

from ._pagrules import (
    BudgetExceeded,
    CeilingExceeded,
    ConsistencyError,
    ContradictionError,
    ParseError,
    __version__,
    adjustment_sets,
    canonical,
    generate,
    incorporate_bk,
    mags,
    oracle_adjustment_sets,
    orient,
)

__all__ = [
    "BudgetExceeded",
    "CeilingExceeded",
    "ConsistencyError",
    "ContradictionError",
    "ParseError",
    "__version__",
    "adjustment_sets",
    "canonical",
    "generate",
    "incorporate_bk",
    "mags",
    "oracle_adjustment_sets",
    "orient",
]
