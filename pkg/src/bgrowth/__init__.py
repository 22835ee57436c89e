"""Exact growth analysis for nonnegative bilinear systems.

Enumerates the vectors reachable by combining n seed copies under a
nonnegative bilinear map, computes the extremal-entry growth function
exactly, analyzes the dependency structure, and produces certified
two-sided bounds on the growth rate with replayable witnesses.
"""

from .frontier import (
    BudgetExceededError,
    FrontierTable,
    LevelSet,
    enumerate_levels,
    hull_vertex_count,
    is_majorized,
    prune,
    tree_count,
)
from .rational import RootValue, Scalar, fmt, rat
from .system import (
    BilinearMap,
    DimensionMismatchError,
    System,
    ValidationReport,
    scale_seed,
    star,
    validate,
)

__version__ = "0.1.0"

__all__ = [
    "BilinearMap",
    "BudgetExceededError",
    "DimensionMismatchError",
    "FrontierTable",
    "LevelSet",
    "RootValue",
    "Scalar",
    "System",
    "ValidationReport",
    "enumerate_levels",
    "fmt",
    "hull_vertex_count",
    "is_majorized",
    "prune",
    "rat",
    "scale_seed",
    "star",
    "tree_count",
    "validate",
]
