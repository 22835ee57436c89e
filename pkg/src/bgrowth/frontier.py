"""Level-set enumeration with sound pruning, growth values, hull statistics.

Level n holds the vectors obtainable from n seed copies under n-1 map
applications.  Levels are built bottom-up over all splits (m, n-m) of
already-pruned lower levels; because the map is monotone and bilinear in
nonnegative data, a vector below a convex combination of retained vectors
can never contribute to a future maximum of a nonnegative linear
functional, so dominance and majorized-hull pruning preserve every
per-coordinate maximum exactly.

Determinism: vectors are deduplicated and kept in lexicographic order,
and both pruning strategies retain a subset that does not depend on input
order (maximal elements, respectively the unique essential generators of
the majorized hull).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

from .linprog import combination_weights, majorization_weights
from .rational import Scalar
from .system import System, Vector, require_valid, star

STRATEGIES = ("none", "dominance", "majorized")

DEFAULT_LEVEL_BUDGET = 100_000


class BudgetExceededError(RuntimeError):
    """Raised when a level would retain more items than the configured cap."""

    def __init__(self, level: int, count: int, budget: int, what: str = "vectors"):
        super().__init__(f"level {level}: {count} {what} exceed the budget of {budget}")
        self.level = level
        self.count = count
        self.budget = budget


@dataclass(frozen=True)
class LevelSet:
    """Retained vectors for one level, with enumeration accounting.

    raw_count counts the pair products generated for this level before
    deduplication; pruned_count is how many candidates dedup+pruning
    discarded.  provenance[i] is one producing split (m, left_index,
    right_index) into the retained lower levels (None for the seed level).
    shape_counts, when tracked, gives the number of distinct combination
    trees realizing each vector (summed on dedup; only exact with the
    "none" strategy).
    """

    n: int
    vectors: Tuple[Vector, ...]
    raw_count: int
    pruned_count: int
    provenance: Tuple[Optional[Tuple[int, int, int]], ...]
    shape_counts: Optional[Tuple[int, ...]] = None

    @property
    def retained_count(self) -> int:
        return len(self.vectors)


@dataclass(frozen=True)
class FrontierTable:
    system: System
    strategy: str
    levels: Tuple[LevelSet, ...]

    @property
    def depth(self) -> int:
        return len(self.levels)

    def level(self, n: int) -> LevelSet:
        if not 1 <= n <= len(self.levels):
            raise IndexError(f"level {n} not enumerated (depth {len(self.levels)})")
        return self.levels[n - 1]

    def max_entry(self, n: int, k: Optional[int] = None) -> Scalar:
        """Largest entry over level n; largest k-th entry when k is given."""
        vectors = self.level(n).vectors
        if k is None:
            return max(max(v) for v in vectors)
        if not 0 <= k < self.system.dim:
            raise IndexError(f"coordinate {k} out of range for dimension {self.system.dim}")
        return max(v[k] for v in vectors)


def is_majorized(v: Vector, basis: Sequence[Vector]) -> bool:
    """Whether v <= some convex sub-combination (weights summing to <= 1) of basis."""
    return majorization_weights(v, basis) is not None


def _maximal(vectors: list[Vector]) -> list[Vector]:
    """Maximal elements under componentwise <=; input must be deduplicated.

    Componentwise domination implies lexicographic order, so scanning in
    descending lexicographic order only needs to test against the
    already-kept maximal elements.
    """
    keep: list[Vector] = []
    for v in sorted(vectors, reverse=True):
        if not any(all(a >= b for a, b in zip(u, v)) for u in keep):
            keep.append(v)
    return sorted(keep)


def prune(vectors: Sequence[Vector], strategy: str) -> list[Vector]:
    """Deduplicate, sort lexicographically, and prune.

    dominance keeps the maximal elements; majorized additionally drops any
    vector that is majorized by the other retained ones.  Both retained
    sets are canonical (independent of input order): maximal elements are
    unique, and a vector redundant for the majorized hull stays redundant
    as other redundant vectors are removed, so dropping all of them at
    once yields the unique essential generator set.
    """
    if strategy not in STRATEGIES:
        raise ValueError(f"unknown strategy {strategy!r}, expected one of {STRATEGIES}")
    unique = sorted(set(vectors))
    if strategy == "none":
        return unique
    maximal = _maximal(unique)
    if strategy == "dominance":
        return maximal
    keep = []
    for idx, v in enumerate(maximal):
        others = maximal[:idx] + maximal[idx + 1 :]
        if not is_majorized(v, others):
            keep.append(v)
    if not keep:
        return maximal[:1]  # all-zero level: keep the zero vector itself
    return keep


def enumerate_levels(
    system: System,
    depth: int,
    strategy: str = "dominance",
    *,
    level_budget: int = DEFAULT_LEVEL_BUDGET,
    count_shapes: bool = False,
) -> FrontierTable:
    """Build levels 1..depth bottom-up with the given pruning strategy.

    Raises BudgetExceededError naming the level when a level would hold
    more than level_budget vectors.  With count_shapes (strategy "none"
    only) each vector carries the number of combination trees realizing
    it, so the per-level totals follow the Catalan recurrence.
    """
    if depth < 1:
        raise ValueError("depth must be >= 1")
    if strategy not in STRATEGIES:
        raise ValueError(f"unknown strategy {strategy!r}, expected one of {STRATEGIES}")
    if count_shapes and strategy != "none":
        raise ValueError("tree-shape accounting requires strategy 'none'")
    require_valid(system)

    levels = [
        LevelSet(
            n=1,
            vectors=(system.seed,),
            raw_count=1,
            pruned_count=0,
            provenance=(None,),
            shape_counts=(1,) if count_shapes else None,
        )
    ]
    for n in range(2, depth + 1):
        candidates: dict[Vector, tuple] = {}
        raw = 0
        for m in range(1, n):
            left = levels[m - 1]
            right = levels[n - m - 1]
            for li, x in enumerate(left.vectors):
                for ri, y in enumerate(right.vectors):
                    w = star(system.map, x, y)
                    raw += 1
                    entry = candidates.get(w)
                    if entry is None:
                        shapes = 0
                        if count_shapes:
                            shapes = left.shape_counts[li] * right.shape_counts[ri]
                        candidates[w] = ((m, li, ri), shapes)
                    elif count_shapes:
                        prov, shapes = entry
                        candidates[w] = (prov, shapes + left.shape_counts[li] * right.shape_counts[ri])
            if len(candidates) > level_budget:
                raise BudgetExceededError(n, len(candidates), level_budget)
        kept = prune(list(candidates), strategy)
        if len(kept) > level_budget:
            raise BudgetExceededError(n, len(kept), level_budget)
        levels.append(
            LevelSet(
                n=n,
                vectors=tuple(kept),
                raw_count=raw,
                pruned_count=raw - len(kept),
                provenance=tuple(candidates[v][0] for v in kept),
                shape_counts=tuple(candidates[v][1] for v in kept) if count_shapes else None,
            )
        )
    return FrontierTable(system=system, strategy=strategy, levels=tuple(levels))


def tree_count(n: int) -> int:
    """Number of rooted binary trees with n leaves: the (n-1)-th Catalan number."""
    if n < 1:
        raise ValueError("n must be >= 1")
    m = n - 1
    return math.comb(2 * m, m) // (m + 1)


# ---------------------------------------------------------------------------
# convex-hull vertex counting


def _hull_vertices_2d(points: list[Vector]) -> int:
    """Vertices of the planar hull by monotone chain with exact cross products.

    Collinear boundary points are not vertices.  Input deduplicated.
    """
    pts = sorted(points)
    if len(pts) <= 2:
        return len(pts)

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    def chain(seq):
        out = []
        for p in seq:
            while len(out) >= 2 and cross(out[-2], out[-1], p) <= 0:
                out.pop()
            out.append(p)
        return out

    lower = chain(pts)
    upper = chain(reversed(pts))
    return len(lower[:-1] + upper[:-1])


def hull_vertex_count(table: FrontierTable, n: int) -> int:
    """Number of extreme points of the convex hull of the level-n vectors.

    Exact for tables built with strategy "none"; on pruned tables the
    result is a lower proxy for the unpruned value (callers should label
    it as such).  Dimensions 1 and 2 use direct extreme-point logic, higher
    dimensions an exact rational LP membership test per point.
    """
    points = sorted(set(table.level(n).vectors))
    if len(points) <= 2:
        return len(points)
    d = table.system.dim
    if d == 1:
        return 2  # distinct min and max
    if d == 2:
        return _hull_vertices_2d(points)
    count = 0
    for idx, p in enumerate(points):
        others = points[:idx] + points[idx + 1 :]
        if combination_weights(p, others) is None:
            count += 1
    return count


# ---------------------------------------------------------------------------
# optimal-tree instrumentation


def optimal_tree(table: FrontierTable, n: int, k: Optional[int] = None):
    """One combination tree realizing the level-n maximum (entry k if given).

    Returns nested pairs with the string "s" at the leaves.  Uses the
    recorded provenance, so the tree is reproducible and its evaluation
    through the map yields the retained vector exactly.
    """
    level = table.level(n)
    if k is None:
        best = max(range(len(level.vectors)), key=lambda i: (max(level.vectors[i]), level.vectors[i]))
    else:
        best = max(range(len(level.vectors)), key=lambda i: (level.vectors[i][k], level.vectors[i]))
    return _tree_of(table, n, best)


def _tree_of(table: FrontierTable, n: int, index: int):
    prov = table.level(n).provenance[index]
    if prov is None:
        return "s"
    m, li, ri = prov
    return (_tree_of(table, m, li), _tree_of(table, n - m, ri))


def subtree_leaf_counts(tree) -> list[int]:
    """Leaf counts of every subtree (internal nodes and leaves)."""
    counts = []

    def walk(t) -> int:
        if t == "s":
            counts.append(1)
            return 1
        size = walk(t[0]) + walk(t[1])
        counts.append(size)
        return size

    walk(tree)
    return counts
