"""Linear patterns: one-hole combination trees and their matrices.

A pattern is a combination tree with one marked leaf; substituting a
vector variable at the mark makes the tree's value a linear function of
it, represented by a d x d matrix.  Concatenating patterns multiplies
their matrices and adds their leaf counts, and every pattern decomposes
into root-branch patterns (mark directly under the root), whose matrices
are computable straight from a frontier level.  Diagonal entries give
certified lower bounds on the growth rate: a pattern with matrix M and
L leaves proves rate >= M[i][i]**(1/L).

Every matrix here carries a replayable witness (the sequence of branch
steps with the actual subtree vectors), so emitted bounds can be audited
without re-running the search.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Optional, Sequence, Tuple

from .frontier import BudgetExceededError, FrontierTable
from .rational import RootValue, Scalar
from .system import DimensionMismatchError, System, Vector

Matrix = Tuple[Tuple[Scalar, ...], ...]


@dataclass(frozen=True)
class BranchStep:
    """One root-branch pattern: the mark on one side, a realized vector on the other."""

    side: str  # "L": marked leaf is the left child; "R": right child
    leaves: int
    branch: Vector

    def key(self):
        return (self.side, self.leaves, self.branch)


@dataclass(frozen=True)
class PatternMatrix:
    matrix: Matrix
    leaves: int
    witness: Tuple[BranchStep, ...]

    @property
    def dim(self) -> int:
        return len(self.matrix)

    @cached_property
    def witness_key(self):
        return tuple(step.key() for step in self.witness)

    @cached_property
    def columns(self) -> Matrix:
        return tuple(zip(*self.matrix))

    def diagonal_bound(self, index: int) -> RootValue:
        return RootValue(self.matrix[index][index], self.leaves)


def branch_matrix(system: System, branch: Vector, leaves: int, side: str) -> PatternMatrix:
    """Matrix of the pattern whose mark is one child of the root.

    With the mark on the left the tree computes u * branch, so
    M[k][i] = sum_j c[k][i][j] branch[j]; on the right it computes
    branch * u, so M[k][i] = sum_j c[k][j][i] branch[j].
    """
    if side not in ("L", "R"):
        raise ValueError("side must be 'L' or 'R'")
    if len(branch) != system.dim:
        raise DimensionMismatchError("branch vector has wrong dimension")
    if leaves < 1:
        raise ValueError("a pattern has at least one leaf besides the mark")
    d = system.dim
    rows = [[0] * d for _ in range(d)]
    for k, i, j, c in system.map.entries:
        if side == "L":
            rows[k][i] += c * branch[j]
        else:
            rows[k][j] += c * branch[i]
    return PatternMatrix(
        matrix=tuple(tuple(r) for r in rows),
        leaves=leaves,
        witness=(BranchStep(side, leaves, branch),),
    )


def branch_matrices(system: System, table: FrontierTable, m: int) -> Tuple[PatternMatrix, ...]:
    """Left- and right-marked branch matrices for every retained level-m vector."""
    out = []
    for v in table.level(m).vectors:
        out.append(branch_matrix(system, v, m, "L"))
        out.append(branch_matrix(system, v, m, "R"))
    return tuple(out)


def compose(first: PatternMatrix, second: PatternMatrix) -> PatternMatrix:
    """Concatenation: matrix product, leaf counts add, witnesses concatenate.

    There is no identity element; the empty pattern does not exist.
    """
    if first.dim != second.dim:
        raise DimensionMismatchError("pattern dimensions differ")
    cols = second.columns
    prod = tuple(
        tuple(sum(x * y for x, y in zip(row, col)) for col in cols) for row in first.matrix
    )
    return PatternMatrix(prod, first.leaves + second.leaves, first.witness + second.witness)


def replay(system: System, witness: Sequence[BranchStep]) -> PatternMatrix:
    """Recompute a pattern matrix from its witness alone (audit path)."""
    if not witness:
        raise ValueError("empty witness")
    result = branch_matrix(system, witness[0].branch, witness[0].leaves, witness[0].side)
    for step in witness[1:]:
        result = compose(result, branch_matrix(system, step.branch, step.leaves, step.side))
    return result


def pattern_for_path(system: System, path: Sequence[int]) -> PatternMatrix:
    """A pattern of exactly len(path)-1 leaves whose matrix is positive at (path[0], path[-1]).

    Realizes each edge by a one-leaf branch pattern with the seed as the
    opposite branch; a path with zero edges is rejected (zero-leaf
    patterns do not exist).
    """
    if len(path) < 2:
        raise ValueError("a path needs at least one edge; zero-leaf patterns do not exist")
    result = None
    for a, b in zip(path, path[1:]):
        step = None
        for side in ("L", "R"):
            cand = branch_matrix(system, system.seed, 1, side)
            if cand.matrix[a][b] > 0:
                step = cand
                break
        if step is None:
            raise ValueError(f"no coefficient realizes the edge {a} -> {b} with this seed")
        result = step if result is None else compose(result, step)
    return result


@dataclass(frozen=True)
class DiagonalBound:
    """A certified growth-rate lower bound value = M[i][i]**(1/leaves).

    Decimal renderings round toward zero so the bound is never overstated.
    """

    value: RootValue
    index: int
    pattern: PatternMatrix

    def decimal(self, digits: int = 60) -> str:
        return self.value.decimal(digits, round_up=False)


def _better(cand: tuple, best: Optional[tuple]) -> bool:
    """cand/best: (RootValue, leaves, witness_key, index); prefer larger value,
    then fewer leaves, then lexicographically smaller witness, then index."""
    if best is None:
        return True
    c = cand[0].compare(best[0])
    if c != 0:
        return c > 0
    return (cand[1], cand[2], cand[3]) < (best[1], best[2], best[3])


class SearchResult:
    """Internal DP outcome: best diagonal bounds overall, per index, per budget."""

    def __init__(self):
        self._best: Optional[tuple] = None
        self._best_per_index: dict[int, tuple] = {}
        self.running_best: list[tuple[int, DiagonalBound]] = []

    def offer(self, pm: PatternMatrix):
        for idx in range(pm.dim):
            val = pm.matrix[idx][idx]
            cand = (RootValue(val, pm.leaves), pm.leaves, pm.witness_key, idx, pm)
            if _better(cand[:4], self._best[:4] if self._best else None):
                self._best = cand
            prev = self._best_per_index.get(idx)
            if _better(cand[:4], prev[:4] if prev else None):
                self._best_per_index[idx] = cand

    def snapshot(self, leaves: int):
        if self._best is not None:
            self.running_best.append((leaves, self.best()))

    def best(self) -> Optional[DiagonalBound]:
        if self._best is None:
            return None
        value, _leaves, _wkey, idx, pm = self._best
        return DiagonalBound(value, idx, pm)

    def best_per_index(self) -> dict[int, DiagonalBound]:
        return {
            idx: DiagonalBound(v[0], v[3], v[4]) for idx, v in sorted(self._best_per_index.items())
        }


def _dominance_prune(mats: list[PatternMatrix]) -> list[PatternMatrix]:
    """Maximal matrices under entrywise <= (equal leaf counts, distinct matrices).

    A strict dominator has a strictly larger entry sum, so scanning in
    descending total order only ever needs to test against already-kept
    matrices.
    """

    def flat(pm):
        return [x for row in pm.matrix for x in row]

    order = sorted(mats, key=lambda pm: (sum(flat(pm)), pm.matrix), reverse=True)
    kept: list[PatternMatrix] = []
    kept_flat: list[list] = []
    for pm in order:
        entries = flat(pm)
        if not any(all(a >= b for a, b in zip(other, entries)) for other in kept_flat):
            kept.append(pm)
            kept_flat.append(entries)
    kept.sort(key=lambda pm: (pm.matrix, pm.witness_key))
    return kept


def search(
    system: System,
    table: FrontierTable,
    max_leaves: int,
    *,
    matrix_budget: int = 200_000,
) -> SearchResult:
    """Dynamic program over compositions of root-branch patterns.

    Every pattern is a concatenation of root-branch patterns whose
    opposite branches realize frontier vectors, so composing generators on
    the right while pruning each leaf-count class by entrywise dominance
    loses nothing for the diagonal objective (the objective is monotone in
    every entry, and branch matrices are monotone in the branch vector, so
    pruned frontier vectors cannot hide a better diagonal).
    """
    if max_leaves < 1:
        raise ValueError("max_leaves must be >= 1")
    gens_by_leaves: dict[int, list[PatternMatrix]] = {}
    for m in range(1, min(table.depth, max_leaves) + 1):
        unique_gens: dict[Matrix, PatternMatrix] = {}
        for gen in branch_matrices(system, table, m):
            prev = unique_gens.get(gen.matrix)
            if prev is None or gen.witness_key < prev.witness_key:
                unique_gens[gen.matrix] = gen
        gens_by_leaves[m] = sorted(unique_gens.values(), key=lambda pm: pm.matrix)

    result = SearchResult()
    by_leaves: dict[int, list[PatternMatrix]] = {}
    stored = 0
    for leaves in range(1, max_leaves + 1):
        unique: dict[Matrix, PatternMatrix] = {}

        def consider(pm: PatternMatrix):
            prev = unique.get(pm.matrix)
            if prev is None or pm.witness_key < prev.witness_key:
                unique[pm.matrix] = pm

        for gen in gens_by_leaves.get(leaves, ()):
            consider(gen)
        for m in sorted(gens_by_leaves):
            prefix = by_leaves.get(leaves - m)
            if not prefix:
                continue
            for left in prefix:
                for gen in gens_by_leaves[m]:
                    consider(compose(left, gen))
        if not unique:
            result.snapshot(leaves)
            continue
        kept = _dominance_prune(list(unique.values()))
        for pm in kept:
            result.offer(pm)
        by_leaves[leaves] = kept
        stored += len(kept)
        if stored > matrix_budget:
            raise BudgetExceededError(leaves, stored, matrix_budget, what="pattern matrices")
        result.snapshot(leaves)
    return result


def search_lower_bound(
    system: System,
    table: FrontierTable,
    max_leaves: int,
    *,
    matrix_budget: int = 200_000,
) -> DiagonalBound:
    """Best certified diagonal bound over all patterns with <= max_leaves leaves.

    Sound for any budget (each emitted bound has a replayable witness);
    non-decreasing in max_leaves; sharp in the limit.
    """
    result = search(system, table, max_leaves, matrix_budget=matrix_budget)
    best = result.best()
    if best is None:  # no generators produced anything: bound is trivially zero
        zero = branch_matrix(system, system.seed, 1, "L")
        return DiagonalBound(RootValue(0, 1), 0, zero)
    return best


def witness_sexp(pm: PatternMatrix) -> str:
    """Render a pattern witness as an s-expression-like tree text."""
    from .rational import fmt  # local import to keep module deps one-way

    steps = [
        f"(branch {s.side} {s.leaves} ({' '.join(fmt(x) for x in s.branch)}))"
        for s in pm.witness
    ]
    return steps[0] if len(steps) == 1 else "(compose " + " ".join(steps) + ")"


def power_diagonal_bound(pm: PatternMatrix, repetitions: int) -> DiagonalBound:
    """Best diagonal bound among the powers of one pattern matrix.

    Self-concatenating t times gives a pattern with t * leaves leaves and
    matrix M**t, so max over t <= repetitions and i of
    ((M**t)[i][i])**(1/(t*leaves)) is an always-sound, exact route toward
    the spectral radius of M without floating-point eigensolvers.
    """
    if repetitions < 1:
        raise ValueError("repetitions must be >= 1")
    power = pm
    best: Optional[tuple] = None
    best_pm: Optional[PatternMatrix] = None
    for _t in range(1, repetitions + 1):
        for idx in range(pm.dim):
            cand = (
                RootValue(power.matrix[idx][idx], power.leaves),
                power.leaves,
                power.witness_key,
                idx,
            )
            if _better(cand, best):
                best = cand
                best_pm = power
        if _t < repetitions:
            power = compose(power, pm)
    return DiagonalBound(best[0], best[3], best_pm)
