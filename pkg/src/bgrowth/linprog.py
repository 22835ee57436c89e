"""Exact rational linear-program feasibility.

A small phase-1 simplex over exact rationals with Bland's rule (which
guarantees termination).  It decides the two feasibility questions the
rest of the package needs and returns an explicit solution that callers
can re-check independently:

  * majorization: is v <= sum_t mu_t b_t componentwise for some
    mu_t >= 0 with sum mu_t <= 1?
  * convex membership: is p = sum_t mu_t q_t for some mu_t >= 0 with
    sum mu_t = 1?

No floating point anywhere; results are exact.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Optional, Sequence

from .rational import Scalar, rat
from .system import Vector


def _solve_phase1(rows: list[list], rhs: list, num_vars: int) -> Optional[list]:
    """Find x >= 0 with A x = b (b >= 0), or None.

    `rows` is the m x n constraint matrix, `rhs` the right-hand side.
    Uses artificial variables and minimizes their sum; Bland's rule keeps
    the pivoting finite.  Returns the first num_vars components of a
    feasible point.
    """
    m = len(rows)
    n = len(rows[0]) if m else 0
    assert all(b >= 0 for b in rhs)
    # tableau columns: n structural vars, m artificials, then rhs
    # (everything as Fraction so pivoting divides exactly)
    tab = []
    for r in range(m):
        row = [Fraction(x) for x in rows[r]] + [Fraction(0)] * m + [Fraction(rhs[r])]
        row[n + r] = Fraction(1)
        tab.append(row)
    basis = [n + r for r in range(m)]
    # objective: minimize sum of artificials; in reduced form the cost row
    # starts as the sum of the constraint rows (artificials are basic)
    cost = [Fraction(0)] * (n + m + 1)
    for r in range(m):
        for c in range(n + m + 1):
            cost[c] += tab[r][c]

    while True:
        enter = -1
        for c in range(n + m):
            if cost[c] > 0:
                enter = c
                break
        if enter < 0:
            break
        leave = -1
        best = None
        for r in range(m):
            a = tab[r][enter]
            if a > 0:
                ratio = tab[r][-1] / a
                if best is None or ratio < best or (ratio == best and basis[r] < basis[leave]):
                    best = ratio
                    leave = r
        if leave < 0:
            # unbounded phase-1 objective cannot happen (bounded below by 0)
            return None
        piv = tab[leave][enter]
        tab[leave] = [x / piv for x in tab[leave]]
        for r in range(m):
            if r != leave and tab[r][enter] != 0:
                f = tab[r][enter]
                tab[r] = [x - f * y for x, y in zip(tab[r], tab[leave])]
        if cost[enter] != 0:
            f = cost[enter]
            cost = [x - f * y for x, y in zip(cost, tab[leave])]
        basis[leave] = enter

    if cost[-1] != 0:
        return None
    x = [Fraction(0)] * (n + m)
    for r, b in enumerate(basis):
        x[b] = tab[r][-1]
    if any(x[n + r] != 0 for r in range(m)):
        return None  # artificial stuck at positive level (defensive; cost said 0)
    return x[:num_vars]


def majorization_weights(v: Vector, basis: Sequence[Vector]) -> Optional[list[Scalar]]:
    """Weights mu >= 0 with sum mu <= 1 and componentwise v <= sum mu_t basis_t.

    Returns None when no such weights exist.  All vectors must share v's
    dimension and be nonnegative.
    """
    d = len(v)
    t = len(basis)
    for b in basis:
        if len(b) != d:
            raise ValueError("majorization basis dimension mismatch")
    if t == 0:
        return [] if all(x <= 0 for x in v) else None
    # fast path: a single basis vector already dominates v
    for idx, b in enumerate(basis):
        if all(b[i] >= v[i] for i in range(d)):
            weights = [rat(0)] * t
            weights[idx] = rat(1)
            return weights
    # variables: mu (t), surplus per coordinate (d), slack for the weight sum;
    # rows with a negative right-hand side are sign-flipped for phase 1
    rows = []
    rhs = []
    for i in range(d):
        flip = v[i] < 0
        row = [(-b[i] if flip else b[i]) for b in basis] + [0] * d + [0]
        row[t + i] = 1 if flip else -1
        rows.append(row)
        rhs.append(-v[i] if flip else v[i])
    rows.append([1] * t + [0] * d + [1])
    rhs.append(1)
    sol = _solve_phase1(rows, rhs, t)
    return None if sol is None else [rat(w) for w in sol]


def combination_weights(p: Vector, points: Sequence[Vector]) -> Optional[list[Scalar]]:
    """Weights mu >= 0 with sum mu = 1 and p = sum mu_t points_t, else None."""
    d = len(p)
    t = len(points)
    for q in points:
        if len(q) != d:
            raise ValueError("membership points dimension mismatch")
    if t == 0:
        return None
    rows = []
    rhs = []
    for i in range(d):
        row = []
        flip = p[i] < 0
        for q in points:
            row.append(-q[i] if flip else q[i])
        rows.append(row)
        rhs.append(-p[i] if flip else p[i])
    rows.append([1] * t)
    rhs.append(1)
    sol = _solve_phase1(rows, rhs, t)
    return None if sol is None else [rat(w) for w in sol]


def check_majorization(v: Vector, basis: Sequence[Vector], weights: Sequence[Scalar]) -> bool:
    """Exact re-validation of a majorization witness (no search)."""
    if len(weights) != len(basis):
        return False
    if any(w < 0 for w in weights):
        return False
    if sum(weights) > 1:
        return False
    for i in range(len(v)):
        if sum(w * b[i] for w, b in zip(weights, basis)) < v[i]:
            return False
    return True
