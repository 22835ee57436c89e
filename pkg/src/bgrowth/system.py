"""Bilinear systems over exact nonnegative rationals.

A system pairs a bilinear map, given by a sparse coefficient tensor
c[k][i][j] >= 0, with a strictly positive seed vector.  The product
(x * y)_k = sum_{i,j} c[k][i][j] x_i y_j is evaluated exactly.  All values
are immutable after construction and every operation is a pure function,
so everything here is safe to use concurrently.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Tuple

from .rational import Scalar, fmt, rat

Vector = Tuple[Scalar, ...]


class DimensionMismatchError(ValueError):
    """An operand's length does not match the map dimension."""


def vector(entries: Iterable) -> Vector:
    return tuple(rat(e) for e in entries)


class BilinearMap:
    """Sparse nonnegative coefficient tensor defining (x*y)_k = sum c[k][i][j] x_i y_j.

    Indices are 0-based.  Exact zero coefficients are dropped; a duplicate
    (k, i, j) entry is an error.  Sign validation is deferred to
    `validate` so that invalid tensors can still be reported on.
    """

    __slots__ = ("dim", "entries", "_lookup", "_by_k")

    def __init__(self, dim: int, entries: Iterable[tuple]):
        if dim < 1:
            raise ValueError("dimension must be >= 1")
        self.dim = dim
        seen = {}
        for k, i, j, value in entries:
            for idx in (k, i, j):
                if not 0 <= idx < dim:
                    raise IndexError(f"coefficient index ({k},{i},{j}) out of range for dim {dim}")
            if (k, i, j) in seen:
                raise ValueError(f"duplicate coefficient ({k},{i},{j})")
            v = rat(value)
            if v != 0:
                seen[(k, i, j)] = v
        self.entries: tuple = tuple((k, i, j, v) for (k, i, j), v in sorted(seen.items()))
        self._lookup = {(k, i, j): v for k, i, j, v in self.entries}
        by_k = [[] for _ in range(dim)]
        for k, i, j, v in self.entries:
            by_k[k].append((i, j, v))
        self._by_k = tuple(tuple(row) for row in by_k)

    def coeff(self, k: int, i: int, j: int) -> Scalar:
        return self._lookup.get((k, i, j), 0)

    def rows(self, k: int) -> tuple:
        """Sparse (i, j, value) triples for output index k."""
        return self._by_k[k]

    def __eq__(self, other):
        return isinstance(other, BilinearMap) and (self.dim, self.entries) == (other.dim, other.entries)

    def __hash__(self):
        return hash((self.dim, self.entries))

    def __repr__(self):
        terms = ", ".join(f"c[{k}][{i}][{j}]={fmt(v)}" for k, i, j, v in self.entries)
        return f"BilinearMap(dim={self.dim}, {terms or 'zero'})"


def star(bmap: BilinearMap, u: Vector, v: Vector) -> Vector:
    """Exact bilinear product w_k = sum_{i,j} c[k][i][j] u_i v_j."""
    if len(u) != bmap.dim or len(v) != bmap.dim:
        raise DimensionMismatchError(
            f"operands of length {len(u)}, {len(v)} for map of dimension {bmap.dim}"
        )
    out = []
    for k in range(bmap.dim):
        acc = 0
        for i, j, c in bmap.rows(k):
            acc += c * u[i] * v[j]
        out.append(acc)
    return tuple(out)


@dataclass(frozen=True)
class System:
    """A bilinear map together with its seed vector.

    `allow_zero_seed` relaxes the strict-positivity requirement on the
    seed; matrix-multiplication systems need it (their seed is a flattened
    matrix which may contain zeros) and nothing in the exact machinery
    breaks, but the growth-rate theory is only guaranteed for positive
    seeds, so the flag is off by default.
    """

    map: BilinearMap
    seed: Vector
    allow_zero_seed: bool = False

    def __post_init__(self):
        object.__setattr__(self, "seed", vector(self.seed))

    @property
    def dim(self) -> int:
        return self.map.dim

    def star(self, u: Vector, v: Vector) -> Vector:
        return star(self.map, u, v)


@dataclass(frozen=True)
class Violation:
    kind: str          # "seed" | "coefficient"
    where: tuple       # (i,) for seed, (k, i, j) for coefficients
    detail: str

    def __str__(self):
        return f"{self.kind}{self.where}: {self.detail}"


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    violations: Tuple[Violation, ...]

    def __str__(self):
        if self.ok:
            return "valid"
        return "; ".join(str(v) for v in self.violations)


def validate(system: System) -> ValidationReport:
    """Check the sign conditions: coefficients >= 0, seed entries > 0.

    Report-valued; never raises.  With `allow_zero_seed` set on the
    system, zero seed entries are accepted (negative ones never are).
    """
    problems = []
    if len(system.seed) != system.map.dim:
        problems.append(
            Violation("seed", (), f"length {len(system.seed)} != dimension {system.map.dim}")
        )
    for i, s in enumerate(system.seed):
        if s < 0 or (s == 0 and not system.allow_zero_seed):
            want = ">= 0" if system.allow_zero_seed else "> 0"
            problems.append(Violation("seed", (i,), f"entry {fmt(s)} is not {want}"))
    for k, i, j, v in system.map.entries:
        if v < 0:
            problems.append(Violation("coefficient", (k, i, j), f"value {fmt(v)} is negative"))
    return ValidationReport(not problems, tuple(problems))


def require_valid(system: System) -> None:
    report = validate(system)
    if not report.ok:
        raise ValueError(f"invalid system: {report}")


def scale_seed(system: System, factor: Scalar) -> System:
    """Replace the seed s by s/factor, keeping the map.

    The value of an n-leaf combination tree is multilinear of degree n in
    its seed occurrences, so every level-n vector of the scaled system
    equals the corresponding original vector divided by factor**n.
    """
    f = rat(factor)
    if f <= 0:
        raise ValueError(f"scale factor must be > 0, got {fmt(f)}")
    return System(system.map, tuple(Fraction(s) / f for s in system.seed), system.allow_zero_seed)
