"""Built-in example systems.

The fixed names cover the classic growth regimes: a system whose maximum
entry grows linearly, quadratically, quartically, the quadratic-map
recurrence system (growth rate 1.502836801...), and a generator for
matrix-multiplication systems, whose level sets collapse to the flattened
matrix powers.
"""

from __future__ import annotations

from .rational import rat
from .system import BilinearMap, System

_FIXED = {
    # u*v = (u1 v2 + u2 v1, u2 v2), seed (1, 1): every combination gives (n, 1)
    "linear-order": (
        2,
        (1, 1),
        [(0, 0, 1, 1), (0, 1, 0, 1), (1, 1, 1, 1)],
    ),
    # x*y = (x1 y1 + x2 y2, x2 y2), seed (1, 1): the Aho-Sloane quadratic recurrence
    "aho-sloane": (
        2,
        (1, 1),
        [(0, 0, 0, 1), (0, 1, 1, 1), (1, 1, 1, 1)],
    ),
    # u*v = (u1 v2 + u2 v1, u2 v2, u1 v1), seed (1, 1, 1): third entry of order n^2
    "quadratic-order": (
        3,
        (1, 1, 1),
        [(0, 0, 1, 1), (0, 1, 0, 1), (1, 1, 1, 1), (2, 0, 0, 1)],
    ),
    # u*v = (u1 v2 + u2 v1, u2 v2, u1 v1, u3 v3), seed (1, 1, 1, 1): order n^4
    "quartic-order": (
        4,
        (1, 1, 1, 1),
        [(0, 0, 1, 1), (0, 1, 0, 1), (1, 1, 1, 1), (2, 0, 0, 1), (3, 2, 2, 1)],
    ),
}


def example_names() -> tuple:
    return tuple(sorted(_FIXED)) + ("matmul:<d>:<entries>",)


def matmul_system(size: int, entries) -> System:
    """Matrix multiplication on flattened d x d matrices, seeded by `entries`.

    Row-major flattening; (X Y)[a][b] = sum_c X[a][c] Y[c][b] gives the
    coefficients c[(a,b)][(a,c)][(c,b)] = 1.  Zero seed entries are
    allowed here (the matrix may legitimately contain zeros).
    """
    if size < 1:
        raise ValueError("matrix size must be >= 1")
    values = [rat(e) for e in entries]
    if len(values) != size * size:
        raise ValueError(f"need {size * size} entries for a {size}x{size} matrix")
    if any(v < 0 for v in values):
        raise ValueError("matrix entries must be nonnegative")

    def idx(a: int, b: int) -> int:
        return a * size + b

    coeffs = []
    for a in range(size):
        for b in range(size):
            for c in range(size):
                coeffs.append((idx(a, b), idx(a, c), idx(c, b), 1))
    allow_zero = any(v == 0 for v in values)
    return System(BilinearMap(size * size, coeffs), tuple(values), allow_zero)


def make_example(name: str) -> System:
    """Instantiate a built-in by name; matmul uses "matmul:<d>:<e1,e2,...>"."""
    if name in _FIXED:
        dim, seed, coeffs = _FIXED[name]
        return System(BilinearMap(dim, coeffs), seed)
    if name.startswith("matmul:"):
        parts = name.split(":")
        if len(parts) != 3:
            raise ValueError("matmul systems are named matmul:<d>:<e1,e2,...>")
        size = int(parts[1])
        entries = [e for e in parts[2].split(",") if e]
        return matmul_system(size, entries)
    raise ValueError(f"unknown example {name!r}; known: {', '.join(example_names())}")
