"""Exact scalar arithmetic helpers.

Every quantity in this package is an exact rational.  Integral values are
kept as plain ints (much faster than Fraction in hot loops), everything
else as fractions.Fraction; the two mix freely in arithmetic, ordering,
hashing and set membership.  Decimal output is always produced with an
explicit rounding direction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from decimal import Decimal, ROUND_HALF_EVEN, localcontext
from fractions import Fraction
from typing import Union

import gmpy2

Scalar = Union[int, Fraction]

_MPZ = type(gmpy2.mpz(0))


def rat(value, den=None) -> Scalar:
    """Coerce to an exact scalar.

    Accepts ints, Fractions, strings ("7", "3/4", "-1/2") and an optional
    separate denominator.  Floats are rejected: they carry rounding error.
    """
    if den is not None:
        return _normalize(Fraction(rat(value), rat(den)))
    if isinstance(value, bool):
        raise TypeError("bool is not a scalar")
    if isinstance(value, int):
        return value
    if isinstance(value, Fraction):
        return _normalize(value)
    if isinstance(value, str):
        try:
            return _normalize(Fraction(value.strip()))
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"not an exact rational: {value!r}") from exc
    if isinstance(value, _MPZ):
        return int(value)
    raise TypeError(f"not an exact rational: {value!r}")


def _normalize(f: Fraction) -> Scalar:
    return f.numerator if f.denominator == 1 else f


def num_den(x: Scalar) -> tuple[int, int]:
    if isinstance(x, int):
        return x, 1
    return x.numerator, x.denominator


def fmt(x: Scalar) -> str:
    """Canonical text form: "p/q", or "p" when the value is integral."""
    n, d = num_den(x)
    return str(n) if d == 1 else f"{n}/{d}"


def decimal_str(x: Scalar, sig: int = 12) -> str:
    """Decimal rendering to `sig` significant digits, nearest/ties-to-even."""
    n, d = num_den(x)
    with localcontext() as ctx:
        ctx.prec = sig
        ctx.rounding = ROUND_HALF_EVEN
        return str(Decimal(n) / Decimal(d))


def root_floor_scaled(base: Scalar, root: int, digits: int) -> tuple[int, bool]:
    """floor(10**digits * base**(1/root)) for base >= 0, plus exactness flag."""
    if root < 1:
        raise ValueError("root must be >= 1")
    n, d = num_den(base)
    if n < 0:
        raise ValueError("negative base has no real root here")
    scaled = n * 10 ** (digits * root)
    r, exact = gmpy2.iroot(scaled // d, root)
    return int(r), bool(exact) and scaled % d == 0


def root_decimal(base: Scalar, root: int, digits: int = 60, *, round_up: bool = False) -> str:
    """Decimal string of base**(1/root) with directed rounding.

    Lower bounds must round down (toward zero), upper bounds up; callers
    pick the direction explicitly.
    """
    r, exact = root_floor_scaled(base, root, digits)
    if round_up and not exact:
        r += 1
    whole, frac = divmod(r, 10**digits)
    text = f"{whole}.{frac:0{digits}d}" if digits else str(whole)
    return text.rstrip("0").rstrip(".") if "." in text else text


def _logval(x: Scalar) -> float:
    n, d = num_den(x)
    if n == 0:
        return float("-inf")
    return math.log(n) - (math.log(d) if d != 1 else 0.0)


@dataclass(frozen=True)
class RootValue:
    """An exact nonnegative number of the form base**(1/root).

    Comparisons are exact: a**(1/p) <=> b**(1/q) is decided by comparing
    a**q against b**p in integer arithmetic (with a float log prefilter to
    skip the big powers when the values are clearly apart).
    """

    base: Scalar
    root: int = 1

    def __post_init__(self):
        if self.root < 1:
            raise ValueError("root must be >= 1")
        n, _ = num_den(self.base)
        if n < 0:
            raise ValueError("base must be >= 0")

    def compare(self, other: "RootValue") -> int:
        an, ad = num_den(self.base)
        bn, bd = num_den(other.base)
        if an == 0 or bn == 0:
            return (an > 0) - (bn > 0)
        la = _logval(self.base) / self.root
        lb = _logval(other.base) / other.root
        if abs(la - lb) > 1e-9 * max(1.0, abs(la), abs(lb)):
            return -1 if la < lb else 1
        lhs = an ** other.root * bd**self.root
        rhs = bn**self.root * ad ** other.root
        return (lhs > rhs) - (lhs < rhs)

    def compare_scalar(self, q: Scalar) -> int:
        return self.compare(RootValue(q, 1))

    def __lt__(self, other):
        return self.compare(other) < 0

    def __le__(self, other):
        return self.compare(other) <= 0

    def is_zero(self) -> bool:
        return num_den(self.base)[0] == 0

    def decimal(self, digits: int = 60, *, round_up: bool = False) -> str:
        return root_decimal(self.base, self.root, digits, round_up=round_up)

    def to_fraction(self, digits: int = 30) -> Fraction:
        """Rational lower approximation (floored at `digits` decimals)."""
        r, _ = root_floor_scaled(self.base, self.root, digits)
        return Fraction(r, 10**digits)

    def __float__(self) -> float:
        return math.exp(_logval(self.base) / self.root) if not self.is_zero() else 0.0

    def describe(self) -> str:
        if self.root == 1:
            return fmt(self.base)
        return f"({fmt(self.base)})^(1/{self.root})"
