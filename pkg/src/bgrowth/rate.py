"""Certified two-sided bounds on the growth rate.

The growth rate of a system is lim max-entry(n)**(1/n).  Everything this
module emits is backed by a replayable witness:

  * lower bounds come from pattern diagonals (patterns module) and from
    an explicit supermultiplicativity constant: whenever some coefficient
    c[k][i][j] > 0 has k, i, j in one strongly connected component, the
    shifted sequence beta * g_k(n - d1 - d2) is supermultiplicative for an
    explicitly computed beta, so each of its n-th roots is a certified
    lower bound (Fekete's lemma, supermultiplicative form);
  * upper bounds come from a crude coefficient-sum bound and from hull
    certificates: a finite generator set of the scaled-by-candidate system
    that majorizes the seed and is closed under the product up to
    majorization proves every scaled level bounded, hence rate <= candidate.

A certification failure is never treated as evidence that the candidate
is below the rate (that question is not decidable in general); failures
only steer the bisection, and all reported intervals come from witnesses.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Tuple, Union

from . import depgraph as dg
from . import patterns as pt
from .frontier import (
    DEFAULT_LEVEL_BUDGET,
    BudgetExceededError,
    FrontierTable,
    enumerate_levels,
    prune,
)
from .linprog import check_majorization, majorization_weights
from .rational import RootValue, Scalar, fmt, num_den, rat
from .system import System, Vector, require_valid, scale_seed, star


def crude_upper(system: System) -> Scalar:
    """C * S with C = max_k sum_{i,j} c[k][i][j] and S = max_i seed_i.

    Sound because, by induction, every entry at level n is at most
    (C*S)**n / C (each application multiplies the per-entry bound of its
    two arguments by at most C), so the growth rate is at most C*S.  A
    zero C means no level beyond the first has a nonzero entry and the
    rate is exactly 0.
    """
    require_valid(system)
    row_sums = [0] * system.dim
    for k, _i, _j, v in system.map.entries:
        row_sums[k] += v
    c = max(row_sums) if row_sums else 0
    s = max(system.seed)
    return rat(c * s)


# ---------------------------------------------------------------------------
# explicit supermultiplicativity (Fekete-style lower bounds)


@dataclass(frozen=True)
class FeketeWitness:
    """Explicit constant making a shifted max-entry sequence supermultiplicative.

    c[k][i][j] > 0 with k, i, j in one component; d1, d2 are shortest-path
    lengths i -> k and j -> k, alpha1/alpha2 positive entries of the
    corresponding path patterns.  Grafting a g_k(m)-optimal tree into the
    first path pattern gives a tree of m + d1 leaves whose i-th entry is
    >= alpha1 * g_k(m) (and symmetrically for j), and joining both trees
    under the coefficient yields

        g_k(m + n + d1 + d2) >= beta * g_k(m) * g_k(n),
        beta = c[k][i][j] * alpha1 * alpha2,

    so t_n = beta * g_k(n - d1 - d2) satisfies t_m t_n <= t_{m+n} and each
    t_n**(1/n) is a certified lower bound on the component's growth rate.
    """

    k: int
    i: int
    j: int
    d1: int
    d2: int
    path_i: Tuple[int, ...]
    path_j: Tuple[int, ...]
    alpha1: Scalar
    alpha2: Scalar
    beta: Scalar
    n_used: int


def fekete_lower(
    system: System, table: FrontierTable, k: int
) -> Optional[Tuple[RootValue, FeketeWitness]]:
    """Best shifted-sequence lower bound at vertex k, or None.

    Returns None (the "condition not met" outcome, not an error) when no
    coefficient c[k][i][j] > 0 keeps i and j inside k's component.  All
    qualifying (i, j) pairs are tried; ties prefer the smallest d1 + d2,
    then the lexicographically smallest pair.
    """
    require_valid(system)
    graph = dg.build(system)
    poset = dg.components(graph)
    comp = set(poset.components[poset.component_of(k)])
    pairs = sorted(
        (i, j)
        for (kk, i, j, v) in system.map.entries
        if kk == k and v > 0 and i in comp and j in comp
    )
    if not pairs:
        return None
    best: Optional[Tuple[RootValue, int, Tuple[int, int], int, FeketeWitness]] = None
    for (i, j) in pairs:
        path_i = dg.shortest_path_vertices(graph, i, k)
        path_j = dg.shortest_path_vertices(graph, j, k)
        d1, d2 = len(path_i) - 1, len(path_j) - 1
        alpha1 = pt.pattern_for_path(system, path_i).matrix[i][k] if d1 else 1
        alpha2 = pt.pattern_for_path(system, path_j).matrix[j][k] if d2 else 1
        beta = rat(system.map.coeff(k, i, j) * alpha1 * alpha2)
        shift = d1 + d2
        for n in range(shift + 1, table.depth + 1):
            base = rat(beta * table.max_entry(n - shift, k))
            cand = (
                RootValue(base, n),
                shift,
                (i, j),
                n,
                FeketeWitness(k, i, j, d1, d2, path_i, path_j, alpha1, alpha2, beta, n),
            )
            if best is None or _prefer(cand, best):
                best = cand
    if best is None:
        return None
    return best[0], best[4]


def _prefer(cand, best) -> bool:
    c = cand[0].compare(best[0])
    if c != 0:
        return c > 0
    return (cand[1], cand[2], cand[3]) < (best[1], best[2], best[3])


# ---------------------------------------------------------------------------
# hull certificates (upper bounds)


@dataclass(frozen=True)
class HullCertificate:
    """Machine-checkable proof that the growth rate is at most `bound`.

    generators are vectors of the system scaled by `bound`;
    seed_weights majorize the scaled seed by the generators, and
    product_weights[a * len(generators) + b] majorize the product of
    generators a and b.  Validity implies every scaled level set is
    majorized by the generators, so the unscaled max-entry function grows
    at most like bound**n times a constant.
    """

    bound: Scalar
    dim: int
    generators: Tuple[Vector, ...]
    seed_weights: Tuple[Scalar, ...]
    product_weights: Tuple[Tuple[Scalar, ...], ...]


@dataclass(frozen=True)
class CertifyFailure:
    """A closure attempt that ran out of levels, with the escaping product."""

    bound: Scalar
    levels_tried: int
    escaping: Optional[Vector]
    reason: str


def certify_upper(
    system: System,
    bound,
    max_level: int = 24,
    *,
    generator_budget: int = 2_000,
    level_budget: int = DEFAULT_LEVEL_BUDGET,
) -> Union[HullCertificate, CertifyFailure]:
    """Search for a hull certificate at the candidate bound.

    Accumulates majorized-hull generators of the scaled system's levels
    1..L and, after each level, attempts closure (seed and all pairwise
    products majorized).  Returns the certificate on success, otherwise a
    CertifyFailure carrying the last escaping product vector.  Failure is
    NOT evidence that the true rate exceeds the candidate.
    """
    require_valid(system)
    b = rat(bound)
    if b <= 0:
        raise ValueError("candidate bound must be > 0")
    scaled = scale_seed(system, b)
    table = enumerate_levels(scaled, max_level, "majorized", level_budget=level_budget)
    pool: list[Vector] = []  # dominance-maintained union of the scaled levels
    last_escape: Optional[Vector] = None
    previous: Optional[list[Vector]] = None
    for level in range(1, max_level + 1):
        escapes = [
            v for v in table.level(level).vectors if majorization_weights(v, pool) is None
        ]
        if escapes:
            # the hull still grows; a closure attempt cannot succeed because
            # every level vector is a product of already-majorized vectors
            pool = prune(pool + escapes, "dominance")
            if len(pool) > generator_budget:
                raise BudgetExceededError(level, len(pool), generator_budget, what="generators")
            last_escape = escapes[-1]
            continue
        generators = prune(pool, "majorized")
        if generators == previous:
            continue  # same essential set; the previous attempt stands
        previous = generators
        outcome = _attempt_closure(scaled, tuple(generators), b)
        if isinstance(outcome, HullCertificate):
            return outcome
        last_escape = outcome
    return CertifyFailure(
        bound=b,
        levels_tried=max_level,
        escaping=last_escape,
        reason=f"no closure within {max_level} levels at candidate {fmt(b)}",
    )


def _attempt_closure(scaled: System, generators: Tuple[Vector, ...], bound: Scalar):
    seed_w = majorization_weights(scaled.seed, generators)
    if seed_w is None:
        return scaled.seed
    pair_rows = []
    for a in range(len(generators)):
        for b_idx in range(len(generators)):
            product = star(scaled.map, generators[a], generators[b_idx])
            w = majorization_weights(product, generators)
            if w is None:
                return product
            pair_rows.append(tuple(w))
    return HullCertificate(
        bound=bound,
        dim=scaled.dim,
        generators=generators,
        seed_weights=tuple(seed_w),
        product_weights=tuple(pair_rows),
    )


def check_certificate(cert: HullCertificate, system: System) -> bool:
    """Re-validate every majorization in the transcript; exact arithmetic, no search."""
    try:
        b = rat(cert.bound)
        if b <= 0 or cert.dim != system.dim:
            return False
        gens = cert.generators
        if not gens or len(cert.product_weights) != len(gens) * len(gens):
            return False
        for g in gens:
            if len(g) != cert.dim or any(x < 0 for x in g):
                return False
        scaled_seed = tuple(Fraction(s) / b for s in system.seed)
        if not check_majorization(scaled_seed, gens, cert.seed_weights):
            return False
        for a in range(len(gens)):
            for b_idx in range(len(gens)):
                weights = cert.product_weights[a * len(gens) + b_idx]
                product = star(system.map, gens[a], gens[b_idx])
                if not check_majorization(product, gens, weights):
                    return False
        return True
    except (TypeError, ValueError, IndexError):
        return False


def serialize_certificate(cert: HullCertificate) -> str:
    lines = [
        "bgrowth-certificate v1",
        f"bound {fmt(cert.bound)}",
        f"dim {cert.dim}",
        f"generators {len(cert.generators)}",
    ]
    for g in cert.generators:
        lines.append("g " + " ".join(fmt(x) for x in g))
    lines.append("seed-weights " + " ".join(fmt(w) for w in cert.seed_weights))
    n = len(cert.generators)
    for a in range(n):
        for b in range(n):
            row = cert.product_weights[a * n + b]
            lines.append(f"pair {a + 1} {b + 1} " + " ".join(fmt(w) for w in row))
    return "\n".join(lines) + "\n"


class CertificateFormatError(ValueError):
    pass


def parse_certificate(text: str) -> HullCertificate:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines or lines[0] != "bgrowth-certificate v1":
        raise CertificateFormatError("missing certificate header")
    fields = {}
    generators = []
    seed_weights = None
    pairs = {}
    for ln in lines[1:]:
        parts = ln.split()
        if parts[0] in ("bound", "dim", "generators"):
            fields[parts[0]] = parts[1]
        elif parts[0] == "g":
            generators.append(tuple(rat(x) for x in parts[1:]))
        elif parts[0] == "seed-weights":
            seed_weights = tuple(rat(x) for x in parts[1:])
        elif parts[0] == "pair":
            a, b = int(parts[1]) - 1, int(parts[2]) - 1
            pairs[(a, b)] = tuple(rat(x) for x in parts[3:])
        else:
            raise CertificateFormatError(f"unknown line: {ln!r}")
    try:
        bound = rat(fields["bound"])
        dim = int(fields["dim"])
        count = int(fields["generators"])
    except KeyError as exc:
        raise CertificateFormatError(f"missing field {exc}") from exc
    if len(generators) != count or seed_weights is None:
        raise CertificateFormatError("generator or seed-weight lines missing")
    rows = []
    for a in range(count):
        for b in range(count):
            if (a, b) not in pairs:
                raise CertificateFormatError(f"missing pair line for ({a + 1}, {b + 1})")
            rows.append(pairs[(a, b)])
    return HullCertificate(bound, dim, tuple(generators), seed_weights, tuple(rows))


# ---------------------------------------------------------------------------
# the sandwich


@dataclass(frozen=True)
class BoundWitness:
    value: RootValue
    kind: str  # lower: "pattern" | "fekete"; upper: "crude" | "hull-certificate"
    detail: object = None

    def decimal(self, digits: int = 12, *, round_up: bool = False) -> str:
        return self.value.decimal(digits, round_up=round_up)


@dataclass(frozen=True)
class GrowthRateBounds:
    lower: BoundWitness
    upper: BoundWitness
    trend: Tuple[Tuple[int, str], ...]  # (n, max_entry(n)**(1/n)), decimal, heuristic
    note: str = ""
    table: Optional[FrontierTable] = field(default=None, compare=False, repr=False)

    @property
    def upper_value(self) -> Scalar:
        assert self.upper.value.root == 1
        return self.upper.value.base

    def width_at_most(self, width: Scalar) -> bool:
        """Exact check that upper - lower <= width."""
        return self.lower.value.compare_scalar(self.upper_value - width) >= 0

    def contains(self, x: Scalar) -> bool:
        return self.lower.value.compare_scalar(x) <= 0 and x <= self.upper_value


def _pick_candidate(lo: Fraction, hi: Fraction) -> Fraction:
    """A simple rational strictly between lo and hi, near the midpoint."""
    mid = (lo + hi) / 2
    gap = float(hi - lo)
    digits = 30 if gap <= 0 else max(6, 3 - math.floor(math.log10(gap)))
    cand = mid.limit_denominator(10**digits)
    if not lo < cand < hi:
        cand = mid
    return cand


def sandwich(
    system: System,
    depth: int = 16,
    pattern_budget: int = 32,
    width=Fraction(1, 10),
    *,
    max_certify_attempts: int = 16,
    certify_levels: Optional[int] = None,
    matrix_budget: int = 200_000,
    level_budget: int = DEFAULT_LEVEL_BUDGET,
    table: Optional[FrontierTable] = None,
) -> GrowthRateBounds:
    """Certified interval around the growth rate.

    lower = best of the pattern-diagonal search and every applicable
    explicit supermultiplicativity bound; upper = bisection from the crude
    bound using hull certification, stopping once upper - lower <= width
    or the attempt budget is exhausted.  Certification failures never
    shrink the certified interval; they only move the bisection's probe.
    """
    require_valid(system)
    width = rat(width)
    if width < 0:
        raise ValueError("width must be >= 0")
    if table is None or table.strategy != "majorized" or table.depth < depth:
        table = enumerate_levels(system, depth, "majorized", level_budget=level_budget)

    result = pt.search(system, table, pattern_budget, matrix_budget=matrix_budget)
    best_pattern = result.best()
    lower = BoundWitness(
        best_pattern.value if best_pattern else RootValue(0, 1), "pattern", best_pattern
    )
    for k in range(system.dim):
        fk = fekete_lower(system, table, k)
        if fk is not None and fk[0].compare(lower.value) > 0:
            lower = BoundWitness(fk[0], "fekete", fk[1])

    crude = crude_upper(system)
    trend = tuple(
        (n, RootValue(table.max_entry(n), n).decimal(12)) for n in range(1, table.depth + 1)
    )
    if crude == 0:
        zero = BoundWitness(RootValue(0, 1), "crude")
        return GrowthRateBounds(zero, zero, trend, "rate is exactly 0 (no coefficients)", table)

    assert lower.value.compare_scalar(crude) <= 0, "lower bound exceeds crude upper bound"
    upper = BoundWitness(RootValue(crude, 1), "crude")
    certify_levels = depth if certify_levels is None else certify_levels

    search_lo = lower.value.to_fraction(15)
    note = ""
    for _attempt in range(max_certify_attempts):
        upper_val = Fraction(*num_den(upper.value.base))
        if lower.value.compare_scalar(upper.value.base - width) >= 0:
            break  # width target met
        if not search_lo < upper_val:
            note = "bisection interval collapsed before reaching the width target"
            break
        candidate = _pick_candidate(search_lo, upper_val)
        outcome = certify_upper(
            system,
            candidate,
            max_level=certify_levels,
            level_budget=level_budget,
        )
        if isinstance(outcome, HullCertificate):
            upper = BoundWitness(RootValue(rat(candidate), 1), "hull-certificate", outcome)
        else:
            search_lo = candidate
    else:
        note = (
            f"width target {fmt(width)} not reached after {max_certify_attempts} "
            "certification attempts; interval endpoints remain certified"
        )
    return GrowthRateBounds(lower, upper, trend, note, table)


# ---------------------------------------------------------------------------
# per-component growth rates


@dataclass(frozen=True)
class ComponentRecord:
    index: int
    vertices: Tuple[int, ...]
    method: str  # "sink-zero" | "inherited" | "sandwich"
    lower: RootValue
    upper: Scalar
    half_self_dependent: Optional[str]  # "yes" | "no" | "undetermined" | None
    bounds: Optional[GrowthRateBounds] = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class ComponentReport:
    poset: dg.ComponentPoset
    records: Tuple[ComponentRecord, ...]

    def vertex_interval(self, v: int) -> Tuple[RootValue, Scalar]:
        rec = self.records[self.poset.component_of(v)]
        return rec.lower, rec.upper


def component_report(
    system: System,
    depth: int = 12,
    pattern_budget: int = 24,
    width=Fraction(1, 10),
    **sandwich_kwargs,
) -> ComponentReport:
    """Certified growth-rate intervals per vertex, component by component.

    Vertices sharing a component share an interval (their per-coordinate
    maxima are within constant factors of each other).  A vertex with no
    coefficients gets exactly 0.  A component whose every coefficient
    draws on strictly lower components inherits the max of the lower
    intervals; everything else gets a sandwich run on its subsystem,
    whose top component it is.
    """
    require_valid(system)
    graph = dg.build(system)
    poset = dg.components(graph)
    classes = dg.classify(system, poset)
    comp_of = {v: ci for ci, comp in enumerate(poset.components) for v in comp}

    pending = set(range(len(poset.components)))
    order: list[int] = []
    while pending:
        ready = sorted(
            ci for ci in pending if all(b not in pending for b in poset.lower_components(ci))
        )
        if not ready:
            raise RuntimeError("component order is not acyclic")
        order.extend(ready)
        pending.difference_update(ready)

    records: dict[int, ComponentRecord] = {}
    for ci in order:
        verts = poset.components[ci]
        own_entries = [
            (k, i, j, v) for (k, i, j, v) in system.map.entries if comp_of[k] == ci and v > 0
        ]
        if not own_entries:
            records[ci] = ComponentRecord(ci, verts, "sink-zero", RootValue(0, 1), 0, None)
            continue
        if all(comp_of[i] != ci and comp_of[j] != ci for (_k, i, j, _v) in own_entries):
            lows: list[RootValue] = []
            highs: list[Scalar] = []
            for (_k, i, j, _v) in own_entries:
                for vert in (i, j):
                    rec = records[comp_of[vert]]
                    lows.append(rec.lower)
                    highs.append(rec.upper)
            lower = max(lows)
            upper = max(highs)
            records[ci] = ComponentRecord(ci, verts, "inherited", lower, upper, None)
            continue
        sub = dg.subsystem(system, ci, poset)
        bounds = sandwich(sub, depth, pattern_budget, width, **sandwich_kwargs)
        records[ci] = ComponentRecord(
            ci, verts, "sandwich", bounds.lower.value, bounds.upper_value, None, bounds
        )

    final = []
    for ci in range(len(poset.components)):
        rec = records[ci]
        status = None
        if classes[ci].half_self_dependent and not classes[ci].sink_trivial:
            lowers = poset.lower_components(ci)
            if lowers:
                verdicts = []
                for b in lowers:
                    other = records[b]
                    if rec.lower.compare_scalar(other.upper) > 0:
                        verdicts.append("yes")
                    elif other.lower.compare_scalar(rec.upper) >= 0:
                        verdicts.append("no")
                    else:
                        verdicts.append("undetermined")
                if all(v == "yes" for v in verdicts):
                    status = "yes"
                elif any(v == "no" for v in verdicts):
                    status = "no"
                else:
                    status = "undetermined"
            else:
                status = "yes"  # vacuous: no lower components
        final.append(
            ComponentRecord(
                rec.index, rec.vertices, rec.method, rec.lower, rec.upper, status, rec.bounds
            )
        )
    return ComponentReport(poset, tuple(final))


# ---------------------------------------------------------------------------
# empirical harnesses (report-only, clearly heuristic)


def weak_submultiplicativity(table: FrontierTable, k: int) -> dict:
    """Fit K with max_entry_k(m+n) <= K**log(m) * product, over 2 <= m <= n.

    An empirical conformance check, not a proof: the fitted K is reported
    so the measured ratios can be eyeballed against the expected
    polylog-factor submultiplicativity.
    """
    worst = 1.0
    pairs = 0
    for m in range(2, table.depth + 1):
        for n in range(m, table.depth - m + 1):
            gm = table.max_entry(m, k)
            gn = table.max_entry(n, k)
            gmn = table.max_entry(m + n, k)
            if gm > 0 and gn > 0 and gmn > 0:
                pairs += 1
                ratio = float(Fraction(*num_den(gmn)) / (Fraction(*num_den(gm)) * Fraction(*num_den(gn))))
                if ratio > 1.0:
                    worst = max(worst, ratio ** (1.0 / math.log(m)))
    return {"K": worst, "pairs": pairs}


def floor_ratio_data(table: FrontierTable, lower: RootValue) -> Tuple[int, float]:
    """(argmin, min) of max_entry(n) / lower**n over the table; report data only."""
    best_n, best = 1, float("inf")
    lower_log = math.log(float(lower)) if not lower.is_zero() else None
    for n in range(1, table.depth + 1):
        g = table.max_entry(n)
        if g <= 0 or lower_log is None:
            continue
        num, den = num_den(g)
        value = math.exp(math.log(num) - math.log(den) - n * lower_log)
        if value < best:
            best_n, best = n, value
    return best_n, best
