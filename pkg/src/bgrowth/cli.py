"""Command-line driver.

Subcommands: enumerate, rate, patterns, depgraph, hull-stats,
certify-check, examples.  Systems come from a definition file (--system)
or the built-in registry (--example).  Outputs are deterministic: the
same invocation produces byte-identical files.  Exit codes: 0 success,
1 domain failure (budget exhausted, invalid certificate), 2 usage error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import depgraph as dg
from . import patterns as pt
from . import rate as rt
from .frontier import BudgetExceededError, FrontierTable, enumerate_levels, hull_vertex_count
from .rational import decimal_str, fmt, rat
from .registry import example_names, make_example
from .sysfile import SystemFileError, parse_system, serialize_system
from .system import System, validate


class UsageError(Exception):
    pass


def _load_system(args) -> tuple[System, str]:
    if getattr(args, "example", None):
        try:
            system = make_example(args.example)
        except ValueError as exc:
            raise UsageError(str(exc))
        name = args.example
    elif getattr(args, "system", None):
        path = Path(args.system)
        if not path.is_file():
            raise UsageError(f"no such system file: {path}")
        system, parsed_name = parse_system(path.read_text())
        name = parsed_name or path.stem
    else:
        raise UsageError("give --system FILE or --example NAME")
    report = validate(system)
    if not report.ok:
        raise UsageError(f"invalid system: {report}")
    return system, name


def _write(args, filename: str, text: str) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    path = out / filename
    with open(path, "w", newline="\n") as fh:
        fh.write(text)
    return path


def render_levels_csv(table: FrontierTable, with_hull: bool = True) -> str:
    """Fixed column order: level, exact max entry, its decimal (nearest,
    ties-to-even, 12 significant digits, approximate), per-coordinate
    maxima, enumeration counts, hull vertex count (exact only for the
    "none" strategy, lower proxy otherwise)."""
    d = table.system.dim
    hull_col = "hull_vertices" if table.strategy == "none" else "hull_vertices_lower_proxy"
    cols = ["n", "max_entry", "max_entry_decimal"]
    cols += [f"max_entry_k{k + 1}" for k in range(d)]
    cols += ["raw_count", "retained_count"]
    if with_hull:
        cols.append(hull_col)
    lines = [",".join(cols)]
    for n in range(1, table.depth + 1):
        level = table.level(n)
        g = table.max_entry(n)
        row = [str(n), fmt(g), decimal_str(g)]
        row += [fmt(table.max_entry(n, k)) for k in range(d)]
        row += [str(level.raw_count), str(level.retained_count)]
        if with_hull:
            row.append(str(hull_vertex_count(table, n)))
        lines.append(",".join(row))
    return "\n".join(lines) + "\n"


def _cmd_enumerate(args) -> int:
    system, name = _load_system(args)
    table = enumerate_levels(system, args.depth, args.strategy, level_budget=args.budget)
    path = _write(args, "levels.csv", render_levels_csv(table))
    print(f"{name}: enumerated {args.depth} levels ({args.strategy}) -> {path}")
    return 0


def _cmd_hull_stats(args) -> int:
    system, name = _load_system(args)
    table = enumerate_levels(system, args.depth, "none", level_budget=args.budget)
    path = _write(args, "levels.csv", render_levels_csv(table))
    counts = [hull_vertex_count(table, n) for n in range(1, args.depth + 1)]
    print(f"{name}: hull vertex counts 1..{args.depth}: {' '.join(map(str, counts))}")
    print(f"-> {path}")
    return 0


def _cmd_depgraph(args) -> int:
    system, name = _load_system(args)
    poset = dg.components(dg.build(system))
    path = _write(args, "depgraph.dot", dg.render_dot(system, poset))
    chain = poset.longest_chain()
    print(f"{name}: {len(poset.components)} components, longest chain {chain} -> {path}")
    return 0


def _cmd_patterns(args) -> int:
    system, name = _load_system(args)
    table = enumerate_levels(system, args.depth, args.strategy, level_budget=args.budget)
    result = pt.search(system, table, args.pattern_budget)
    best = result.best()
    lines = ["max_leaves,bound_exact,bound_decimal_down"]
    running = dict(result.running_best)
    current = None
    for leaves in range(1, args.pattern_budget + 1):
        current = running.get(leaves, current)
        if current is None:
            lines.append(f"{leaves},0,0")
        else:
            lines.append(f"{leaves},{current.value.describe()},{current.decimal(15)}")
    path = _write(args, "bounds.csv", "\n".join(lines) + "\n")
    if best is None:
        print(f"{name}: no positive diagonal found up to {args.pattern_budget} leaves")
    else:
        print(
            f"{name}: rate >= {best.decimal(15)} = {best.value.describe()}"
            f" (diagonal {best.index + 1}, {best.pattern.leaves} leaves)"
        )
        print(f"witness: {pt.witness_sexp(best.pattern)}")
    print(f"-> {path}")
    return 0


def _render_rate_report(name: str, system: System, args, bounds: rt.GrowthRateBounds) -> str:
    lines = [
        f"growth-rate report: {name}",
        f"dimension {system.dim}, depth {args.depth}, pattern budget {args.pattern_budget}, "
        f"width target {fmt(rat(args.width))}",
        "",
        f"certified interval: [{bounds.lower.decimal(15)}, "
        f"{bounds.upper.decimal(15, round_up=True)}]",
        f"  lower (exact, rounds down): {bounds.lower.value.describe()}  via {bounds.lower.kind}",
        f"  upper (exact, rounds up):   {bounds.upper.value.describe()}  via {bounds.upper.kind}",
    ]
    if bounds.note:
        lines.append(f"  note: {bounds.note}")
    detail = bounds.lower.detail
    if bounds.lower.kind == "pattern" and detail is not None:
        lines += [
            "",
            f"pattern witness ({detail.pattern.leaves} leaves, diagonal {detail.index + 1}):",
            f"  {pt.witness_sexp(detail.pattern)}",
        ]
    elif bounds.lower.kind == "fekete" and detail is not None:
        lines += [
            "",
            "supermultiplicativity witness:",
            f"  k={detail.k + 1} i={detail.i + 1} j={detail.j + 1} "
            f"d1={detail.d1} d2={detail.d2} "
            f"alpha1={fmt(detail.alpha1)} alpha2={fmt(detail.alpha2)} "
            f"beta={fmt(detail.beta)} n={detail.n_used}",
        ]
    if not bounds.lower.value.is_zero() and bounds.table is not None:
        n_min, value = rt.floor_ratio_data(bounds.table, bounds.lower.value)
        lines += [
            "",
            f"min of max_entry(n) / lower^n over the table (heuristic): {value:.6g} at n={n_min}",
        ]
    if bounds.table is not None:
        for k in range(system.dim):
            if rt.fekete_lower(system, bounds.table, k) is None:
                continue
            fit = rt.weak_submultiplicativity(bounds.table, k)
            if fit["pairs"]:
                lines.append(
                    f"weak-submultiplicativity fit at x{k + 1} (heuristic): "
                    f"K={fit['K']:.4f} over {fit['pairs']} pairs"
                )
    lines += ["", "trend (heuristic): n, max_entry(n)^(1/n) to 12 digits"]
    for n, dec in bounds.trend:
        lines.append(f"  {n:3d}  {dec}")
    return "\n".join(lines) + "\n"


def _cmd_rate(args) -> int:
    system, name = _load_system(args)
    bounds = rt.sandwich(
        system,
        args.depth,
        args.pattern_budget,
        rat(args.width),
        level_budget=args.budget,
    )
    report = _render_rate_report(name, system, args, bounds)
    if args.components:
        comp = rt.component_report(system, args.depth, args.pattern_budget, rat(args.width))
        extra = ["", "per-component intervals:"]
        for rec in comp.records:
            verts = " ".join(f"x{v + 1}" for v in rec.vertices)
            half = f" half_self_dependent={rec.half_self_dependent}" if rec.half_self_dependent else ""
            extra.append(
                f"  component {rec.index} [{verts}] method={rec.method}: "
                f"[{rec.lower.decimal(12)}, {decimal_str(rec.upper)}]{half}"
            )
        report += "\n".join(extra) + "\n"
    path = _write(args, "rate-report.txt", report)
    print(
        f"{name}: rate in [{bounds.lower.decimal(12)}, {bounds.upper.decimal(12, round_up=True)}]"
    )
    if bounds.upper.kind == "hull-certificate":
        cert_path = _write(args, "certificate.txt", rt.serialize_certificate(bounds.upper.detail))
        print(f"certificate -> {cert_path}")
    print(f"-> {path}")
    return 0


def _cmd_certify_check(args) -> int:
    system, name = _load_system(args)
    path = Path(args.certificate)
    if not path.is_file():
        raise UsageError(f"no such certificate file: {path}")
    try:
        cert = rt.parse_certificate(path.read_text())
    except rt.CertificateFormatError as exc:
        raise UsageError(f"bad certificate: {exc}")
    if rt.check_certificate(cert, system):
        print(f"{name}: certificate valid, rate <= {fmt(cert.bound)}")
        return 0
    print(f"{name}: certificate INVALID")
    return 1


def _cmd_examples(args) -> int:
    for name in example_names():
        if name.startswith("matmul"):
            print(f"{name}  (generator: flattened d x d nonnegative matrix product)")
        else:
            system = make_example(name)
            print(f"{name}  (dim {system.dim}, {len(system.map.entries)} coefficients)")
            if args.verbose:
                print("  " + serialize_system(system, name).replace("\n", "\n  ").rstrip())
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bgrowth",
        description="Exact growth analysis for nonnegative bilinear systems",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, depth_default=12):
        src = p.add_mutually_exclusive_group()
        src.add_argument("--system", help="system definition file")
        src.add_argument("--example", help="built-in example name")
        p.add_argument("--out", default=".", help="output directory (default: .)")
        p.add_argument("--depth", type=int, default=depth_default, help="levels to enumerate")
        p.add_argument(
            "--budget", type=int, default=100_000, help="cap on retained vectors per level"
        )

    p = sub.add_parser("enumerate", help="levels.csv with exact growth values")
    add_common(p, depth_default=12)
    p.add_argument(
        "--strategy",
        choices=("none", "dominance", "majorized"),
        default="dominance",
        help="pruning strategy (default: dominance)",
    )
    p.set_defaults(func=_cmd_enumerate)

    p = sub.add_parser("rate", help="certified growth-rate interval")
    add_common(p, depth_default=16)
    p.add_argument("--pattern-budget", type=int, default=32, help="max pattern leaves")
    p.add_argument("--width", default="1/10", help="target interval width, p/q")
    p.add_argument("--components", action="store_true", help="also bound each component")
    p.set_defaults(func=_cmd_rate)

    p = sub.add_parser("patterns", help="diagonal lower bounds and their convergence")
    add_common(p, depth_default=12)
    p.add_argument("--pattern-budget", type=int, default=32, help="max pattern leaves")
    p.add_argument(
        "--strategy",
        choices=("none", "dominance", "majorized"),
        default="majorized",
        help="pruning for the branch-vector table",
    )
    p.set_defaults(func=_cmd_patterns)

    p = sub.add_parser("depgraph", help="dependency graph as graphviz dot")
    add_common(p)
    p.set_defaults(func=_cmd_depgraph)

    p = sub.add_parser("hull-stats", help="hull vertex counts per level (exact)")
    add_common(p)
    p.set_defaults(func=_cmd_hull_stats)

    p = sub.add_parser("certify-check", help="re-validate a certificate file")
    add_common(p)
    p.add_argument("--certificate", required=True, help="certificate file to check")
    p.set_defaults(func=_cmd_certify_check)

    p = sub.add_parser("examples", help="list built-in example systems")
    p.add_argument("--verbose", action="store_true")
    p.set_defaults(func=_cmd_examples)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except SystemFileError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except BudgetExceededError as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
