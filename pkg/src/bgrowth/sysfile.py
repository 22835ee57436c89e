"""Line-oriented system definition files.

Plain text so definitions stay human-auditable:

    # comment and blank lines are ignored
    name my-system            (optional)
    allow-zero-seed           (optional; relaxes seed positivity)
    dim 2
    seed 1 1
    c 1 1 2 1                 (c K I J VALUE, 1-based indices)
    c 1 2 1 1
    c 2 2 2 1/2

Values parse as integers or "p/q".  Duplicate (K, I, J) triples and
out-of-range indices are rejected with the offending line and column.
"""

from __future__ import annotations

from typing import Optional

from .rational import fmt, rat
from .system import BilinearMap, System


class SystemFileError(ValueError):
    def __init__(self, message: str, line: int, column: Optional[int] = None):
        where = f"line {line}" + (f", column {column}" if column is not None else "")
        super().__init__(f"{where}: {message}")
        self.line = line
        self.column = column


def _column_of(raw: str, token_index: int) -> int:
    """1-based column of the token_index-th whitespace token."""
    col = 0
    count = -1
    in_token = False
    for pos, ch in enumerate(raw):
        if ch.isspace():
            in_token = False
        elif not in_token:
            in_token = True
            count += 1
            if count == token_index:
                col = pos + 1
                break
    return col or 1


def parse_system(text: str) -> tuple[System, Optional[str]]:
    """Parse and return (system, optional name); raises SystemFileError."""
    dim: Optional[int] = None
    name: Optional[str] = None
    seed = None
    allow_zero = False
    triples: dict[tuple, tuple] = {}  # (k,i,j) -> (value, line)
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        head = parts[0]
        if head == "name":
            if len(parts) < 2:
                raise SystemFileError("name needs a value", lineno)
            name = " ".join(parts[1:])
        elif head == "allow-zero-seed":
            allow_zero = True
        elif head == "dim":
            if dim is not None:
                raise SystemFileError("duplicate dim line", lineno)
            try:
                dim = int(parts[1])
            except (IndexError, ValueError):
                raise SystemFileError("dim needs a positive integer", lineno, _column_of(raw, 1))
            if dim < 1:
                raise SystemFileError("dim must be >= 1", lineno, _column_of(raw, 1))
        elif head == "seed":
            if dim is None:
                raise SystemFileError("seed before dim", lineno)
            if seed is not None:
                raise SystemFileError("duplicate seed line", lineno)
            if len(parts) - 1 != dim:
                raise SystemFileError(
                    f"seed has {len(parts) - 1} entries, expected {dim}", lineno
                )
            entries = []
            for t, tok in enumerate(parts[1:], start=1):
                try:
                    entries.append(rat(tok))
                except ValueError:
                    raise SystemFileError(
                        f"bad seed value {tok!r}", lineno, _column_of(raw, t)
                    )
            seed = tuple(entries)
        elif head == "c":
            if dim is None:
                raise SystemFileError("coefficient before dim", lineno)
            if len(parts) != 5:
                raise SystemFileError("coefficient lines are 'c K I J VALUE'", lineno)
            try:
                k, i, j = (int(parts[t]) for t in (1, 2, 3))
            except ValueError:
                raise SystemFileError("coefficient indices must be integers", lineno, _column_of(raw, 1))
            for t, idx in ((1, k), (2, i), (3, j)):
                if not 1 <= idx <= dim:
                    raise SystemFileError(
                        f"index {idx} out of range 1..{dim}", lineno, _column_of(raw, t)
                    )
            try:
                value = rat(parts[4])
            except ValueError:
                raise SystemFileError(
                    f"bad coefficient value {parts[4]!r}", lineno, _column_of(raw, 4)
                )
            key = (k - 1, i - 1, j - 1)
            if key in triples:
                raise SystemFileError(
                    f"duplicate coefficient ({k},{i},{j}), first on line {triples[key][1]}",
                    lineno,
                )
            triples[key] = (value, lineno)
        else:
            raise SystemFileError(f"unknown directive {head!r}", lineno, 1)
    if dim is None:
        raise SystemFileError("missing dim line", 1)
    if seed is None:
        raise SystemFileError("missing seed line", 1)
    bmap = BilinearMap(dim, [(k, i, j, v) for (k, i, j), (v, _ln) in triples.items()])
    return System(bmap, seed, allow_zero), name


def serialize_system(system: System, name: Optional[str] = None) -> str:
    """Canonical text form; parse(serialize(x)) reproduces x exactly."""
    lines = []
    if name:
        lines.append(f"name {name}")
    if system.allow_zero_seed:
        lines.append("allow-zero-seed")
    lines.append(f"dim {system.dim}")
    lines.append("seed " + " ".join(fmt(s) for s in system.seed))
    for k, i, j, v in system.map.entries:
        lines.append(f"c {k + 1} {i + 1} {j + 1} {fmt(v)}")
    return "\n".join(lines) + "\n"
