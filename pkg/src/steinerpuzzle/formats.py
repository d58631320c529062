"""Plain-text file formats.

Steiner instance::

    |P| l
    x y            (|P| lines)

Tree::

    L              (total length; an exact fraction for scaled trees)
    x1 y1 x2 y2    (one line per edge)

Puzzle instance (``t`` given as a delta over the canonical ``s``)::

    n k hx hy c
    d
    x y label      (d lines; label 0 marks the hole)

Configuration (delta over ``canonical_configuration(n, (bx, by))``)::

    n bx by
    d
    x y label

Moves: the letters U, D, L, R on one line, wrapped at 80 columns.
"""

from __future__ import annotations

import os
import tempfile
from fractions import Fraction
from pathlib import Path

from .puzzle import Cell, Configuration, MoveSequence, PuzzleError, canonical_configuration
from .reduction import PuzzleInstance
from .steiner import SteinerError, SteinerInstance, SteinerTree

WRAP = 80


class FormatError(ValueError):
    def __init__(self, path, line, message):
        self.path = path
        self.line = line
        super().__init__(f"{path}:{line}: {message}")


def write_atomic(path, text: str) -> None:
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _lines(text: str):
    """(line number, fields) for non-blank lines."""
    for no, line in enumerate(text.splitlines(), 1):
        fields = line.split()
        if fields:
            yield no, fields


class _Reader:
    def __init__(self, text, path):
        self.rows = list(_lines(text))
        self.path = path
        self.pos = 0

    def last_line(self):
        return self.rows[-1][0] if self.rows else 1

    def next(self, count, what, parse=int):
        if self.pos >= len(self.rows):
            raise FormatError(self.path, self.last_line() + 1, f"expected {what}, got end of file")
        no, fields = self.rows[self.pos]
        self.pos += 1
        if len(fields) != count:
            raise FormatError(self.path, no, f"expected {count} fields for {what}, got {len(fields)}")
        try:
            return no, [parse(f) for f in fields]
        except ValueError:
            raise FormatError(self.path, no, f"malformed number in {what}: {' '.join(fields)}") from None

    def done(self):
        if self.pos < len(self.rows):
            raise FormatError(self.path, self.rows[self.pos][0], "unexpected trailing content")


# --- Steiner instances ------------------------------------------------------

def dump_steiner(inst: SteinerInstance) -> str:
    out = [f"{len(inst.points)} {inst.budget}"]
    out += [f"{x} {y}" for x, y in inst.points]
    return "\n".join(out) + "\n"


def parse_steiner(text: str, path="<string>") -> SteinerInstance:
    r = _Reader(text, path)
    no, (count, budget) = r.next(2, "header '|P| l'")
    if count < 1:
        raise FormatError(path, no, "point count must be positive")
    points = []
    for _ in range(count):
        pno, (x, y) = r.next(2, "point 'x y'")
        if x < 1 or y < 1:
            raise FormatError(path, pno, "point coordinates must be positive")
        if (x, y) in points:
            raise FormatError(path, pno, f"duplicate point ({x}, {y})")
        points.append((x, y))
    r.done()
    try:
        return SteinerInstance(tuple(points), budget)
    except SteinerError as exc:
        raise FormatError(path, no, str(exc)) from None


# --- trees ------------------------------------------------------------------

def _num(v) -> str:
    return str(Fraction(v))


def dump_tree(tree: SteinerTree) -> str:
    out = [_num(tree.length)]
    for a, b in tree.sorted_edges():
        out.append(" ".join(_num(v) for v in (*a, *b)))
    return "\n".join(out) + "\n"


def parse_tree(text: str, path="<string>", root=None) -> SteinerTree:
    """Read a tree. An edgeless tree consists of ``root`` alone."""
    r = _Reader(text, path)
    no, (length,) = r.next(1, "length header", Fraction)
    edges = []
    while r.pos < len(r.rows):
        eno, (x1, y1, x2, y2) = r.next(4, "edge 'x1 y1 x2 y2'", Fraction)
        a, b = _coord(x1, y1), _coord(x2, y2)
        if a[0] != b[0] and a[1] != b[1]:
            raise FormatError(path, eno, "edge is not axis-parallel")
        edges.append((a, b))
    tree = SteinerTree.from_edges(edges, [tuple(root)] if root is not None and not edges else [])
    if tree.length != length:
        raise FormatError(path, no, f"header length {length} but edges sum to {tree.length}")
    return tree


def _coord(x: Fraction, y: Fraction):
    if x.denominator == 1 and y.denominator == 1:
        return (int(x), int(y))
    return (x, y)


# --- configurations and puzzle instances ------------------------------------

def _delta_lines(cfg: Configuration):
    return [f"{c.x} {c.y} {label}" for c, label in sorted(cfg.overrides.items(), key=lambda kv: (kv[0].y, kv[0].x))]


def _read_delta(r: _Reader, n: int, path):
    _, (d,) = r.next(1, "delta count 'd'")
    overrides = {}
    hole = None
    for _ in range(d):
        no, (x, y, label) = r.next(3, "delta 'x y label'")
        if not (0 <= x < n and 0 <= y < n):
            raise FormatError(path, no, f"cell ({x}, {y}) is off the board")
        if not 0 <= label < n * n:
            raise FormatError(path, no, f"label {label} out of range")
        if Cell(x, y) in overrides:
            raise FormatError(path, no, f"cell ({x}, {y}) listed twice")
        overrides[Cell(x, y)] = label
        if label == 0:
            hole = Cell(x, y)
    return overrides, hole


def _check_bijection(base: Configuration, overrides, path, line):
    old = sorted(base.label_at(c) for c in overrides)
    new = sorted(overrides.values())
    if old != new:
        raise FormatError(path, line, "delta labels are not a permutation of the cells they replace")


def dump_configuration(cfg: Configuration) -> str:
    out = [f"{cfg.n} {cfg.base_hole.x} {cfg.base_hole.y}", str(len(cfg.overrides))]
    return "\n".join(out + _delta_lines(cfg)) + "\n"


def parse_configuration(text: str, path="<string>") -> Configuration:
    r = _Reader(text, path)
    no, (n, bx, by) = r.next(3, "header 'n bx by'")
    try:
        base = canonical_configuration(n, (bx, by))
    except PuzzleError as exc:
        raise FormatError(path, no, str(exc)) from None
    overrides, hole = _read_delta(r, n, path)
    r.done()
    _check_bijection(base, overrides, path, no)
    if hole is None:
        hole = base.hole if base.hole not in overrides else None
    if hole is None:
        raise FormatError(path, no, "configuration has no hole")
    return Configuration(n, base.base_hole, hole, overrides)


def dump_puzzle(pz: PuzzleInstance) -> str:
    out = [f"{pz.n} {pz.k} {pz.hole.x} {pz.hole.y} {pz.c}", str(len(pz.t.overrides))]
    return "\n".join(out + _delta_lines(pz.t)) + "\n"


def parse_puzzle(text: str, path="<string>") -> PuzzleInstance:
    r = _Reader(text, path)
    no, (n, k, hx, hy, c) = r.next(5, "header 'n k hx hy c'")
    if k < 0 or c < 1:
        raise FormatError(path, no, "k must be nonnegative and c positive")
    try:
        s = canonical_configuration(n, (hx, hy))
    except PuzzleError as exc:
        raise FormatError(path, no, str(exc)) from None
    overrides, hole = _read_delta(r, n, path)
    r.done()
    _check_bijection(s, overrides, path, no)
    if hole is None:
        if s.hole in overrides:
            raise FormatError(path, no, "target configuration has no hole")
        hole = s.hole
    t = Configuration(n, s.base_hole, hole, overrides)
    return PuzzleInstance(n=n, s=s, t=t, k=k, c=c)


# --- moves ------------------------------------------------------------------

def dump_moves(seq) -> str:
    text = str(MoveSequence(seq))
    chunks = [text[i:i + WRAP] for i in range(0, len(text), WRAP)] or [""]
    return "\n".join(chunks) + "\n"


def parse_moves(text: str, path="<string>") -> MoveSequence:
    for no, line in enumerate(text.splitlines(), 1):
        bad = [ch for ch in line.strip() if ch not in "UDLR"]
        if bad:
            raise FormatError(path, no, f"unexpected character {bad[0]!r} in move sequence")
    return MoveSequence.parse(text)


def read(path, parser, **kw):
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise FormatError(path, 0, exc.strerror or str(exc)) from None
    return parser(text, str(path), **kw)
