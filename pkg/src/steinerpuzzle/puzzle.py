"""Board model for the (n^2 - 1)-puzzle.

A configuration is stored as a canonical row-major numbering (fixed by the
cell that holds the hole in the numbering) plus a sparse map of cells whose
label differs from that numbering. Label 0 denotes the hole internally, so a
configuration is a bijection between the n*n cells and {0, ..., n*n - 1}.

Coordinates: x grows rightward, y grows upward, both 0-based. Move
directions always name the direction the *hole* travels.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from enum import Enum
from types import MappingProxyType
from typing import Iterable, Iterator, Mapping, NamedTuple

HOLE = 0
BFS_MAX_N = 3


class PuzzleError(ValueError):
    """Invalid argument to a puzzle operation."""


class IllegalMove(PuzzleError):
    def __init__(self, index, move, cell):
        self.index = index
        self.move = move
        self.cell = cell
        super().__init__(f"move {index} ({move.value}) takes the hole off the board from {tuple(cell)}")


class Unsupported(PuzzleError):
    pass


class Cell(NamedTuple):
    x: int
    y: int

    def step(self, move: "Move") -> "Cell":
        dx, dy = move.delta
        return Cell(self.x + dx, self.y + dy)


class Move(Enum):
    UP = "U"
    DOWN = "D"
    LEFT = "L"
    RIGHT = "R"

    @property
    def delta(self) -> tuple[int, int]:
        return _DELTAS[self]

    @property
    def inverse(self) -> "Move":
        return _INVERSE[self]

    @classmethod
    def between(cls, a, b) -> "Move":
        """Direction of the unit step from ``a`` to ``b``."""
        d = (b[0] - a[0], b[1] - a[1])
        for mv, delta in _DELTAS.items():
            if delta == d:
                return mv
        raise PuzzleError(f"{tuple(a)} and {tuple(b)} are not grid neighbours")


_DELTAS = {Move.UP: (0, 1), Move.DOWN: (0, -1), Move.LEFT: (-1, 0), Move.RIGHT: (1, 0)}
_INVERSE = {Move.UP: Move.DOWN, Move.DOWN: Move.UP, Move.LEFT: Move.RIGHT, Move.RIGHT: Move.LEFT}

# Neighbour priority used wherever a deterministic traversal order is needed.
DIRECTION_PRIORITY = (Move.UP, Move.RIGHT, Move.DOWN, Move.LEFT)


class MoveSequence(tuple):
    """Immutable ordered sequence of hole moves."""

    def __new__(cls, moves: Iterable[Move] = ()):
        return super().__new__(cls, moves)

    @classmethod
    def parse(cls, text: str) -> "MoveSequence":
        moves = []
        for ch in text:
            if ch.isspace():
                continue
            try:
                moves.append(Move(ch.upper()))
            except ValueError:
                raise PuzzleError(f"unknown move character {ch!r}") from None
        return cls(moves)

    def __str__(self) -> str:
        return "".join(m.value for m in self)

    def __add__(self, other) -> "MoveSequence":
        return MoveSequence(tuple.__add__(self, tuple(other)))

    def __getitem__(self, item):
        result = tuple.__getitem__(self, item)
        return MoveSequence(result) if isinstance(item, slice) else result

    def inverse(self) -> "MoveSequence":
        """The sequence that undoes this one."""
        return MoveSequence(m.inverse for m in reversed(self))

    def __repr__(self) -> str:
        return f"MoveSequence({str(self)!r})"


def _canonical_label(n: int, base_hole: Cell, cell) -> int:
    idx = cell[1] * n + cell[0]
    hidx = base_hole.y * n + base_hole.x
    if idx == hidx:
        return HOLE
    return idx + 1 if idx < hidx else idx


@dataclass(frozen=True, eq=False)
class Configuration:
    """Placement of n*n - 1 labelled squares and one hole on an n x n board.

    ``base_hole`` fixes the canonical numbering; ``overrides`` lists only the
    cells whose label (0 for the hole) departs from it.
    """

    n: int
    base_hole: Cell
    hole: Cell
    overrides: Mapping[Cell, int] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "overrides", MappingProxyType(dict(self.overrides)))

    def on_board(self, cell) -> bool:
        return 0 <= cell[0] < self.n and 0 <= cell[1] < self.n

    def canonical_label(self, cell) -> int:
        return _canonical_label(self.n, self.base_hole, cell)

    def label_at(self, cell) -> int:
        """Label at ``cell``; 0 means the hole."""
        cell = Cell(*cell)
        if not self.on_board(cell):
            raise PuzzleError(f"cell {tuple(cell)} is off the {self.n}x{self.n} board")
        if cell in self.overrides:
            return self.overrides[cell]
        return _canonical_label(self.n, self.base_hole, cell)

    def __getitem__(self, cell) -> int:
        return self.label_at(cell)

    def candidate_cells(self, other: "Configuration") -> Iterator[Cell]:
        """Superset of the cells on which ``self`` and ``other`` may differ.

        When the two canonical numberings differ, every cell between the two
        base holes in row-major order is included.
        """
        seen = set(self.overrides) | set(other.overrides) | {self.hole, other.hole}
        yield from seen
        if self.base_hole != other.base_hole:
            a = self.base_hole.y * self.n + self.base_hole.x
            b = other.base_hole.y * self.n + other.base_hole.x
            for idx in range(min(a, b), max(a, b) + 1):
                c = Cell(idx % self.n, idx // self.n)
                if c not in seen:
                    yield c

    def diff_cells(self, other: "Configuration") -> set[Cell]:
        """Cells whose label (hole included) differs between the two."""
        _check_same_board(self, other)
        return {c for c in self.candidate_cells(other) if self.label_at(c) != other.label_at(c)}

    def __eq__(self, other):
        if not isinstance(other, Configuration):
            return NotImplemented
        return self.n == other.n and self.hole == other.hole and not self.diff_cells(other)

    def __hash__(self):
        return hash((self.n, self.hole))

    def to_dense(self) -> list[list[int]]:
        """Row-major ``grid[y][x]`` label array. Test reference only."""
        if self.n > 1000:
            raise Unsupported("dense arrays are limited to n <= 1000")
        grid = [[_canonical_label(self.n, self.base_hole, (x, y)) for x in range(self.n)] for y in range(self.n)]
        for (x, y), label in self.overrides.items():
            grid[y][x] = label
        return grid

    def to_tuple(self) -> tuple[int, ...]:
        return tuple(v for row in self.to_dense() for v in row)

    @classmethod
    def from_dense(cls, grid) -> "Configuration":
        n = len(grid)
        holes = [Cell(x, y) for y in range(n) for x in range(n) if grid[y][x] == HOLE]
        if len(holes) != 1:
            raise PuzzleError("dense grid must contain exactly one hole (label 0)")
        if sorted(v for row in grid for v in row) != list(range(n * n)):
            raise PuzzleError("dense grid labels must be a permutation of 0..n*n-1")
        hole = holes[0]
        overrides = {}
        for y in range(n):
            for x in range(n):
                if grid[y][x] != _canonical_label(n, hole, (x, y)):
                    overrides[Cell(x, y)] = grid[y][x]
        return cls(n, hole, hole, overrides)

    @classmethod
    def from_tuple(cls, n: int, labels) -> "Configuration":
        return cls.from_dense([list(labels[y * n:(y + 1) * n]) for y in range(n)])


def _check_same_board(a: Configuration, b: Configuration) -> None:
    if a.n != b.n:
        raise PuzzleError(f"board sizes differ: {a.n} vs {b.n}")


def canonical_configuration(n: int, hole) -> Configuration:
    """Row-major numbering from label 1, skipping the hole cell."""
    if n < 2:
        raise PuzzleError("board side must be at least 2")
    hole = Cell(*hole)
    if not (0 <= hole.x < n and 0 <= hole.y < n):
        raise PuzzleError(f"hole {tuple(hole)} is off the {n}x{n} board")
    return Configuration(n, hole, hole, {})


class _Board:
    """Mutable working copy used while simulating a sequence."""

    __slots__ = ("n", "base_hole", "hole", "overrides")

    def __init__(self, cfg: Configuration):
        self.n = cfg.n
        self.base_hole = cfg.base_hole
        self.hole = cfg.hole
        self.overrides = dict(cfg.overrides)

    def get(self, cell) -> int:
        label = self.overrides.get(cell)
        if label is None:
            label = _canonical_label(self.n, self.base_hole, cell)
        return label

    def put(self, cell, label) -> None:
        if label == _canonical_label(self.n, self.base_hole, cell):
            self.overrides.pop(cell, None)
        else:
            self.overrides[cell] = label

    def move(self, mv: Move, index: int = 0) -> None:
        old = self.hole
        new = old.step(mv)
        if not (0 <= new.x < self.n and 0 <= new.y < self.n):
            raise IllegalMove(index, mv, old)
        self.put(old, self.get(new))
        self.put(new, HOLE)
        self.hole = new

    def freeze(self) -> Configuration:
        return Configuration(self.n, self.base_hole, self.hole, self.overrides)


def apply_move(cfg: Configuration, mv: Move) -> Configuration:
    board = _Board(cfg)
    board.move(mv)
    return board.freeze()


def apply_sequence(cfg: Configuration, seq: Iterable[Move]) -> tuple[Configuration, frozenset[Cell]]:
    """Run ``seq`` from ``cfg``.

    Returns the final configuration and the set of cells the hole visited,
    start cell included. Cost is linear in the sequence length; the board
    size never enters.
    """
    board = _Board(cfg)
    visited = {cfg.hole}
    for i, mv in enumerate(seq):
        board.move(mv, i)
        visited.add(board.hole)
    return board.freeze(), frozenset(visited)


def hole_trace(start, seq: Iterable[Move], n: int | None = None) -> list[Cell]:
    """Hole positions before the first move and after each move."""
    cur = Cell(*start)
    trace = [cur]
    for i, mv in enumerate(seq):
        nxt = cur.step(mv)
        if n is not None and not (0 <= nxt.x < n and 0 <= nxt.y < n):
            raise IllegalMove(i, mv, cur)
        trace.append(nxt)
        cur = nxt
    return trace


def _placement_permutation(s: Configuration, t: Configuration) -> dict[Cell, Cell]:
    """Cell-to-cell map sending each label's cell in ``s`` to its cell in ``t``,
    restricted to cells where they differ (hole treated as a label)."""
    cells = s.diff_cells(t)
    where_t = {t.label_at(c): c for c in cells}
    perm = {}
    for c in cells:
        label = s.label_at(c)
        if label not in where_t:
            raise PuzzleError(f"label {label} at {tuple(c)} has no counterpart in target")
        perm[c] = where_t[label]
    return perm


def permutation_parity(perm: Mapping) -> int:
    """0 for even, 1 for odd."""
    seen = set()
    cycles = 0
    for start in perm:
        if start in seen:
            continue
        cycles += 1
        c = start
        while c not in seen:
            seen.add(c)
            c = perm[c]
    return (len(perm) - cycles) % 2


def is_reachable(s: Configuration, t: Configuration) -> bool:
    """Whether ``t`` can be reached from ``s`` by legal moves.

    Holds exactly when the parity of the placement permutation (hole
    included) matches the parity of the hole's Manhattan displacement.
    """
    _check_same_board(s, t)
    perm = _placement_permutation(s, t)
    dist = abs(s.hole.x - t.hole.x) + abs(s.hole.y - t.hole.y)
    return permutation_parity(perm) == dist % 2


def non_similar_cells(s: Configuration, t: Configuration) -> set[Cell]:
    """Cells that do not hold the same square in both configurations.

    A cell holding the hole in either configuration is never similar.
    """
    _check_same_board(s, t)
    cells = s.diff_cells(t)
    cells.add(s.hole)
    cells.add(t.hole)
    return cells


# --- exhaustive oracle for tiny boards -------------------------------------

def _neighbour_table(n: int) -> list[list[tuple[int, Move]]]:
    table = []
    for idx in range(n * n):
        x, y = idx % n, idx // n
        row = []
        for mv in DIRECTION_PRIORITY:
            dx, dy = mv.delta
            nx, ny = x + dx, y + dy
            if 0 <= nx < n and 0 <= ny < n:
                row.append((ny * n + nx, mv))
        table.append(row)
    return table


def _flat_successors(state: tuple, n: int, table):
    h = state.index(HOLE)
    for j, mv in table[h]:
        nxt = list(state)
        nxt[h], nxt[j] = nxt[j], HOLE
        yield tuple(nxt), mv


def _check_oracle_size(n: int) -> None:
    if n > BFS_MAX_N:
        raise Unsupported(f"exhaustive search is limited to n <= {BFS_MAX_N}, got {n}")


def bfs_distances(s: Configuration) -> dict[tuple, int]:
    """Distance from ``s`` to every reachable state (flat row-major tuples)."""
    _check_oracle_size(s.n)
    table = _neighbour_table(s.n)
    start = s.to_tuple()
    dist = {start: 0}
    queue = deque([start])
    while queue:
        cur = queue.popleft()
        d = dist[cur] + 1
        for nxt, _ in _flat_successors(cur, s.n, table):
            if nxt not in dist:
                dist[nxt] = d
                queue.append(nxt)
    return dist


def bfs_optimal(s: Configuration, t: Configuration, limit: int) -> MoveSequence | None:
    """A minimum-length sequence from ``s`` to ``t``, or None when ``t`` is
    unreachable or needs more than ``limit`` moves."""
    _check_same_board(s, t)
    _check_oracle_size(s.n)
    if limit < 0:
        raise PuzzleError("limit must be nonnegative")
    table = _neighbour_table(s.n)
    start, goal = s.to_tuple(), t.to_tuple()
    parent = {start: None}
    frontier = [start]
    depth = 0
    while goal not in parent:
        if depth == limit or not frontier:
            return None
        nxt_frontier = []
        for cur in frontier:
            for nxt, mv in _flat_successors(cur, s.n, table):
                if nxt not in parent:
                    parent[nxt] = (cur, mv)
                    nxt_frontier.append(nxt)
        frontier = nxt_frontier
        depth += 1
    moves = []
    cur = goal
    while parent[cur] is not None:
        cur, mv = parent[cur]
        moves.append(mv)
    return MoveSequence(reversed(moves))
