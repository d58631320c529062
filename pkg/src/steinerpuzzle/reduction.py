"""Rectilinear Steiner tree -> (n^2 - 1)-puzzle reduction.

``build_instance`` turns a point set into a puzzle instance, ``build_witness``
turns a Steiner tree into a short solution, and ``extract_tree`` reads a
Steiner tree back out of any solution.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .puzzle import (
    DIRECTION_PRIORITY,
    Cell,
    Configuration,
    IllegalMove,
    Move,
    MoveSequence,
    apply_sequence,
    canonical_configuration,
    hole_trace,
    non_similar_cells,
)
from .steiner import (
    SteinerError,
    SteinerInstance,
    SteinerTree,
    Validation,
    euler_tour,
    exact_steiner,
    scale_tree,
    subdivide_to_unit,
    validate_tree,
)

SCALE_PER_POINT = 18
GADGET_MAX_MOVES = 18

# Hole path from (cx+2, cy+1): one step in, the square that cycles the three
# marked squares, one step back out.
GADGET_CORE = MoveSequence([Move.LEFT, Move.LEFT, Move.DOWN, Move.RIGHT, Move.UP, Move.RIGHT])


class ReductionError(ValueError):
    pass


@dataclass(frozen=True)
class PuzzleInstance:
    n: int
    s: Configuration
    t: Configuration
    k: int
    c: int
    source: Optional[SteinerInstance] = None

    @property
    def hole(self) -> Cell:
        return self.s.hole


def scale_for(num_points: int) -> int:
    return SCALE_PER_POINT * num_points


def cycle_cells(cx: int, cy: int) -> tuple[Cell, Cell, Cell]:
    """The three cells whose squares get cycled: at, right of, above."""
    return Cell(cx, cy), Cell(cx + 1, cy), Cell(cx, cy + 1)


def build_instance(inst: SteinerInstance) -> PuzzleInstance:
    c = scale_for(len(inst.points))
    n = (inst.max_coord + 1) * c
    x1, y1 = inst.root
    s = canonical_configuration(n, (c * x1, c * y1))
    overrides = {}
    for x, y in inst.points[1:]:
        at, right, above = cycle_cells(c * x, c * y)
        # Same permutation the gadget's left-down-right-up square realizes.
        overrides[above] = s.label_at(at)
        overrides[right] = s.label_at(above)
        overrides[at] = s.label_at(right)
    t = Configuration(n, s.base_hole, s.hole, overrides)
    return PuzzleInstance(n=n, s=s, t=t, k=(2 * inst.budget + 1) * c, c=c, source=inst)


@dataclass(frozen=True)
class Window:
    """4x4 block around the anchor cell (cx, cy) of one terminal."""

    cx: int
    cy: int

    @classmethod
    def for_point(cls, p, c: int = 1) -> "Window":
        return cls(c * p[0], c * p[1])

    def __contains__(self, cell) -> bool:
        return self.cx - 1 <= cell[0] <= self.cx + 2 and self.cy - 1 <= cell[1] <= self.cy + 2

    @property
    def cells(self) -> list[Cell]:
        return [Cell(x, y) for y in range(self.cy - 1, self.cy + 3) for x in range(self.cx - 1, self.cx + 3)]

    @property
    def ring(self) -> list[Cell]:
        """Boundary cells in clockwise order from the bottom-left corner."""
        x0, y0, x1, y1 = self.cx - 1, self.cy - 1, self.cx + 2, self.cy + 2
        left = [Cell(x0, y) for y in range(y0, y1 + 1)]
        top = [Cell(x, y1) for x in range(x0 + 1, x1 + 1)]
        right = [Cell(x1, y) for y in range(y1 - 1, y0 - 1, -1)]
        bottom = [Cell(x, y0) for x in range(x1 - 1, x0, -1)]
        return left + top + right + bottom

    @property
    def interior(self) -> list[Cell]:
        return [Cell(x, y) for y in (self.cy, self.cy + 1) for x in (self.cx, self.cx + 1)]

    @property
    def pivot(self) -> Cell:
        return Cell(self.cx + 2, self.cy + 1)

    def overlaps(self, other: "Window") -> bool:
        return abs(self.cx - other.cx) < 4 and abs(self.cy - other.cy) < 4


def gadget_moves(p, entry, c: int = 1) -> MoveSequence:
    """Excursion from ``entry`` on the ring of the window around ``c * p``
    that cycles the three marked squares and restores everything else.

    The ring walk to (cx+2, cy+1) takes the shorter way round, clockwise on
    ties, and is retraced at the end.
    """
    w = Window.for_point(p, c)
    ring = w.ring
    entry = Cell(*entry)
    if entry not in ring:
        raise ReductionError(f"entry {tuple(entry)} is not on the window ring around {(w.cx, w.cy)}")
    i, j = ring.index(entry), ring.index(w.pivot)
    cw = (j - i) % len(ring)
    ccw = (i - j) % len(ring)
    step = 1 if cw <= ccw else -1
    path = [ring[(i + step * d) % len(ring)] for d in range(min(cw, ccw) + 1)]
    walk = MoveSequence(Move.between(a, b) for a, b in zip(path, path[1:]))
    return walk + GADGET_CORE + walk.inverse()


def build_base_sequence(tour, c: int) -> MoveSequence:
    """``c`` hole moves per tour step, following the tour scaled by ``c``."""
    moves = []
    for a, b in zip(tour, tour[1:]):
        moves.extend([Move.between(a, b)] * c)
    return MoveSequence(moves)


def _last_exits(trace, windows) -> dict[int, int]:
    """Map move index -> window index for each window's final exit move."""
    last = {}
    for j in range(len(trace) - 1):
        a, b = trace[j], trace[j + 1]
        for wi, w in enumerate(windows):
            if a in w and b not in w:
                last[wi] = j
    return {j: wi for wi, j in last.items()}


def build_witness(inst: SteinerInstance, tree: SteinerTree) -> MoveSequence:
    check = validate_tree(tree, inst)
    if not check:
        raise ReductionError("invalid Steiner tree: " + "; ".join(check.problems))
    c = scale_for(len(inst.points))
    n = (inst.max_coord + 1) * c
    tour = euler_tour(tree, inst.root)
    base = build_base_sequence(tour, c)
    start = Cell(c * inst.root[0], c * inst.root[1])
    trace = hole_trace(start, base, n)
    assert trace[-1] == start
    windows = [Window.for_point(p, c) for p in inst.points[1:]]
    exits = _last_exits(trace, windows)
    if len(exits) != len(windows):
        raise ReductionError("hole sweep misses a terminal window")
    moves = list(base)
    for j in sorted(exits, reverse=True):
        p = inst.points[1 + exits[j]]
        moves[j:j] = gadget_moves(p, trace[j], c)
    return MoveSequence(moves)


def verify_witness(pz: PuzzleInstance, seq) -> Validation:
    problems = []
    try:
        final, _ = apply_sequence(pz.s, seq)
    except IllegalMove as exc:
        problems.append(f"illegal move at index {exc.index}: {exc.move.value} from {tuple(exc.cell)}")
        final = None
    if final is not None:
        if final.hole != pz.t.hole:
            problems.append(f"hole ends at {tuple(final.hole)}, target has it at {tuple(pz.t.hole)}")
        bad = sorted(final.diff_cells(pz.t) - {final.hole, pz.t.hole}, key=lambda c: (c.y, c.x))
        if bad:
            cell = bad[0]
            problems.append(
                f"{len(bad)} mismatched cells; first at {tuple(cell)}: "
                f"got {final.label_at(cell)}, want {pz.t.label_at(cell)}"
            )
    if len(seq) > pz.k:
        problems.append(f"{len(seq)} moves exceed bound k={pz.k}")
    return Validation(not problems, problems)


def spanning_tree_of_region(region, root) -> SteinerTree:
    """BFS spanning tree of the grid graph induced on ``region``."""
    root = Cell(*root)
    seen = {root}
    order = [root]
    edges = []
    for v in order:
        for mv in DIRECTION_PRIORITY:
            u = v.step(mv)
            if u in region and u not in seen:
                seen.add(u)
                order.append(u)
                edges.append((tuple(v), tuple(u)))
    if len(seen) != len(region):
        raise ReductionError("hole region is not connected")
    return SteinerTree.from_edges(edges, [tuple(root)])


def extract_tree(pz: PuzzleInstance, seq) -> tuple[SteinerTree, Fraction]:
    """Steiner tree read off the cells a valid solution's hole visits,
    scaled down by ``c``. Coordinates and length are exact fractions."""
    check = verify_witness(pz, seq)
    if not check:
        raise ReductionError("witness does not solve the instance: " + "; ".join(check.problems))
    _, region = apply_sequence(pz.s, seq)
    grid_tree = spanning_tree_of_region(region, pz.hole)
    return scale_tree(grid_tree, Fraction(1, pz.c)), Fraction(len(region) - 1, pz.c)


@dataclass
class RoundtripReport:
    ok: bool = False
    stage: str = ""
    error: str = ""
    counters: dict = field(default_factory=dict)
    timings: dict = field(default_factory=dict)

    def __bool__(self):
        return self.ok


def roundtrip_check(inst: SteinerInstance) -> RoundtripReport:
    """exact_steiner -> build_instance -> build_witness -> verify_witness
    -> extract_tree, checking the counting bounds along the way."""
    rep = RoundtripReport()
    cnt = rep.counters
    k_pts = len(inst.points)

    def stage(name, fn):
        rep.stage = name
        t0 = time.perf_counter()
        out = fn()
        rep.timings[name] = time.perf_counter() - t0
        return out

    try:
        coarse, lstar = stage("solve", lambda: exact_steiner(inst))
        tree = subdivide_to_unit(coarse)
        inst = inst.with_budget(lstar)
        cnt["points"] = k_pts
        cnt["lstar"] = lstar
        pz = stage("reduce", lambda: build_instance(inst))
        cnt.update(c=pz.c, n=pz.n, k=pz.k)
        nonsim = len(non_similar_cells(pz.s, pz.t))
        cnt["nonsimilar"] = nonsim
        if nonsim != 3 * k_pts - 2:
            raise ReductionError(f"{nonsim} non-similar cells, expected {3 * k_pts - 2}")
        seq = stage("witness", lambda: build_witness(inst, tree))
        cnt["moves"] = len(seq)
        check = stage("verify", lambda: verify_witness(pz, seq))
        if not check:
            raise ReductionError("; ".join(check.problems))
        if len(seq) >= pz.k:
            raise ReductionError(f"witness length {len(seq)} not below k={pz.k}")
        scaled, length = stage("extract", lambda: extract_tree(pz, seq))
        region = len(scaled.vertices)
        cnt["region"] = region
        cnt["scaled_length"] = str(length)
        rep.stage = "bounds"
        missing = [p for p in inst.points if (Fraction(p[0]), Fraction(p[1])) not in scaled.vertices]
        if missing:
            raise ReductionError(f"extracted tree misses terminals {missing}")
        if 2 * region > len(seq) + 2 * (3 * k_pts - 2):
            raise ReductionError(f"|R|={region} exceeds |S'|/2 + 3|P|-2")
        if region > (lstar + 1) * pz.c:
            raise ReductionError(f"|R|/c = {Fraction(region, pz.c)} exceeds l+1 = {lstar + 1}")
    except (ReductionError, SteinerError, AssertionError) as exc:
        rep.error = str(exc)
        return rep
    rep.stage = "done"
    rep.ok = True
    return rep
