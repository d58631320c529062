"""Rectilinear Steiner trees: instances, an exact Hanan-grid solver, unit
subdivision and Euler tours."""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

from .puzzle import DIRECTION_PRIORITY

EXACT_MAX_POINTS = 10


class SteinerError(ValueError):
    pass


class Unsupported(SteinerError):
    pass


def _edge(a, b) -> tuple:
    a, b = tuple(a), tuple(b)
    return (a, b) if a <= b else (b, a)


@dataclass(frozen=True)
class SteinerInstance:
    """Terminal points with positive integer coordinates and a length budget."""

    points: tuple
    budget: int = 0

    def __post_init__(self):
        pts = tuple((int(x), int(y)) for x, y in self.points)
        object.__setattr__(self, "points", pts)
        if not pts:
            raise SteinerError("instance needs at least one point")
        if any(x < 1 or y < 1 for x, y in pts):
            raise SteinerError("point coordinates must be >= 1")
        if len(set(pts)) != len(pts):
            raise SteinerError("duplicate points in instance")
        if self.budget < 0:
            raise SteinerError("budget must be nonnegative")

    @property
    def max_coord(self) -> int:
        return max(max(p) for p in self.points)

    @property
    def root(self) -> tuple:
        return self.points[0]

    def with_budget(self, budget: int) -> "SteinerInstance":
        return SteinerInstance(self.points, budget)


@dataclass(frozen=True)
class SteinerTree:
    """Axis-parallel tree. Edges are stored as sorted vertex pairs.

    Coordinates are ints for trees in the plane of the instance and
    ``Fraction`` for trees scaled down from a puzzle board.
    """

    vertices: frozenset
    edges: frozenset = field(default_factory=frozenset)

    @classmethod
    def from_edges(cls, edges: Iterable, vertices: Iterable = ()) -> "SteinerTree":
        es = frozenset(_edge(a, b) for a, b in edges)
        vs = set(tuple(v) for v in vertices)
        for a, b in es:
            vs.add(a)
            vs.add(b)
        return cls(frozenset(vs), es)

    @property
    def length(self):
        return sum((abs(a[0] - b[0]) + abs(a[1] - b[1]) for a, b in self.edges), 0)

    @property
    def is_unit(self) -> bool:
        return all(abs(a[0] - b[0]) + abs(a[1] - b[1]) == 1 for a, b in self.edges)

    def adjacency(self) -> dict:
        adj = {v: [] for v in self.vertices}
        for a, b in self.edges:
            adj[a].append(b)
            adj[b].append(a)
        return adj

    def sorted_edges(self) -> list:
        return sorted(self.edges)


@dataclass(frozen=True)
class HananGrid:
    vertices: tuple
    edges: dict  # sorted vertex pair -> segment length

    def adjacency(self) -> dict:
        adj = {v: [] for v in self.vertices}
        for (a, b), w in self.edges.items():
            adj[a].append((b, w))
            adj[b].append((a, w))
        return adj


def hanan_grid(inst: SteinerInstance) -> HananGrid:
    xs = sorted({x for x, _ in inst.points})
    ys = sorted({y for _, y in inst.points})
    vertices = tuple((x, y) for y in ys for x in xs)
    edges = {}
    for y in ys:
        for x0, x1 in zip(xs, xs[1:]):
            edges[((x0, y), (x1, y))] = x1 - x0
    for x in xs:
        for y0, y1 in zip(ys, ys[1:]):
            edges[((x, y0), (x, y1))] = y1 - y0
    return HananGrid(vertices, edges)


def exact_steiner(inst: SteinerInstance) -> tuple[SteinerTree, int]:
    """Minimum rectilinear Steiner tree by Dreyfus-Wagner on the Hanan grid.

    Returns the tree with one edge per Hanan segment used, and its length.
    Exponential in the number of terminals; capped at ``EXACT_MAX_POINTS``.
    """
    k = len(inst.points)
    if k > EXACT_MAX_POINTS:
        raise Unsupported(f"exact solver supports at most {EXACT_MAX_POINTS} points, got {k}")
    if k == 1:
        return SteinerTree(frozenset([inst.root])), 0

    grid = hanan_grid(inst)
    index = {v: i for i, v in enumerate(grid.vertices)}
    nv = len(grid.vertices)
    adj = [[] for _ in range(nv)]
    for (a, b), w in sorted(grid.edges.items()):
        adj[index[a]].append((index[b], w))
        adj[index[b]].append((index[a], w))
    term = [index[p] for p in inst.points]

    inf = float("inf")
    full = (1 << k) - 1
    cost = [None] * (full + 1)
    # back[mask][v]: ("leaf",) | ("pred", u) | ("split", submask)
    back = [None] * (full + 1)

    # Masks by increasing popcount so every proper submask is final.
    for mask in sorted(range(1, full + 1), key=lambda m: (bin(m).count("1"), m)):
        dist = [inf] * nv
        bp = [None] * nv
        if mask & (mask - 1) == 0:
            v = term[mask.bit_length() - 1]
            dist[v] = 0
            bp[v] = ("leaf",)
        else:
            low = mask & -mask
            rest = mask ^ low
            sub = rest
            while True:
                a = sub | low
                b = mask ^ a
                if b:
                    ca, cb = cost[a], cost[b]
                    for v in range(nv):
                        d = ca[v] + cb[v]
                        if d < dist[v]:
                            dist[v] = d
                            bp[v] = ("split", a)
                if sub == 0:
                    break
                sub = (sub - 1) & rest
        heap = [(d, v) for v, d in enumerate(dist) if d < inf]
        heapq.heapify(heap)
        while heap:
            d, u = heapq.heappop(heap)
            if d > dist[u]:
                continue
            for v, w in adj[u]:
                nd = d + w
                if nd < dist[v]:
                    dist[v] = nd
                    bp[v] = ("pred", u)
                    heapq.heappush(heap, (nd, v))
        cost[mask] = dist
        back[mask] = bp

    edges = set()
    stack = [(full, term[0])]
    while stack:
        mask, v = stack.pop()
        step = back[mask][v]
        if step[0] == "pred":
            u = step[1]
            edges.add(_edge(grid.vertices[u], grid.vertices[v]))
            stack.append((mask, u))
        elif step[0] == "split":
            stack.append((step[1], v))
            stack.append((mask ^ step[1], v))

    tree = SteinerTree.from_edges(edges)
    length = cost[full][term[0]]
    if tree.length != length or len(tree.edges) != len(tree.vertices) - 1:
        raise AssertionError("Dreyfus-Wagner reconstruction is inconsistent")
    return tree, int(length)


def subdivide_to_unit(tree: SteinerTree) -> SteinerTree:
    """Split every axis-parallel segment into unit edges."""
    edges = set()
    for a, b in tree.edges:
        if any(not float(c).is_integer() for c in (*a, *b)):
            raise SteinerError(f"segment {a}-{b} has non-integer endpoints")
        (x0, y0), (x1, y1) = (tuple(int(c) for c in a), tuple(int(c) for c in b))
        if x0 != x1 and y0 != y1:
            raise SteinerError(f"segment {a}-{b} is not axis-parallel")
        if x0 == x1:
            lo, hi = sorted((y0, y1))
            edges.update(((x0, y), (x0, y + 1)) for y in range(lo, hi))
        else:
            lo, hi = sorted((x0, x1))
            edges.update(((x, y0), (x + 1, y0)) for x in range(lo, hi))
    vertices = {tuple(int(c) for c in v) for v in tree.vertices}
    return SteinerTree.from_edges(edges, vertices)


def _direction_rank(a, b) -> int:
    dx, dy = b[0] - a[0], b[1] - a[1]
    unit = ((dx > 0) - (dx < 0), (dy > 0) - (dy < 0))
    for rank, mv in enumerate(DIRECTION_PRIORITY):
        if mv.delta == unit:
            return rank
    raise SteinerError(f"edge {a}-{b} is not axis-parallel")


def euler_tour(tree: SteinerTree, root) -> list:
    """Closed walk from ``root`` crossing every edge once in each direction.

    Children are explored Up, Right, Down, Left.
    """
    root = tuple(root)
    if root not in tree.vertices:
        raise SteinerError(f"root {root} is not a tree vertex")
    adj = tree.adjacency()
    for v, nbrs in adj.items():
        nbrs.sort(key=lambda u: _direction_rank(v, u))
    tour = [root]
    seen = {root}
    stack = [(root, iter(adj[root]))]
    while stack:
        v, it = stack[-1]
        for u in it:
            if u not in seen:
                seen.add(u)
                tour.append(u)
                stack.append((u, iter(adj[u])))
                break
        else:
            stack.pop()
            if stack:
                tour.append(stack[-1][0])
    if len(seen) != len(tree.vertices):
        raise SteinerError("tree is not connected")
    return tour


@dataclass
class Validation:
    ok: bool
    problems: list

    def __bool__(self):
        return self.ok


def validate_tree(tree: SteinerTree, inst: SteinerInstance) -> Validation:
    problems = []
    if not tree.vertices:
        return Validation(False, ["tree has no vertices"])
    for a, b in tree.sorted_edges():
        if a not in tree.vertices or b not in tree.vertices:
            problems.append(f"edge {a}-{b} has an endpoint outside the vertex set")
        if abs(a[0] - b[0]) + abs(a[1] - b[1]) != 1:
            problems.append(f"edge {a}-{b} is not a unit axis-parallel edge")
    if len(tree.edges) != len(tree.vertices) - 1:
        problems.append(f"{len(tree.edges)} edges for {len(tree.vertices)} vertices: not a tree")
    adj = {v: [] for v in tree.vertices}
    for a, b in tree.edges:
        if a in adj and b in adj:
            adj[a].append(b)
            adj[b].append(a)
    start = next(iter(sorted(tree.vertices)))
    reached = {start}
    stack = [start]
    while stack:
        for u in adj[stack.pop()]:
            if u not in reached:
                reached.add(u)
                stack.append(u)
    if len(reached) != len(tree.vertices):
        problems.append(f"tree is disconnected ({len(reached)} of {len(tree.vertices)} vertices reachable)")
    missing = [p for p in inst.points if p not in tree.vertices]
    if missing:
        problems.append(f"terminals not covered: {missing}")
    if tree.length > inst.budget:
        problems.append(f"length {tree.length} exceeds budget {inst.budget}")
    return Validation(not problems, problems)


def scale_tree(tree: SteinerTree, factor) -> SteinerTree:
    """Multiply every coordinate by ``factor`` exactly."""
    f = Fraction(factor)
    sv = lambda v: (Fraction(v[0]) * f, Fraction(v[1]) * f)
    return SteinerTree.from_edges(((sv(a), sv(b)) for a, b in tree.edges), (sv(v) for v in tree.vertices))
