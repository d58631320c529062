import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import dense_simulate
from steinerpuzzle.puzzle import (
    Cell,
    Configuration,
    IllegalMove,
    Move,
    MoveSequence,
    PuzzleError,
    Unsupported,
    apply_move,
    apply_sequence,
    bfs_distances,
    bfs_optimal,
    canonical_configuration,
    is_reachable,
    non_similar_cells,
)


def test_canonical_2x2():
    cfg = canonical_configuration(2, (0, 0))
    assert cfg.label_at((1, 0)) == 1
    assert cfg.label_at((0, 1)) == 2
    assert cfg.label_at((1, 1)) == 3
    assert cfg.hole == (0, 0)
    assert not cfg.overrides


def test_canonical_3x3_row_major():
    cfg = canonical_configuration(3, (2, 2))
    assert [cfg.label_at((x, y)) for y in range(3) for x in range(3) if (x, y) != (2, 2)] == list(range(1, 9))
    assert cfg.label_at((1, 2)) == 8


def test_canonical_large_index():
    cfg = canonical_configuration(108, (36, 36))
    assert cfg.label_at((37, 36)) == 36 * 108 + 37 == 3925
    assert cfg.label_at((35, 36)) == 36 * 108 + 35 + 1


@pytest.mark.parametrize("n, hole", [(1, (0, 0)), (3, (3, 0)), (3, (0, -1))])
def test_canonical_rejects(n, hole):
    with pytest.raises(PuzzleError):
        canonical_configuration(n, hole)


def test_apply_move_right():
    cfg = canonical_configuration(2, (0, 0))
    out = apply_move(cfg, Move.RIGHT)
    assert out.hole == (1, 0)
    assert out.label_at((0, 0)) == 1
    assert out.label_at((1, 0)) == 0
    assert out.label_at((1, 1)) == 3


def test_apply_move_off_board():
    cfg = canonical_configuration(2, (0, 0))
    with pytest.raises(IllegalMove):
        apply_move(cfg, Move.LEFT)


def test_row_shift_on_large_board():
    s = canonical_configuration(108, (36, 36))
    out, region = apply_sequence(s, [Move.RIGHT] * 36)
    assert out.hole == (72, 36)
    for x in range(36, 72):
        assert out.label_at((x, 36)) == s.label_at((x + 1, 36))
    assert out.label_at((73, 36)) == s.label_at((73, 36))
    assert len(region) == 37
    assert len(out.overrides) == 37


def test_empty_sequence():
    s = canonical_configuration(5, (2, 3))
    out, region = apply_sequence(s, MoveSequence())
    assert out == s
    assert region == {Cell(2, 3)}


def test_square_pattern_cycles_three():
    s = canonical_configuration(2, (1, 1))
    out, _ = apply_sequence(s, MoveSequence.parse("LDRU"))
    assert out.hole == (1, 1)
    # square from (0,0) -> (0,1), (0,1) -> (1,0), (1,0) -> (0,0)
    assert out.label_at((0, 1)) == s.label_at((0, 0))
    assert out.label_at((1, 0)) == s.label_at((0, 1))
    assert out.label_at((0, 0)) == s.label_at((1, 0))


def test_illegal_move_reports_index():
    s = canonical_configuration(3, (0, 0))
    with pytest.raises(IllegalMove) as info:
        apply_sequence(s, MoveSequence.parse("RRR"))
    assert info.value.index == 2


def test_move_sequence_text():
    seq = MoveSequence.parse("UD\nLR ")
    assert str(seq) == "UDLR"
    assert str(seq.inverse()) == "LRUD"
    with pytest.raises(PuzzleError):
        MoveSequence.parse("UX")


def test_equality_across_base_holes():
    a = canonical_configuration(3, (0, 0))
    b = apply_sequence(canonical_configuration(3, (1, 0)), [Move.LEFT])[0]
    # b's hole moved left: label 1 (at (0,0)) slides to (1,0)
    assert b.label_at((1, 0)) == 1
    assert a == b
    assert hash(a) == hash(b)
    assert a.diff_cells(b) == set()


def random_walk(rng, n, start, length):
    x, y = start
    out = []
    for _ in range(length):
        options = [m for m in Move if 0 <= x + m.delta[0] < n and 0 <= y + m.delta[1] < n]
        m = rng.choice(options)
        x, y = x + m.delta[0], y + m.delta[1]
        out.append(m)
    return MoveSequence(out)


@given(st.integers(2, 12), st.data())
def test_move_then_inverse_is_identity(n, data):
    hole = (data.draw(st.integers(0, n - 1)), data.draw(st.integers(0, n - 1)))
    cfg = canonical_configuration(n, hole)
    seq = random_walk(random.Random(data.draw(st.integers())), n, hole, 30)
    cfg, _ = apply_sequence(cfg, seq)
    legal = [m for m in Move if cfg.on_board(cfg.hole.step(m))]
    m = data.draw(st.sampled_from(legal))
    back = apply_move(apply_move(cfg, m), m.inverse)
    assert back == cfg
    assert dict(back.overrides) == dict(cfg.overrides)


@settings(max_examples=50)
@given(st.integers(2, 15), st.integers(0, 2**32), st.integers(0, 200))
def test_region_connected_and_untouched_outside(n, seed, length):
    rng = random.Random(seed)
    hole = (rng.randrange(n), rng.randrange(n))
    s = canonical_configuration(n, hole)
    seq = random_walk(rng, n, hole, length)
    out, region = apply_sequence(s, seq)
    assert set(out.diff_cells(s)) <= region
    # 4-connected
    start = next(iter(region))
    seen, stack = {start}, [start]
    while stack:
        v = stack.pop()
        for m in Move:
            u = v.step(m)
            if u in region and u not in seen:
                seen.add(u)
                stack.append(u)
    assert seen == region


@pytest.mark.parametrize("n, seed", [(2, 0), (7, 1), (23, 2), (50, 3)])
def test_sparse_matches_dense(n, seed):
    rng = random.Random(seed)
    hole = (rng.randrange(n), rng.randrange(n))
    s = canonical_configuration(n, hole)
    seq = random_walk(rng, n, hole, 10_000)
    sparse, region = apply_sequence(s, seq)
    grid, dense_hole, visited = dense_simulate(s.to_dense(), hole, str(seq))
    assert sparse.to_dense() == grid
    assert sparse.hole == dense_hole
    assert region == visited


def test_reachable_identity():
    s = canonical_configuration(4, (1, 2))
    assert is_reachable(s, s)


def test_adjacent_swap_unreachable_3x3():
    s = canonical_configuration(3, (0, 0))
    t = Configuration(3, s.base_hole, s.hole, {Cell(1, 0): 2, Cell(2, 0): 1})
    assert not is_reachable(s, t)
    assert bfs_optimal(s, t, 40) is None
    assert s.to_tuple() in bfs_distances(s)
    assert t.to_tuple() not in bfs_distances(s)


def test_reachable_rejects_mismatch():
    with pytest.raises(PuzzleError):
        is_reachable(canonical_configuration(3, (0, 0)), canonical_configuration(4, (0, 0)))


def test_bfs_identity():
    s = canonical_configuration(3, (1, 1))
    assert bfs_optimal(s, s, 0) == MoveSequence()


def test_bfs_three_cycle_2x2():
    s = canonical_configuration(2, (1, 1))
    t = apply_sequence(s, MoveSequence.parse("LDRU"))[0]
    seq = bfs_optimal(s, t, 10)
    assert len(seq) == 4
    assert apply_sequence(s, seq)[0] == t
    assert bfs_optimal(s, t, 3) is None
    assert len(bfs_distances(s)) == 12


def test_bfs_rejects_large():
    s = canonical_configuration(4, (0, 0))
    with pytest.raises(Unsupported):
        bfs_optimal(s, s, 5)


def test_reachability_exhaustive_2x2():
    s = canonical_configuration(2, (0, 0))
    reach = bfs_distances(s)
    for perm in itertools.permutations(range(4)):
        assert is_reachable(s, Configuration.from_tuple(2, perm)) == (perm in reach)


@pytest.mark.slow
def test_reachability_exhaustive_3x3():
    s = canonical_configuration(3, (0, 0))
    reach = bfs_distances(s)
    assert len(reach) == 181440
    assert max(reach.values()) == 31
    for perm in itertools.permutations(range(9)):
        assert is_reachable(s, Configuration.from_tuple(3, perm)) == (perm in reach)


def test_non_similar_identity():
    s = canonical_configuration(6, (2, 2))
    assert non_similar_cells(s, s) == {Cell(2, 2)}


def test_non_similar_moved_hole():
    s = canonical_configuration(6, (2, 2))
    t = apply_sequence(s, MoveSequence.parse("RU"))[0]
    assert non_similar_cells(s, t) == {Cell(2, 2), Cell(3, 2), Cell(3, 3)}
