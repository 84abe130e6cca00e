import random
from itertools import combinations

import pytest

from ramseydraw import board, hyperstrategy
from ramseydraw.board import P1, P2
from ramseydraw.verifier import Playout
from ramseydraw.views import xy_view


def hdrive(moves, n=16):
    p = Playout(n, game="hyper")
    for m in moves:
        p.p1_move(board.hyper_edge(m))
    return p


def test_board_intersection():
    assert hyperstrategy.board_intersection((0, 1), (2, 3), 8) == 1
    assert hyperstrategy.board_intersection((0, 1), (2, 3), 12) == 1
    # Sharing one vertex leaves one free slot: n - 3 hyperedges.
    assert hyperstrategy.board_intersection((0, 1), (1, 2), 10) == 7
    for n in (8, 9, 11):
        assert hyperstrategy.board_intersection((0, 1), (1, 2), n) == n - 3
    with pytest.raises(ValueError):
        hyperstrategy.board_intersection((0, 1), (1, 0), 8)


def test_stage1_script_and_postcondition():
    p = hdrive([(0, 1, 2, 3)])
    assert p.trace[-1]["edge"] == "h:4-5-6-7"  # XYAB on fresh vertices
    lab = p.ss.labels
    assert [lab[r] for r in "TUVW"] == [0, 1, 2, 3]
    assert [lab[r] for r in "XYAB"] == [4, 5, 6, 7]
    # Five neutral P1 replies finish stage 1.
    replies = [(0, 1, 2, 8), (0, 1, 3, 8), (0, 2, 3, 8), (1, 2, 3, 8),
               (0, 1, 2, 9)]
    for m in replies:
        p.p1_move(board.hyper_edge(m))
    assert p.ss.stage == 2
    lab = p.ss.labels
    # Stage-1 postcondition: P1 has 6 hyperedges, at most 4 on the XY board.
    p1_edges = p.state.edges_of(P1)
    assert len(p1_edges) == 6
    x, y = lab["X"], lab["Y"]
    on_view = [e for e in p1_edges if x in e[1:] and y in e[1:]]
    assert len(on_view) <= 4
    # P2 owns the five scripted pairs on the view.
    view = xy_view(p.state, x, y)
    a, b, c, d = lab["A"], lab["B"], lab["C"], lab["D"]
    expected = [(a, b), (b, c), (a, c), (c, d), (d, a)]
    for u, v in expected:
        assert view.owner(u, v) == P2
    # Special vertex: at most two P1 hyperedges contain it without the other.
    a0, a1 = lab["A0"], lab["A1"]
    off = sum(1 for e in p1_edges if a0 in e[1:] and a1 not in e[1:])
    assert off <= 2


def test_stage1_rebinds_x_away_from_p1():
    p = hdrive([(0, 1, 2, 3)])
    x = p.ss.labels["X"]
    p.p1_move(board.hyper_edge((x, 8, 9, 10)))
    assert p.ss.labels["X"] not in (x,)
    assert p.ss.labels["X"] == 5
    assert sorted(p.ss.labels[r] for r in "XYAB") == [4, 5, 6, 7]


def test_stage1_xayc_swap():
    p = hdrive([(0, 1, 2, 3), (0, 1, 2, 8)])
    lab = dict(p.ss.labels)
    # P1 grabs XAYC; P2 must take XABC and swap Y with B.
    xayc = board.hyper_edge((lab["X"], lab["A"], lab["Y"], lab["C"]))
    xabc = board.hyper_edge((lab["X"], lab["A"], lab["B"], lab["C"]))
    p.p1_move(xayc)
    assert board.edge_from_text(p.trace[-1]["edge"]) == xabc
    assert p.ss.labels["Y"] == lab["B"] and p.ss.labels["B"] == lab["Y"]


def test_stage1_da_swap():
    p = hdrive([(0, 1, 2, 3), (0, 1, 2, 8), (0, 1, 3, 8), (0, 2, 3, 8)])
    lab = dict(p.ss.labels)
    da = board.hyper_edge((lab["X"], lab["Y"], lab["D"], lab["A"]))
    db = board.hyper_edge((lab["X"], lab["Y"], lab["D"], lab["B"]))
    p.p1_move(da)
    assert board.edge_from_text(p.trace[-1]["edge"]) == db
    assert p.ss.labels["A"] == lab["B"] and p.ss.labels["B"] == lab["A"]


def test_stage2_star_and_answers():
    p = hdrive([(0, 1, 2, 3), (0, 1, 2, 8), (0, 1, 3, 8), (0, 2, 3, 8),
                (1, 2, 3, 8), (0, 1, 2, 9)])
    assert p.ss.stage == 2
    lab = p.ss.labels
    x, y, a0 = lab["X"], lab["Y"], lab["A0"]
    for _ in range(2):
        f = p.ss.pending_star
        p.p1_move(board.hyper_edge((x, y, a0, f)))
        assert p.ss.pending_star != f
    f = p.ss.pending_star
    p.p1_move(board.hyper_edge((0, 1, 3, 9)))  # non-answer
    closed = board.edge_from_text(
        [t for t in p.trace if t["player"] == "P2"][-1]["edge"])
    assert set(closed[1:]) == {x, y, a0, f}
    assert p.ss.stage == 3 and p.ss.star_k == 3


COPY_BASE = (2, 10)
COPY_CHERRIES = [(2, 3), (10, 3), (2, 11), (10, 11), (2, 12), (10, 12),
                 (2, 13), (10, 13)]


def _case_one_script():
    # Eight hyperedges of a lifted copy with centres {0,1} containing the
    # opening hyperedge; base present, cherry edge (2,13) missing.
    pairs = [COPY_BASE, (10, 3), (2, 11), (10, 11), (2, 12)]
    moves = [(0, 1, 2, 3)] + [(0, 1) + q for q in pairs]
    return moves


def test_stage3_case_one_blocks_and_mirrors():
    p = hdrive(_case_one_script())
    assert p.ss.stage == 2
    p.p1_move(board.hyper_edge((0, 1, 10, 12)))  # non-answer, copy edge 7
    assert p.ss.stage == 3
    p.p1_move(board.hyper_edge((0, 1, 10, 13)))  # copy edge 8 of 9
    # P2 must claim the missing cherry edge on the {0,1} board.
    assert p.trace[-1]["edge"] == "h:0-1-2-13"
    assert p.ss.block_case == "I"
    assert p.ss.block_centres == (0, 1)
    # P1 extends a fresh cherry; P2 mirrors it.
    p.p1_move(board.hyper_edge((0, 1, 2, 14)))
    assert p.trace[-1]["edge"] == "h:0-1-10-14"
    p.p1_stop()
    assert p.done and p.winner == "P2"
    copy = hyperstrategy.completed_copy_hyperedges(p.ss)
    assert len(copy) == 9
    assert all(p.state.owner(e) == P2 for e in copy)
    common = set(copy[0][1:])
    for e in copy[1:]:
        common &= set(e[1:])
    assert common == {p.ss.labels["X"], p.ss.labels["Y"]}


def test_stage3_case_two_takes_missing_base():
    pairs = [(10, 3), (2, 11), (10, 11), (2, 12)]
    p = hdrive([(0, 1, 2, 3)] + [(0, 1) + q for q in pairs])
    p.p1_move(board.hyper_edge((0, 1, 10, 12)))
    p.p1_move(board.hyper_edge((0, 1, 2, 13)))
    p.p1_move(board.hyper_edge((0, 1, 10, 13)))
    assert p.ss.block_case == "II"
    assert p.trace[-1]["edge"] == "h:0-1-2-10"  # the absent base
    p.p1_stop()
    assert p.done and p.winner == "P2"


def test_stage3_case_three_skips():
    p = hdrive([(0, 1, 2, 3), (0, 1, 2, 8), (0, 1, 3, 8), (0, 2, 3, 8),
                (1, 2, 3, 8), (0, 1, 2, 9)])
    p.p1_move(board.hyper_edge((0, 1, 3, 9)))  # stage-2 non-answer
    p.p1_move(board.hyper_edge((0, 2, 8, 9)))
    assert p.ss.block_case is None and p.ss.stage == 4
    p.p1_stop()
    assert p.done and p.winner == "P2"


def test_completion_centres_are_x_y():
    p = hdrive([(0, 1, 2, 3)])
    p.p1_stop()
    assert p.done
    copy = hyperstrategy.completed_copy_hyperedges(p.ss)
    x, y = p.ss.labels["X"], p.ss.labels["Y"]
    for e in copy:
        assert x in e[1:] and y in e[1:]


def test_view_faithfulness():
    """Claiming through the view's inverse equals claiming directly."""
    s = board.new_board("hyper4", 10)
    x, y = 3, 7
    pair = frozenset((1, 5))
    from ramseydraw.views import pair_to_edge
    e = pair_to_edge("hyper4", pair, centres=(x, y))
    s = board.apply_move(s, P1, e)
    view = xy_view(s, x, y)
    assert view.owner(1, 5) == P1
    # The projection is a bijection onto all C(n-2, 2) slots.
    slots = {frozenset(q) for q in combinations(
        [v for v in range(10) if v not in (x, y)], 2)}
    assert len(slots) == len(list(combinations(range(8), 2)))
    back = {frozenset(pair_to_edge("hyper4", q, centres=(x, y))[1:]) -
            {x, y} for q in slots}
    assert {frozenset(q) for q in back} == slots


def test_star_transfer_property():
    """A star in one centre-pair view projects to a star in every view."""
    rng = random.Random(17)
    n = 12
    for _ in range(40):
        x, y, a0 = rng.sample(range(n), 3)
        rest = [v for v in range(n) if v not in (x, y, a0)]
        fs = rng.sample(rest, rng.randrange(2, 5))
        owners = {board.hyper_edge((x, y, a0, f)): P1 for f in fs}
        s = board.GameState(kind="hyper4", n=n, owners=owners, history=(),
                            to_move=P2, p1_stopped=False)
        for h, i in combinations(range(n), 2):
            view = xy_view(s, h, i)
            pairs = sorted(view.p1, key=sorted)
            if len(pairs) < 2:
                continue
            common = set(pairs[0])
            for q in pairs[1:]:
                common &= set(q)
            assert common, f"edges through {(h, i)} share no vertex"


def test_named_stage_wrappers_guard_their_stage():
    from ramseydraw.strategy import InternalInvariantViolation
    p = hdrive([(0, 1, 2, 3)])
    s = board.declare_stop(p.state)
    move, _, _ = hyperstrategy.hyper_open_and_stage1(s, p.ss, ("stop",))
    assert move is not None
    with pytest.raises(InternalInvariantViolation):
        hyperstrategy.hyper_stage2_star(s, p.ss, ("stop",))
    with pytest.raises(InternalInvariantViolation):
        hyperstrategy.hyper_stage4_finish(s, p.ss, ("stop",))
