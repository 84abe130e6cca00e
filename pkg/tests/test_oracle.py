import ast
import pathlib

from ramseydraw import oracle


def test_book4_shape():
    nv, edges = oracle.BOOK4
    assert nv == 6
    assert len(edges) == 9
    degs = {}
    for a, b in edges:
        degs[a] = degs.get(a, 0) + 1
        degs[b] = degs.get(b, 0) + 1
    assert sorted(degs.values()) == [2, 2, 2, 2, 5, 5]


def test_lifted_target():
    nv, edges = oracle.BOOK4_LIFTED
    assert nv == 8
    assert len(edges) == 9
    assert all(len(e) == 4 for e in edges)
    assert all(6 in e and 7 in e for e in edges)


def test_embeddings_complete_k6():
    from itertools import combinations
    edges = list(combinations(range(6), 2))
    found = oracle.embeddings(edges, oracle.BOOK4)
    assert len(found) == 15  # 6! / |Aut| with |Aut| = 48


def test_contains_copy_negative():
    nv, tedges = oracle.BOOK4
    edges = [tedges[i] for i in range(8)]  # one edge short
    assert not oracle.contains_copy(edges, oracle.BOOK4)
    assert oracle.contains_copy(list(tedges), oracle.BOOK4)


def test_oracle_short_circuit_counting():
    # P1 needs 9 edges; 16 total moves give him only 8.
    res = oracle.oracle_solve(("two-cliques", 6), oracle.BOOK4, 16)
    assert res.value == "no-P1-win-within-budget"
    assert res.short_circuit


def test_oracle_triangle_values():
    """Frozen regression values, computed by this oracle itself.

    The triangle achievement boundary: forced on five vertices (first
    possible on the first player's fourth move, ply 7), never on four.
    """
    wins = {}
    for budget in (5, 6, 7, 9):
        res = oracle.oracle_solve(("clique", 5), oracle.TRIANGLE, budget)
        wins[budget] = res.value
    assert wins[5] == "no-P1-win-within-budget"
    assert wins[6] == "no-P1-win-within-budget"
    assert wins[7] == "P1-win-within-budget"
    assert wins[9] == "P1-win-within-budget"
    res = oracle.oracle_solve(("clique", 4), oracle.TRIANGLE, 12)
    assert res.value == "no-P1-win-within-budget"


def test_oracle_agrees_with_plain_recursion():
    """Cross-check the memoised solver against a no-frills minimax."""
    universe = oracle.board_edges(("clique", 4))

    def plain(owners, moves_left):
        if moves_left == 0:
            return False
        to_move = 1 if len(owners) % 2 == 0 else 2
        mine = [e for e, o in owners.items() if o == to_move]
        free = [e for e in universe if e not in owners]
        for e in free:
            if oracle.contains_copy(mine + [e], oracle.TRIANGLE):
                return to_move == 1
        if moves_left == 1:
            return False
        vals = [plain({**owners, e: to_move}, moves_left - 1) for e in free]
        return any(vals) if to_move == 1 else all(vals)

    for budget in (4, 5, 6):
        res = oracle.oracle_solve(("clique", 4), oracle.TRIANGLE, budget)
        expected = plain({}, budget)
        got = res.value == "P1-win-within-budget"
        assert got == expected, f"budget {budget}"


def test_oracle_is_independent_of_strategy_modules():
    """The solver must not reach into the strategy or lemma code paths."""
    src = pathlib.Path(oracle.__file__).read_text()
    tree = ast.parse(src)
    banned = {"strategy", "hyperstrategy", "lemmas", "patterns", "verifier"}
    for node in ast.walk(tree):
        if isinstance(node, ast.Import):
            names = {a.name.split(".")[-1] for a in node.names}
            assert not (names & banned)
        if isinstance(node, ast.ImportFrom):
            mod = (node.module or "").split(".")[-1]
            assert mod not in banned
