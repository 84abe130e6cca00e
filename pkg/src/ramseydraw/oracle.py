"""Independent brute-force oracle for strong achievement games.

Everything here is deliberately naive and self-contained: a subgraph
containment test by exhaustive injection, and an exact minimax solver over
the strong game ("first player to own a copy of the target wins; if the move
budget runs out, nobody does").  The solver memoises on a canonical key but
shares no code with the strategy or lemma modules, so it can serve as an
independent check on both.

Targets are given as ``(vertex_count, edges)`` with edges as tuples of vertex
indices (pairs for graphs, 4-tuples for 4-uniform hypergraphs).
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, permutations


# Target: four triangles sharing one edge, i.e. K6 minus the K4 on the
# non-shared vertices.  Vertices 0,1 form the shared (base) edge.
BOOK4 = (6, tuple((a, b) for a in (0, 1) for b in (2, 3, 4, 5)) + ((0, 1),))

TRIANGLE = (3, ((0, 1), (0, 2), (1, 2)))


def lift_target(target):
    """4-uniform lift of a graph target: two new vertices join every edge."""
    nv, edges = target
    return (nv + 2, tuple(e + (nv, nv + 1) for e in edges))


BOOK4_LIFTED = lift_target(BOOK4)


# ---------------------------------------------------------------------------
# Naive containment / enumeration by exhaustive injection
# ---------------------------------------------------------------------------

def embeddings(edge_sets, target):
    """All copies of ``target`` inside a collection of claimed edges.

    ``edge_sets`` is an iterable of edges, each an iterable of vertices
    (any hashable vertex type, any uniform arity).  Returns the set of
    copies, each a frozenset of frozenset-edges, found by trying every
    injective map from target vertices into the touched vertices.
    """
    nv, tedges = target
    have = {frozenset(e) for e in edge_sets}
    touched = sorted({v for e in have for v in e}, key=repr)
    found = set()
    if len(touched) < nv:
        return found
    for image in permutations(touched, nv):
        mapped = [frozenset(image[i] for i in te) for te in tedges]
        if all(m in have for m in mapped):
            found.add(frozenset(mapped))
    return found


def contains_copy(edge_sets, target) -> bool:
    nv, tedges = target
    have = {frozenset(e) for e in edge_sets}
    if len(have) < len(tedges):
        return False
    touched = sorted({v for e in have for v in e}, key=repr)
    if len(touched) < nv:
        return False
    for image in permutations(touched, nv):
        if all(frozenset(image[i] for i in te) in have for te in tedges):
            return True
    return False


# ---------------------------------------------------------------------------
# Board universes
# ---------------------------------------------------------------------------

def board_edges(board_spec):
    """Edge universe of a board spec.

    Specs: ``("clique", n)``, ``("two-cliques", n)``, ``("hyper4", n)``.
    Vertices are integers; for two cliques, copy 2 uses ordinals n..2n-1 so
    that no cross edges exist in the universe.
    """
    kind, n = board_spec
    if kind == "clique":
        return [frozenset(p) for p in combinations(range(n), 2)]
    if kind == "two-cliques":
        return ([frozenset(p) for p in combinations(range(n), 2)]
                + [frozenset(p) for p in combinations(range(n, 2 * n), 2)])
    if kind == "hyper4":
        return [frozenset(q) for q in combinations(range(n), 4)]
    raise ValueError(f"unknown board spec {board_spec!r}")


def _copy_tag(board_spec, v):
    if board_spec[0] == "two-cliques":
        return 0 if v < board_spec[1] else 1
    return 0


# ---------------------------------------------------------------------------
# Canonical keys (local to the oracle)
# ---------------------------------------------------------------------------

def _canon_key(board_spec, owners):
    touched = sorted({v for e in owners for v in e})
    colors = {v: _copy_tag(board_spec, v) for v in touched}
    incident = {v: [] for v in touched}
    for e, o in owners.items():
        for v in e:
            incident[v].append((o, tuple(u for u in e if u != v)))

    def refine(cols):
        while True:
            sigs = {}
            for v, c in cols.items():
                nb = sorted((o, tuple(sorted(cols[u] for u in others)))
                            for o, others in incident[v])
                sigs[v] = (c, tuple(nb))
            ranks = {s: i for i, s in enumerate(sorted(set(sigs.values())))}
            new = {v: ranks[s] for v, s in sigs.items()}
            if len(set(new.values())) == len(set(cols.values())):
                return new
            cols = new

    def order_key(order):
        pos = {v: i for i, v in enumerate(order)}
        rows = sorted((tuple(sorted(pos[v] for v in e)), o)
                      for e, o in owners.items())
        return tuple(rows)

    def minimise(cols):
        cells = {}
        for v, c in cols.items():
            cells.setdefault(c, []).append(v)
        for vs in cells.values():
            vs.sort()
        cell_list = [cells[c] for c in sorted(cells)]
        if all(len(c) == 1 for c in cell_list):
            return order_key([c[0] for c in cell_list])
        target_cell = next(c for c in cell_list if len(c) > 1)
        best = None
        for v in target_cell:
            forked = {u: (c, 1 if u == v else 2) for u, c in cols.items()}
            ranks = {s: i for i, s in enumerate(sorted(set(forked.values())))}
            key = minimise(refine({u: ranks[s] for u, s in forked.items()}))
            if best is None or key < best:
                best = key
        return best

    if not touched:
        return (board_spec, ())
    edge_key = minimise(refine(colors))
    counts = tuple(sorted(
        (_copy_tag(board_spec, v) for v in touched)))
    return (board_spec, len(touched), counts, edge_key)


# ---------------------------------------------------------------------------
# Exact minimax
# ---------------------------------------------------------------------------

@dataclass
class OracleResult:
    board_spec: tuple
    target_name: str
    budget: int
    value: str  # "P1-win-within-budget" | "no-P1-win-within-budget"
    nodes: int = 0
    memo_hits: int = 0
    short_circuit: bool = False


class ResourceExceeded(Exception):
    pass


def oracle_solve(board_spec, target, budget: int,
                 target_name: str = "target",
                 node_limit: int = 50_000_000) -> OracleResult:
    """Exact value of the strong game within a total-move budget.

    Returns whether the first player can force a completed copy of the
    target within ``budget`` total moves against best play.  The second
    player also wins (ending the game, hence "no-P1-win") by completing a
    copy first.
    """
    nv, tedges = target
    universe = board_edges(board_spec)
    need = len(tedges)
    stats = OracleResult(board_spec, target_name, budget, "?")

    # P1 moves on plies 1,3,5,...: within `budget` total moves he gets
    # ceil(budget / 2) claims.  Too few to build the target => no win.
    if (budget + 1) // 2 < need:
        stats.value = "no-P1-win-within-budget"
        stats.short_circuit = True
        return stats

    memo = {}

    def solve(owners, moves_left):
        stats.nodes += 1
        if stats.nodes > node_limit:
            raise ResourceExceeded(
                f"oracle exceeded {node_limit} nodes "
                f"(explored {stats.nodes}, memo {len(memo)})")
        if moves_left == 0:
            return False
        to_move = 1 if len(owners) % 2 == 0 else 2
        p1_edges = [e for e, o in owners.items() if o == 1]
        p1_claims_left = (moves_left + 1) // 2 if to_move == 1 else moves_left // 2
        if len(p1_edges) + p1_claims_left < need:
            return False  # P1 cannot physically assemble the target in time.
        key = _canon_key(board_spec, owners)
        if key in memo:
            stats.memo_hits += 1
            return memo[key]

        mine = p1_edges if to_move == 1 else \
            [e for e, o in owners.items() if o == 2]
        free = [e for e in universe if e not in owners]
        result = None
        # A completing move ends the game at once: a P1 win, or a P2
        # completion that shuts P1 out.
        for e in free:
            if contains_copy(mine + [e], target):
                result = (to_move == 1)
                break
        if result is None:
            if moves_left == 1:
                result = False  # Sole remaining move completes nothing.
            else:
                result = (to_move == 2)  # Default if no child helps the mover.
                seen_children = set()
                for e in free:
                    child = dict(owners)
                    child[e] = to_move
                    ckey = _canon_key(board_spec, child)
                    if ckey in seen_children:
                        continue
                    seen_children.add(ckey)
                    val = solve(child, moves_left - 1)
                    if to_move == 1 and val:
                        result = True
                        break
                    if to_move == 2 and not val:
                        result = False
                        break
        memo[key] = result
        return result

    value = solve({}, budget)
    stats.value = ("P1-win-within-budget" if value
                   else "no-P1-win-within-budget")
    return stats
