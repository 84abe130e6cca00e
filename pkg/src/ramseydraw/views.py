"""2-uniform views of game boards.

All pattern and predicate work happens on a projected pair graph: either one
clique copy of the graph board, or the pairs-through-two-centres view of the
4-uniform board.  Views also carry the "effective" ownership adjustments the
strategy sometimes applies: edges granted to P1 (counted as his even when the
board shows them unclaimed) and edges conceded by P2 (his on the board, but
excluded from everything he relies on).
"""

from __future__ import annotations

from .board import (HYPER4, P1, P2, TWO_CLIQUES, UNCLAIMED, GameState,
                    edge_vertices)


class PairView:
    """Pair graph with per-player adjacency and O(1) ownership lookup."""

    def __init__(self, vertices, p1_pairs, p2_pairs):
        self.verts = list(vertices)
        self.p1 = {frozenset(p) for p in p1_pairs}
        self.p2 = {frozenset(p) for p in p2_pairs}
        self.p1_adj = {}
        self.p2_adj = {}
        for pset, adj in ((self.p1, self.p1_adj), (self.p2, self.p2_adj)):
            for p in pset:
                a, b = tuple(p)
                adj.setdefault(a, set()).add(b)
                adj.setdefault(b, set()).add(a)

    def owner(self, u, v) -> int:
        p = frozenset((u, v))
        if p in self.p1:
            return P1
        if p in self.p2:
            return P2
        return UNCLAIMED

    def pairs_of(self, player: int):
        return self.p1 if player == P1 else self.p2

    def adj_of(self, player: int):
        return self.p1_adj if player == P1 else self.p2_adj

    def touched(self):
        out = set(self.p1_adj)
        out.update(self.p2_adj)
        return out

    def vertices(self):
        return self.verts


def copy_view(state: GameState, copy: int, granted=(), conceded=()) -> PairView:
    """View of one clique copy of a two-cliques board."""
    assert state.kind == TWO_CLIQUES
    granted = {frozenset(edge_vertices(e)) for e in granted
               if e[0] == "g" and e[1] == copy}
    conceded = {frozenset(edge_vertices(e)) for e in conceded
                if e[0] == "g" and e[1] == copy}
    p1_pairs = set(granted)
    p2_pairs = set()
    for e, o in state.owners.items():
        if e[1] != copy:
            continue
        pair = frozenset(edge_vertices(e))
        if o == P1:
            p1_pairs.add(pair)
        elif pair not in conceded:
            p2_pairs.add(pair)
    verts = [(copy, i) for i in range(state.n)]
    return PairView(verts, p1_pairs, p2_pairs)


def xy_view(state: GameState, x: int, y: int, granted=(), conceded=()) -> PairView:
    """Pairs-through-{x,y} view of a 4-uniform board.

    A hyperedge containing both centres projects to the pair of its other two
    vertices; the projection is a bijection onto C(n-2, 2) board slots.
    """
    assert state.kind == HYPER4
    centres = {x, y}

    def project(e):
        rest = [v for v in e[1:] if v not in centres]
        return frozenset(rest) if len(rest) == 2 else None

    granted_pairs = {project(e) for e in granted}
    conceded_pairs = {project(e) for e in conceded}
    p1_pairs = {p for p in granted_pairs if p}
    p2_pairs = set()
    for e, o in state.owners.items():
        pair = project(e)
        if pair is None:
            continue
        if o == P1:
            p1_pairs.add(pair)
        elif pair not in conceded_pairs:
            p2_pairs.add(pair)
    verts = [i for i in range(state.n) if i not in centres]
    return PairView(verts, p1_pairs, p2_pairs)


def pair_to_edge(state_kind: str, pair, centres=None) -> tuple:
    """Board-native edge for a view pair (inverse of the projection)."""
    u, v = tuple(pair)
    if state_kind == TWO_CLIQUES:
        from .board import graph_edge_v
        return graph_edge_v(u, v)
    from .board import hyper_edge
    x, y = centres
    return hyper_edge((u, v, x, y))
