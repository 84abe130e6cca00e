"""Copy detection for the two targets, and the counting bounds built on it.

The graph target is a four-page book: a base edge plus four cherries (pairs
of edges) hanging from its endpoints -- equivalently K6 minus a K4.  Its
4-uniform lift adds two centre vertices to every edge.  Every automorphism
fixes the base, so a copy is identified by (base pair, pendant 4-set).

All detection runs on 2-uniform views (see views.py); the hypergraph
functions reduce to the graph ones through per-centre-pair projections.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from .board import (HYPER4, P1, P2, TWO_CLIQUES, UNCLAIMED, GameState,
                    graph_edge_v, hyper_edge)
from .views import PairView, copy_view, xy_view

TARGET_EDGE_COUNT = 9
TARGET_DEGREES = (5, 5, 2, 2, 2, 2)


@dataclass(frozen=True)
class GCopy:
    """An embedded copy of the graph target.

    ``base`` is the pair of degree-5 vertices, ``pendants`` the four
    degree-2 vertices.  ``pair`` optionally singles out the pendant whose
    cherry plays the detached role; detection leaves it unset and a strategy
    stage fixes it when needed.
    """

    base: tuple
    pendants: tuple
    pair: object = None

    def edges(self):
        a0, a1 = self.base
        out = [frozenset((a0, a1))]
        for b in self.pendants:
            out.append(frozenset((a0, b)))
            out.append(frozenset((a1, b)))
        return out

    def to_json(self):
        return {"base": [_vtext(v) for v in self.base],
                "pendants": [_vtext(v) for v in self.pendants]}


@dataclass(frozen=True)
class GPrimeCopy:
    """An embedded copy of the lifted target: centres plus an inner copy."""

    centres: tuple
    inner: GCopy

    def hyperedges(self):
        x, y = self.centres
        return [frozenset(p | {x, y}) for p in self.inner.edges()]

    def to_json(self):
        return {"centres": list(self.centres), "inner": self.inner.to_json()}


def _vtext(v):
    return list(v) if isinstance(v, tuple) else v


# ---------------------------------------------------------------------------
# View-level detection
# ---------------------------------------------------------------------------

def copies_in_view(view: PairView, player: int) -> list:
    """All fully-owned copies, one per (base, pendant-set)."""
    adj = view.adj_of(player)
    out = []
    for pair in sorted(view.pairs_of(player), key=_pair_key):
        a0, a1 = sorted(pair)
        common = adj.get(a0, set()) & adj.get(a1, set())
        if len(common) < 4:
            continue
        for pendants in combinations(sorted(common), 4):
            out.append(GCopy(base=(a0, a1), pendants=pendants))
    return out


def _pair_key(p):
    return tuple(sorted(p))


def near_copies(view: PairView, player: int) -> list:
    """Copies the player is one unclaimed edge away from completing.

    Returns dicts with the missing pair, the would-be copy, and whether the
    base is already owned (the missing edge is then a cherry edge).
    """
    adj = view.adj_of(player)
    touched = sorted(view.touched())
    out = []
    seen = set()
    for a0, a1 in combinations(touched, 2):
        base_owner = view.owner(a0, a1)
        if base_owner == P2 and player == P1:
            continue
        if base_owner == P1 and player == P2:
            continue
        full, half = [], []
        for w in touched:
            if w in (a0, a1):
                continue
            o0, o1 = view.owner(a0, w), view.owner(a1, w)
            if o0 == player and o1 == player:
                full.append(w)
            elif o0 == player and o1 == UNCLAIMED:
                half.append((w, frozenset((a1, w))))
            elif o1 == player and o0 == UNCLAIMED:
                half.append((w, frozenset((a0, w))))
        if base_owner == player:
            if len(full) >= 3:
                for w, missing in half:
                    for rest in combinations(full, 3):
                        copy = GCopy(base=(a0, a1),
                                     pendants=tuple(sorted(rest + (w,))))
                        key = (missing, copy.base, copy.pendants)
                        if key not in seen:
                            seen.add(key)
                            out.append({"missing": missing, "copy": copy,
                                        "base_present": True})
        elif base_owner == UNCLAIMED and len(full) >= 4:
            missing = frozenset((a0, a1))
            for pendants in combinations(full, 4):
                copy = GCopy(base=(a0, a1), pendants=tuple(sorted(pendants)))
                key = (missing, copy.base, copy.pendants)
                if key not in seen:
                    seen.add(key)
                    out.append({"missing": missing, "copy": copy,
                                "base_present": False})
    return out


def max_ep1_over_bases_view(view: PairView):
    """Counting bound on P1's progress, per candidate base.

    For every pair X0X1 not owned by P2, count P1 edges X_iY whose partner
    Y X_{1-i} is not P2-owned, plus one if P1 owns X0X1 itself.  The count
    bounds e_P1 over every copy based at X0X1: a P2-free copy's cherry edges
    all have their partner inside the copy and hence not P2-owned.
    """
    p2 = view.p2
    bounds = {}

    def count_for(x0, x1):
        total = 0
        for (xi, xo) in ((x0, x1), (x1, x0)):
            for y in view.p1_adj.get(xi, ()):
                if y == xo:
                    continue
                if frozenset((y, xo)) not in p2:
                    total += 1
        if frozenset((x0, x1)) in view.p1:
            total += 1
        return total

    for x0, x1 in combinations(sorted(view.vertices()), 2):
        if frozenset((x0, x1)) in p2:
            continue
        bounds[(x0, x1)] = count_for(x0, x1)
    best = max(bounds.values(), default=0)
    return bounds, best


def exact_max_ep1_view(view: PairView) -> int:
    """Exact maximum of e_P1 over all embeddings in the view.

    For a base pair with no P2 edge, each eligible pendant contributes its
    number of P1 cherry edges; the best copy takes the four biggest.
    """
    verts = view.vertices()
    if len(verts) < 6:
        return 0
    p1_touched = sorted(view.p1_adj)
    free = [v for v in verts if v not in view.p1_adj and v not in view.p2_adj]
    # A base endpoint that is P1-free contributes nothing and blocks no less
    # than a fully free vertex, so free representatives cover those cases.
    candidates = p1_touched + free[:2]
    best = 0
    for x0, x1 in combinations(candidates, 2):
        pair = frozenset((x0, x1))
        if pair in view.p2:
            continue
        scores = []
        for w in verts:
            if w in (x0, x1):
                continue
            o0, o1 = view.owner(x0, w), view.owner(x1, w)
            if o0 == P2 or o1 == P2:
                continue
            scores.append((o0 == P1) + (o1 == P1))
        if len(scores) < 4:
            continue
        scores.sort(reverse=True)
        total = sum(scores[:4]) + (pair in view.p1)
        if total > best:
            best = total
    return best


def threats_in_view(view: PairView, player: int) -> list:
    return [(nc["missing"], nc["copy"]) for nc in near_copies(view, player)]


# ---------------------------------------------------------------------------
# Board-level surface
# ---------------------------------------------------------------------------

def find_g_copies(state: GameState, player: int, within_copy=None) -> list:
    assert state.kind == TWO_CLIQUES
    copies = (within_copy,) if within_copy else (1, 2)
    out = []
    for c in copies:
        out.extend(copies_in_view(copy_view(state, c), player))
    return out


def e_p1(state: GameState, copy: GCopy) -> int:
    return _e_player(state, copy, P1)


def e_p2(state: GameState, copy: GCopy) -> int:
    return _e_player(state, copy, P2)


def _e_player(state: GameState, copy: GCopy, player: int) -> int:
    other = P2 if player == P1 else P1
    count = 0
    for pair in copy.edges():
        e = graph_edge_v(*tuple(pair))
        o = state.owner(e)
        if o == other:
            return 0
        if o == player:
            count += 1
    return count


def max_ep1_over_bases(state: GameState, within_copy: int):
    return max_ep1_over_bases_view(copy_view(state, within_copy))


def threats(state: GameState, player: int) -> list:
    """Unclaimed edges whose claim would complete a target copy for player."""
    out = []
    if state.kind == TWO_CLIQUES:
        for c in (1, 2):
            for pair, copy in threats_in_view(copy_view(state, c), player):
                out.append((graph_edge_v(*tuple(pair)), copy))
        return out
    for (x, y), view in _busy_centre_views(state, player, minimum=8):
        for pair, inner in threats_in_view(view, player):
            u, v = tuple(pair)
            out.append((hyper_edge((u, v, x, y)),
                        GPrimeCopy(centres=(x, y), inner=inner)))
    return out


def _busy_centre_views(state: GameState, player: int, minimum: int):
    pair_counts = {}
    for e, o in state.owners.items():
        if o != player:
            continue
        for duo in combinations(sorted(e[1:]), 2):
            pair_counts[duo] = pair_counts.get(duo, 0) + 1
    for (x, y), cnt in sorted(pair_counts.items()):
        if cnt >= minimum:
            yield (x, y), xy_view(state, x, y)


def find_gprime_copies(state: GameState, player: int) -> list:
    """Fully-owned lifted copies, via per-centre-pair reduction."""
    assert state.kind == HYPER4
    out = []
    for (x, y), view in _busy_centre_views(state, player, minimum=9):
        for inner in copies_in_view(view, player):
            out.append(GPrimeCopy(centres=(x, y), inner=inner))
    return out
