"""Checkable predicates behind the drawing strategy.

A P2 edge is a *potential base* when P2 also owns a 4-edge book on it and one
endpoint (the special vertex) sits in no P1 triangle and in no P1 4-cycle
whose opposite chord P2 has left open.  The quick sufficient test
(``lemma3_check``) replaces the cycle search by counting *bad* edges and
looking for the five-edge double-triangle configuration; the endgame entry
test (``lemma2_preconditions``) combines it with the two counting conditions
the endgame needs.

All predicates run on 2-uniform views so they apply unchanged to clique
copies and to centre-pair projections of the 4-uniform board; triangle and
cycle searches only walk vertices of nonzero P1 degree, which is exact
because every edge of a violating configuration belongs to P1.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from .board import P1, P2, TWO_CLIQUES, UNCLAIMED, GameState, edge_vertices
from .views import PairView, copy_view

GOOD = "good"
BAD = "bad"


class LemmaPreconditionError(Exception):
    pass


@dataclass(frozen=True)
class PotentialBaseWitness:
    base: tuple
    special: object
    book: tuple


@dataclass(frozen=True)
class Refutation:
    base: tuple
    reasons: tuple  # ("triangle", X, T1, T2) | ("cycle", X, C1, C2, C3) | ("no-book",)


@dataclass(frozen=True)
class CheckResult:
    holds: bool
    reasons: tuple = ()


# ---------------------------------------------------------------------------
# Potential base
# ---------------------------------------------------------------------------

def _p1_triangles_at(view: PairView, x):
    """P1 triangles through x, as sorted vertex pairs."""
    adj = view.p1_adj
    nbrs = sorted(adj.get(x, ()))
    out = []
    for t1, t2 in combinations(nbrs, 2):
        if t2 in adj.get(t1, ()):
            out.append((t1, t2))
    return out


def _p1_bad_cycles_at(view: PairView, x, chord_blocker=P2):
    """P1 4-cycles x,C1,C2,C3 whose chord x-C2 is not blocked.

    ``chord_blocker`` says whose ownership of the chord disarms the cycle
    (P2 for the standard predicate; the special end-case analysis also uses
    the variant where anyone's claim disarms it).
    """
    adj = view.p1_adj
    out = []
    for c1, c3 in combinations(sorted(adj.get(x, ())), 2):
        for c2 in sorted(adj.get(c1, set()) & adj.get(c3, set())):
            if c2 == x:
                continue
            chord = view.owner(x, c2)
            blocked = (chord == P2) if chord_blocker == P2 else (chord != UNCLAIMED)
            if not blocked:
                out.append((c1, c2, c3))
    return out


def special_vertex_ok(view: PairView, x):
    """Conditions (i) and (ii) for x; returns (ok, reason-or-None)."""
    tris = _p1_triangles_at(view, x)
    if tris:
        t1, t2 = tris[0]
        return False, ("triangle", x, t1, t2)
    cycles = _p1_bad_cycles_at(view, x)
    if cycles:
        c1, c2, c3 = cycles[0]
        return False, ("cycle", x, c1, c2, c3)
    return True, None


def book_vertices(view: PairView, base) -> list:
    a0, a1 = base
    common = sorted(view.p2_adj.get(a0, set()) & view.p2_adj.get(a1, set()))
    return [v for v in common if v not in base]


def potential_base_on_view(view: PairView, base, special=None):
    """Witness or refutation for a base pair on a view."""
    a0, a1 = base
    book = book_vertices(view, base)
    reasons = []
    if len(book) < 2:
        reasons.append(("no-book",))
        return Refutation(base=tuple(base), reasons=tuple(reasons))
    candidates = (special,) if special is not None else (a0, a1)
    for x in candidates:
        ok, reason = special_vertex_ok(view, x)
        if ok:
            return PotentialBaseWitness(base=tuple(base), special=x,
                                        book=(book[0], book[1]))
        reasons.append(reason)
    return Refutation(base=tuple(base), reasons=tuple(reasons))


def is_potential_base(state: GameState, edge: tuple, special=None):
    """Board-level wrapper; the edge must be P2's."""
    if state.owner(edge) != P2:
        raise LemmaPreconditionError(
            f"potential base requires a P2 edge, got owner {state.owner(edge)}")
    if state.kind != TWO_CLIQUES or edge[0] != "g":
        raise LemmaPreconditionError("graph board expected")
    view = copy_view(state, edge[1])
    base = edge_vertices(edge)
    return potential_base_on_view(view, base, special=special)


# ---------------------------------------------------------------------------
# Good and bad edges
# ---------------------------------------------------------------------------

def classify_pair(view: PairView, base, pair) -> str:
    """Goodness of a P1 view-edge for a base, by the neighbour criterion."""
    a0, a1 = base
    x1, x2 = tuple(pair)
    if x1 in base or x2 in base:
        return BAD
    if not (view.owner(a0, x1) == P2 or view.owner(a0, x2) == P2):
        return BAD
    if not (view.owner(a1, x1) == P2 or view.owner(a1, x2) == P2):
        return BAD
    return GOOD


def classify_edge(state: GameState, base_edge: tuple, p1_edge: tuple) -> str:
    if state.owner(p1_edge) != P1:
        raise LemmaPreconditionError("p1_edge must be owned by P1")
    if state.owner(base_edge) != P2:
        raise LemmaPreconditionError("base edge must be owned by P2")
    if p1_edge[1] != base_edge[1]:
        return GOOD  # everything in the other clique copy is good
    view = copy_view(state, base_edge[1])
    return classify_pair(view, edge_vertices(base_edge),
                         edge_vertices(p1_edge))


def bad_pairs(view: PairView, base) -> list:
    return [p for p in sorted(view.p1, key=lambda p: tuple(sorted(p)))
            if classify_pair(view, base, p) == BAD]


# ---------------------------------------------------------------------------
# Double-triangle configuration
# ---------------------------------------------------------------------------

def has_two_delta(view: PairView, base):
    """{X1, X2} completing two P1 triangles over the base, or None."""
    a0, a1 = base
    adj = view.p1_adj
    common = sorted((adj.get(a0, set()) & adj.get(a1, set())) - {a0, a1})
    for x1, x2 in combinations(common, 2):
        if x2 in adj.get(x1, ()):
            return (x1, x2)
    return None


# ---------------------------------------------------------------------------
# Sufficient test and endgame entry conditions
# ---------------------------------------------------------------------------

def lemma3_check(view: PairView, base) -> CheckResult:
    """Bad edges <= 5, no double-triangle, and the book exists.

    When this holds, ``potential_base_on_view`` is guaranteed to find a
    witness (checked wholesale by the verifier's cross-check pass).
    """
    reasons = []
    bad = bad_pairs(view, base)
    if len(bad) > 5:
        reasons.append(("bad-count", len(bad)))
    two_delta = has_two_delta(view, base)
    if two_delta:
        reasons.append(("two-delta",) + two_delta)
    if len(book_vertices(view, base)) < 2:
        reasons.append(("no-book",))
    return CheckResult(holds=not reasons, reasons=tuple(reasons))


def lemma2_preconditions(state: GameState, witness: PotentialBaseWitness,
                         k1_copy: int, granted=(), conceded=()) -> CheckResult:
    """The three endgame entry conditions, checked on the current position.

    (a) P1 has at most six edges in the first-move copy; (b) no embedding in
    the other copy gives P1 more than five edges free of P2 -- decided by
    the counting bound first and by exact embedding search only when the
    bound is loose; (c) the recorded witness still stands.
    """
    from .patterns import exact_max_ep1_view, max_ep1_over_bases_view

    if state.kind != TWO_CLIQUES:
        raise LemmaPreconditionError("graph board expected")
    k2_copy = 2 if k1_copy == 1 else 1
    reasons = []

    k1_count = sum(1 for e, o in state.owners.items()
                   if o == P1 and e[1] == k1_copy)
    if k1_count > 6:
        reasons.append(("a", k1_count))

    view = copy_view(state, k2_copy, granted=granted, conceded=conceded)
    _, bound = max_ep1_over_bases_view(view)
    if bound > 5:
        exact = exact_max_ep1_view(view)
        if exact > 5:
            reasons.append(("b", exact))

    check = potential_base_on_view(view, witness.base,
                                   special=witness.special)
    if not isinstance(check, PotentialBaseWitness):
        reasons.append(("c",) + tuple(check.reasons))

    return CheckResult(holds=not reasons, reasons=tuple(reasons))


# ---------------------------------------------------------------------------
# Star decompositions and triangle budgets
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class StarBound:
    r: int
    bound: int
    triangles: int
    ok: bool


def star_triangle_bound(view: PairView, x, pairs_at_witness) -> StarBound:
    """Triangle budget at x after a star-plus-extras extension.

    P1's edges beyond ``pairs_at_witness`` split into a star from x to
    vertices untouched elsewhere, plus r extras; each new triangle at x needs
    an extra edge, so triangles(x) is bounded by the count at witness time
    plus r.  ``ok`` is False when the exact count exceeds the bound, i.e.
    the decomposition reasoning was misapplied.
    """
    witness_pairs = {frozenset(p) for p in pairs_at_witness}
    added = [p for p in view.p1 if p not in witness_pairs]
    witness_touched = {v for p in witness_pairs for v in p}
    star = []
    for p in added:
        if x not in p:
            continue
        (other,) = tuple(p - {x})
        elsewhere = any(other in q for q in added if q != p)
        if other not in witness_touched and not elsewhere:
            star.append(p)
    r = len(added) - len(star)

    baseline_view = PairView(view.verts, witness_pairs, view.p2)
    baseline = len(_p1_triangles_at(baseline_view, x))
    bound = baseline + r
    triangles = len(_p1_triangles_at(view, x))
    return StarBound(r=r, bound=bound, triangles=triangles,
                     ok=triangles <= bound)
