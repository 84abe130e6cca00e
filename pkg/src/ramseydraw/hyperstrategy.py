"""P2's four-stage drawing strategy on the complete 4-uniform board.

The board decomposes into centre-pair views: the hyperedges through two
fixed vertices X, Y form the *XY board*, a copy of the complete graph on the
remaining vertices.  The target's lift lives on exactly one such board, so
P2 plays the graph machinery through views:

  stage 1 -- a scripted opening that builds the five-edge pattern
             AB, BC, CA, CD, DA on a fresh XY board and makes AC a potential
             base with a special endpoint that P1 has touched at most twice
             off the board;
  stage 2 -- the star of threats from the non-special endpoint;
  stage 3 -- block the single near-copy through P1's first hyperedge, if one
             exists (claim its missing cherry edge and mirror, or claim its
             missing base);
  stage 4 -- the second star; P1's first non-answer completes P2's copy.

"Free vertex" always means free on the whole 4-uniform board, not merely on
the view; that keeps the degree accounting global.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from itertools import combinations

from .board import (P1, UNCLAIMED, BoardTooSmall, GameState,
                    edge_to_text, hyper_edge, lowest_free_vertex)
from .lemmas import special_vertex_ok
from .patterns import near_copies
from .strategy import MOVE, InternalInvariantViolation
from .views import PairView, xy_view

# Re-exported view type: the centre-pair projection used throughout.
XYBoardView = PairView


def board_intersection(centres1, centres2, n: int) -> int:
    """Exact number of hyperedges shared by two centre-pair boards."""
    p, q = set(centres1), set(centres2)
    if p == q:
        raise ValueError("centre pairs must differ")
    union = p | q
    count = 0
    for e in combinations(range(n), 4):
        if union <= set(e):
            count += 1
    return count


@dataclass
class HyperStrategyState:
    stage: int = 1
    step: int = 0
    labels: dict = field(default_factory=dict)  # T,U,V,W,X,Y,A,B,C,D + A0,A1
    specified: set = field(default_factory=set)
    stars: list = field(default_factory=list)
    pending_star: int = None
    star_k: int = 0
    block_case: str = None
    block_centres: tuple = None
    block_base: tuple = None
    done: bool = False
    finished_node: str = None

    def clone(self) -> "HyperStrategyState":
        out = replace(self)
        out.labels = dict(self.labels)
        out.specified = set(self.specified)
        out.stars = list(self.stars)
        return out


class _Ctx:
    def __init__(self, state, hs, event):
        self.state = state
        self.hs = hs
        self.event = event
        self.move = None
        self.move_label = None
        self.emitted = []

    def v(self, role):
        return self.hs.labels[role]

    def hedge(self, *roles):
        return hyper_edge(self.v(r) for r in roles)

    def xy(self, r1, r2):
        return hyper_edge((self.v("X"), self.v("Y"), self.v(r1), self.v(r2)))

    def p1_has(self, e) -> bool:
        return self.state.owner(e) == P1

    def claim(self, e, label=None):
        if self.state.owner(e) != UNCLAIMED:
            raise InternalInvariantViolation(
                f"strategy wants {edge_to_text(e)} but it is claimed")
        if self.move is not None:
            raise InternalInvariantViolation("two claims in one turn")
        self.move = e
        self.move_label = label or f"stage{self.hs.stage}"

    def fresh(self, role):
        v = lowest_free_vertex(self.state)
        self.hs.labels[role] = v
        return v

    def swap(self, r1, r2):
        lab = self.hs.labels
        lab[r1], lab[r2] = lab[r2], lab[r1]
        self.emitted.append(("swap", r1, r2))


# ---------------------------------------------------------------------------
# Stage 1: scripted opening
# ---------------------------------------------------------------------------

def hyper_open(state: GameState):
    """P2's first move after P1's opening hyperedge."""
    if len(state.history) != 1:
        raise InternalInvariantViolation("hyper_open expects one P1 action")
    hs = HyperStrategyState()
    if state.history[0] == ("stop",):
        pass  # no first hyperedge; T..W stay unbound
    else:
        first = state.history[0][1]
        for role, v in zip("TUVW", first[1:]):
            hs.labels[role] = v
        hs.specified.add(first)
    free = [v for v in range(state.n) if all(
        v not in e[1:] for e in state.owners)]
    if len(free) < 4:
        raise BoardTooSmall("stage 1 needs four fresh vertices")
    for role, v in zip("XYAB", free[:4]):
        hs.labels[role] = v
    move = hyper_edge(free[:4])
    hs.step = 1
    return move, hs


def _stage1(ctx: _Ctx):
    hs = ctx.hs
    if hs.step == 1:
        # Some vertex of P2's opening hyperedge misses P1's reply; call it X.
        if ctx.event[0] == MOVE:
            e2 = set(ctx.event[1][1:])
            four = [ctx.v(r) for r in "XYAB"]
            if ctx.v("X") in e2:
                outside = [v for v in four if v not in e2]
                newx = outside[0]
                rest = sorted(v for v in four if v != newx)
                for role, v in zip("XYAB", [newx] + rest):
                    hs.labels[role] = v
                ctx.emitted.append(("rebind", "X"))
        ctx.fresh("C")
        ctx.claim(ctx.xy("B", "C"))
        hs.step = 2
    elif hs.step == 2:
        # C was fresh, so P1 holds at most one of {X,Y,A,C}, {X,A,B,C}.
        if ctx.p1_has(ctx.hedge("X", "A", "Y", "C")):
            ctx.swap("Y", "B")
        ctx.claim(ctx.hedge("X", "A", "Y", "C"))
        hs.step = 3
    elif hs.step == 3:
        ctx.fresh("D")
        ctx.claim(ctx.xy("C", "D"))
        hs.step = 4
    elif hs.step == 4:
        # D was fresh, so P1 holds at most one of DA, DB on the view.
        if ctx.p1_has(ctx.xy("D", "A")):
            ctx.swap("A", "B")
        ctx.claim(ctx.xy("D", "A"))
        hs.step = 5
    elif hs.step == 5:
        _select_special(ctx)
        hs.stage = 2
        _star_rung(ctx)
    else:
        raise InternalInvariantViolation(f"bad stage-1 step {hs.step}")


def _select_special(ctx: _Ctx):
    """Pick the base endpoint with the pigeonhole guarantee.

    Among the valid special endpoints of AC, choose one with at most two P1
    hyperedges (anywhere on the board) containing it but not the other.
    """
    hs = ctx.hs
    view = current_view(ctx.state, hs)
    a, c = ctx.v("A"), ctx.v("C")
    valid = [z for z in (a, c) if special_vertex_ok(view, z)[0]]
    if not valid:
        raise InternalInvariantViolation(
            "neither endpoint of AC can be the special vertex")

    def off_count(z, other):
        return sum(1 for e, o in ctx.state.owners.items()
                   if o == P1 and z in e[1:] and other not in e[1:])

    scored = sorted((off_count(z, a if z == c else c), z) for z in valid)
    special = scored[0][1]
    hs.labels["A0"] = special
    hs.labels["A1"] = c if special == a else a
    ctx.emitted.append(("special-vertex", special, scored[0][0]))


def current_view(state: GameState, hs: HyperStrategyState) -> PairView:
    return xy_view(state, hs.labels["X"], hs.labels["Y"])


# ---------------------------------------------------------------------------
# Stages 2-4
# ---------------------------------------------------------------------------

def _star_rung(ctx: _Ctx):
    hs = ctx.hs
    f = lowest_free_vertex(ctx.state)
    hs.stars.append(f)
    hs.pending_star = f
    ctx.claim(hyper_edge((ctx.v("X"), ctx.v("Y"), ctx.v("A1"), f)))


def _star_step(ctx: _Ctx):
    hs = ctx.hs
    if hs.pending_star is None:
        _star_rung(ctx)
        return
    answer = hyper_edge(
        (ctx.v("X"), ctx.v("Y"), ctx.v("A0"), hs.pending_star))
    if ctx.state.owner(answer) == P1:
        _star_rung(ctx)
        return
    ctx.claim(answer)
    hs.pending_star = None
    if hs.stage == 2:
        hs.star_k = len(hs.stars)
        hs.stage = 3
        hs.step = 0
    else:
        hs.done = True
        hs.finished_node = "stage4"
        ctx.emitted.append(("complete",))


def _stage3(ctx: _Ctx):
    """Block-or-skip on the near-copies through P1's first hyperedge."""
    hs = ctx.hs
    if hs.step == 0:
        found = _near_copy_through_first(ctx)
        if found is None:
            hs.stage = 4
            ctx.emitted.append(("block", "III"))
            _star_step(ctx)
            return
        centres, entry = found
        if entry["base_present"]:
            base = entry["copy"].base
            missing = entry["missing"]
            c0 = next(v for v in base if v in missing)
            c1 = base[0] if base[1] == c0 else base[1]
            hs.block_case = "I"
            hs.block_centres = centres
            hs.block_base = (c0, c1)
            hs.step = 1
            ctx.emitted.append(("block", "I"))
            ctx.claim(hyper_edge(centres + tuple(missing)),
                      label="stage3:block")
        else:
            hs.block_case = "II"
            hs.step = 2
            ctx.emitted.append(("block", "II"))
            ctx.claim(hyper_edge(centres + tuple(entry["missing"])),
                      label="stage3:block")
        return
    if hs.step == 2:
        hs.stage = 4
        _star_step(ctx)
        return
    # step 1: mirror loop on the blocked centre board.
    if _try_mirror(ctx):
        return
    hs.stage = 4
    _star_step(ctx)


def _near_copy_through_first(ctx: _Ctx):
    hs = ctx.hs
    if "T" not in hs.labels:
        return None
    tuvw = tuple(hs.labels[r] for r in "TUVW")
    results = []
    for centres in combinations(sorted(tuvw), 2):
        rest = frozenset(v for v in tuvw if v not in centres)
        view = xy_view(ctx.state, centres[0], centres[1])
        for entry in near_copies(view, P1):
            copy_pairs = set(entry["copy"].edges())
            if rest in copy_pairs and ctx.state.owner(
                    hyper_edge(centres + tuple(rest))) == P1:
                results.append((centres, entry))
    if not results:
        return None
    results.sort(key=lambda item: (item[0], tuple(sorted(item[1]["missing"])),
                                   not item[1]["base_present"]))
    with_base = [r for r in results if r[1]["base_present"]]
    return with_base[0] if with_base else results[0]


def _try_mirror(ctx: _Ctx) -> bool:
    hs = ctx.hs
    if ctx.event[0] != MOVE:
        return False
    e = ctx.event[1]
    centres = set(hs.block_centres)
    if not centres <= set(e[1:]):
        return False
    pair = [v for v in e[1:] if v not in centres]
    c0, c1 = hs.block_base
    ends = set(pair)
    if len(ends & {c0, c1}) != 1:
        return False
    d = (ends - {c0, c1}).pop()
    other = c1 if c0 in ends else c0
    mirror = hyper_edge(tuple(centres) + (other, d))
    if ctx.state.owner(mirror) != UNCLAIMED:
        raise InternalInvariantViolation(
            f"mirror hyperedge {edge_to_text(mirror)} already claimed")
    ctx.emitted.append(("mirror", edge_to_text(mirror)))
    ctx.claim(mirror, label="stage3:mirror")
    return True


# ---------------------------------------------------------------------------
# Public surface
# ---------------------------------------------------------------------------

def respond(state: GameState, hs: HyperStrategyState, event):
    hs = hs.clone()
    if hs.done:
        return None, hs, []
    ctx = _Ctx(state, hs, event)
    guard = 0
    while ctx.move is None and not hs.done:
        guard += 1
        if guard > 60:
            raise InternalInvariantViolation("hyper automaton failed to move")
        if hs.stage == 1:
            _stage1(ctx)
        elif hs.stage in (2, 4):
            _star_step(ctx)
        elif hs.stage == 3:
            _stage3(ctx)
    if ctx.move is not None:
        ctx.emitted.insert(0, ("label", ctx.move_label))
    return ctx.move, hs, ctx.emitted


def hyper_open_and_stage1(state: GameState, hs: HyperStrategyState, event):
    """One scripted stage-1 turn (use ``hyper_open`` for the very first)."""
    if hs.stage != 1:
        raise InternalInvariantViolation(f"stage is {hs.stage}, not 1")
    return respond(state, hs, event)


def hyper_stage2_star(state: GameState, hs: HyperStrategyState, event):
    if hs.stage != 2:
        raise InternalInvariantViolation(f"stage is {hs.stage}, not 2")
    return respond(state, hs, event)


def hyper_stage3_cases(state: GameState, hs: HyperStrategyState, event):
    if hs.stage != 3:
        raise InternalInvariantViolation(f"stage is {hs.stage}, not 3")
    return respond(state, hs, event)


def hyper_stage4_finish(state: GameState, hs: HyperStrategyState, event):
    if hs.stage != 4:
        raise InternalInvariantViolation(f"stage is {hs.stage}, not 4")
    return respond(state, hs, event)


def stage_label(hs: HyperStrategyState) -> str:
    if hs.done:
        return "done"
    if hs.stage == 3 and hs.block_case:
        return f"stage3:{hs.block_case}"
    return f"stage{hs.stage}"


def completed_copy_hyperedges(hs: HyperStrategyState):
    if not hs.done or hs.finished_node != "stage4":
        return None
    x, y = hs.labels["X"], hs.labels["Y"]
    a0, a1 = hs.labels["A0"], hs.labels["A1"]
    b, d = hs.labels["B"], hs.labels["D"]
    f_k = hs.stars[hs.star_k - 1]
    f_l = hs.stars[-1]
    pendants = (b, d, f_k, f_l)
    pairs = [(a0, a1)] + [(a0, p) for p in pendants] + \
        [(a1, p) for p in pendants]
    return [hyper_edge((x, y, u, v)) for u, v in pairs]
