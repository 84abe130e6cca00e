"""P2's drawing strategy for the graph game on two disjoint cliques.

The strategy is a deterministic automaton.  After P2's opening reply it
descends a binary case tree: each split tests whether P1's cumulative edges
contain a probe edge (successor 1) or leave it free for P2 (successor 2),
binding any "without loss of generality" choice by testing the options in a
fixed order and relabeling roles when the second one fires.  Leaves declare a
potential base and hand over to the endgame:

  * stage 1 -- a star of threats from the non-special base endpoint to fresh
    free vertices, until P1 fails to answer; P2 then completes that cherry;
  * stage 2 -- block P1's unique near-copy in his own clique if one exists
    (claim its missing cherry edge and mirror further fresh cherries, or
    claim its missing base), else skip;
  * stage 3 -- a second star; P1's first non-answer lets P2 finish his copy.

Two deep leaves need bespoke handling: a three-rung ladder of threats whose
failure modes are closed out by a final star either from the ladder apex or
from the base endpoint, with some of P2's ladder edges conceded (he promises
not to use them) and matching edges granted to P1 for all worst-case
accounting.

Everything P1 plays that no probe asks about is absorbed as an *additional*
edge: probes always test the real edge set (plus granted, minus conceded),
never a summary count.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace

from .board import (P1, P2, TWO_CLIQUES, UNCLAIMED, GameState,
                    edge_to_text, edge_vertices, graph_edge_v,
                    lowest_free_vertex)
from .lemmas import PotentialBaseWitness, is_potential_base
from .patterns import near_copies
from .views import copy_view


class InternalInvariantViolation(Exception):
    """The automaton and the board disagree; always a bug or a finding."""


MOVE = "move"
STOP = "stop"


@dataclass
class StrategyState:
    """P2's automaton state.  Copy before mutating (see ``clone``)."""

    k1: int = 0
    k2: int = 0
    phase: str = "case"          # case | endgame | special1 | special2 | done
    node: str = "root"
    step: int = 0
    labels: dict = field(default_factory=dict)   # role -> K^2 vertex
    specified: set = field(default_factory=set)  # P1 edges a probe consumed
    ledger: tuple = None                         # latest (k, l)
    ledger_log: list = field(default_factory=list)
    # Endgame bookkeeping.
    witness: PotentialBaseWitness = None
    a0: tuple = None
    a1: tuple = None
    end_entry_node: str = None
    stars: list = field(default_factory=list)    # F_i vertices in order
    pending_star: tuple = None
    star_k: int = 0
    block_case: str = None
    block_base: tuple = None                     # (c0, c1) in K^1
    # Special end-case bookkeeping.
    special_entry_edges: frozenset = None        # P1 pairs at special entry
    ls: list = field(default_factory=list)       # L_i vertices in order
    pending_l: tuple = None
    granted: frozenset = frozenset()
    conceded: frozenset = frozenset()
    reserved: set = field(default_factory=set)

    def clone(self) -> "StrategyState":
        out = replace(self)
        out.labels = dict(self.labels)
        out.specified = set(self.specified)
        out.ledger_log = list(self.ledger_log)
        out.stars = list(self.stars)
        out.ls = list(self.ls)
        out.reserved = set(self.reserved)
        return out

    def additional_count(self, state: GameState) -> int:
        p1 = {e for e, o in state.owners.items() if o == P1} | set(self.granted)
        return len(p1 - self.specified)


# ---------------------------------------------------------------------------
# Context threaded through the node handlers
# ---------------------------------------------------------------------------

class _Ctx:
    def __init__(self, state: GameState, ss: StrategyState, event):
        self.state = state
        self.ss = ss
        self.event = event
        self.move = None
        self.move_label = None
        self.emitted = []

    # -- role helpers ------------------------------------------------------

    def v(self, role):
        return self.ss.labels[role]

    def edge(self, r1, r2):
        return graph_edge_v(self.v(r1), self.v(r2))

    def p1_has(self, r1, r2) -> bool:
        e = self.edge(r1, r2)
        return self.state.owner(e) == P1 or e in self.ss.granted

    def mark_specified(self, r1, r2):
        self.ss.specified.add(self.edge(r1, r2))

    def swap(self, r1, r2):
        lab = self.ss.labels
        lab[r1], lab[r2] = lab[r2], lab[r1]
        self.emitted.append(("swap", r1, r2))

    # -- moves -------------------------------------------------------------

    def claim(self, r1, r2):
        self._claim_edge(self.edge(r1, r2))

    def _claim_edge(self, e, label=None):
        if self.state.owner(e) != UNCLAIMED:
            raise InternalInvariantViolation(
                f"strategy wants {edge_to_text(e)} but it is claimed")
        if self.move is not None:
            raise InternalInvariantViolation("two claims in one turn")
        self.move = e
        if label is None:
            ss = self.ss
            if ss.phase == "case":
                label = ss.node
            elif ss.phase == "endgame":
                label = f"endgame:{ss.node}"
            else:
                label = ss.phase
        self.move_label = label

    def claim_fresh(self, r_from, r_new):
        v = lowest_free_vertex(self.state, self.ss.k2,
                               excluded=self.ss.reserved)
        self.ss.labels[r_new] = v
        self._claim_edge(graph_edge_v(self.v(r_from), v))
        return v

    def claim_first_free(self, first, second, swap):
        """Claim ``first`` if unclaimed, else swap roles and claim it then.

        At most one of the two options can have been taken (their shared
        endpoint was fresh one ply ago), so this always succeeds.
        """
        if self.state.owner(self.edge(*first)) == UNCLAIMED:
            self.claim(*first)
            return
        if self.state.owner(self.edge(*second)) != UNCLAIMED:
            raise InternalInvariantViolation(
                f"both {first} and {second} already claimed")
        self.swap(*swap)
        self.claim(*first)

    # -- control flow ------------------------------------------------------

    def goto(self, node):
        self.ss.node = node
        self.ss.step = 0
        self.emitted.append(("case", node))

    def record_ledger(self, l):
        p1_total = sum(1 for o in self.state.owners.values() if o == P1)
        p1_total += len(set(self.ss.granted))
        k = p1_total - 1
        self.ss.ledger = (k, l)
        self.ss.ledger_log.append((self.ss.node, k, l))
        self.emitted.append(("ledger", self.ss.node, k, l))

    def enter_endgame(self, r1, r2):
        e = self.edge(r1, r2)
        wit = is_potential_base(self.state, e)
        if not isinstance(wit, PotentialBaseWitness):
            raise InternalInvariantViolation(
                f"declared base {edge_to_text(e)} is not a potential base: "
                f"{wit.reasons}")
        self.ss.witness = wit
        self.ss.a0 = wit.special
        self.ss.a1 = wit.base[0] if wit.base[1] == wit.special else wit.base[1]
        self.ss.end_entry_node = self.ss.node
        self.ss.phase = "endgame"
        self.ss.node = "star1"
        self.ss.step = 0
        self.emitted.append(("endgame", self.ss.end_entry_node,
                             edge_to_text(e), wit.special))


# ---------------------------------------------------------------------------
# Case-tree handlers
# ---------------------------------------------------------------------------

def _h_root(ctx: _Ctx):
    ss = ctx.ss
    if ctx.event[0] == STOP:
        ctx.goto("A")
        return
    e = ctx.event[1]
    ss.specified.add(e)
    if e[1] == ss.k1:
        ctx.goto("A")
        return
    u, w = edge_vertices(e)
    a, b = ctx.v("A"), ctx.v("B")
    if a in (u, w) or b in (u, w):
        if b not in (u, w):
            ctx.swap("A", "B")
        ctx.goto("A")
        return
    ss.labels["C"], ss.labels["D"] = sorted((u, w))
    ctx.goto("B")


def _h_a(ctx):
    if ctx.ss.step == 0:
        ctx.claim_fresh("B", "C")
        ctx.ss.step = 1
        return
    if ctx.p1_has("A", "C"):
        ctx.mark_specified("A", "C")
        ctx.goto("A.1")
    else:
        ctx.goto("A.2")


def _h_a1(ctx):
    if ctx.ss.step == 0:
        ctx.claim_fresh("B", "D")
        ctx.ss.step = 1
    elif ctx.ss.step == 1:
        ctx.claim_first_free(("D", "A"), ("D", "C"), swap=("A", "C"))
        ctx.ss.step = 2
    else:
        ctx.record_ledger(1)
        if ctx.p1_has("D", "C"):
            ctx.mark_specified("D", "C")
            ctx.goto("A.1.1")
        else:
            ctx.goto("A.1.2")


def _h_a11(ctx):
    if ctx.ss.step == 0:
        ctx.claim_fresh("B", "E")
        ctx.ss.step = 1
    elif ctx.ss.step == 1:
        ctx.claim_first_free(("E", "D"), ("E", "A"), swap=("A", "D"))
        ctx.ss.step = 2
    else:
        ctx.enter_endgame("B", "D")


def _h_a12(ctx):
    if ctx.ss.step == 0:
        ctx.claim("D", "C")
        ctx.ss.step = 1
    else:
        ctx.enter_endgame("B", "D")


def _h_a2(ctx):
    if ctx.ss.step == 0:
        ctx.claim("A", "C")
        ctx.ss.step = 1
    elif ctx.ss.step == 1:
        ctx.claim_fresh("C", "D")
        ctx.ss.step = 2
    else:
        if ctx.p1_has("A", "D"):
            ctx.mark_specified("A", "D")
            ctx.goto("A.2.1")
        else:
            ctx.goto("A.2.2")


def _h_a21(ctx):
    if ctx.ss.step == 0:
        # D was P1-free one ply ago, so P1 cannot also hold BD.
        ctx.claim("B", "D")
        ctx.ss.step = 1
    else:
        ctx.enter_endgame("B", "C")


def _h_a22(ctx):
    if ctx.ss.step == 0:
        ctx.claim("A", "D")
        ctx.ss.step = 1
    else:
        ctx.enter_endgame("A", "C")


def _h_b(ctx):
    if ctx.ss.step == 0:
        ctx.claim_fresh("B", "E")
        ctx.ss.step = 1
        return
    if ctx.p1_has("A", "E"):
        ctx.mark_specified("A", "E")
        ctx.goto("B.1")
    else:
        ctx.goto("B.2")


def _h_b1(ctx):
    if ctx.ss.step == 0:
        ctx.claim("C", "E")
        ctx.ss.step = 1
        return
    if ctx.p1_has("B", "C"):
        ctx.mark_specified("B", "C")
        ctx.goto("B.1.1")
    else:
        ctx.goto("B.1.2")


def _h_b11(ctx):
    if ctx.ss.step == 0:
        ctx.claim_fresh("B", "F")
        ctx.ss.step = 1
        return
    ctx.record_ledger(1)
    if ctx.p1_has("E", "F"):
        ctx.mark_specified("E", "F")
        ctx.goto("B.1.1.1")
    else:
        ctx.goto("B.1.1.2")


def _h_b111(ctx):
    if ctx.ss.step == 0:
        ctx.claim("A", "F")
        ctx.ss.step = 1
        return
    ctx.record_ledger(2)
    if ctx.p1_has("B", "D"):
        ctx.mark_specified("B", "D")
        ctx.goto("B.1.1.1.1")
    else:
        ctx.goto("B.1.1.1.2")


def _h_b1111(ctx):
    if ctx.ss.step == 0:
        ctx.claim_fresh("F", "I")
        ctx.ss.step = 1
        return
    if ctx.p1_has("A", "I"):
        ctx.mark_specified("A", "I")
        ctx.goto("B.1.1.1.1.1")
    else:
        ctx.goto("B.1.1.1.1.2")


def _h_b11111(ctx):
    if ctx.ss.step == 0:
        ctx.claim("B", "I")
        ctx.ss.step = 1
    else:
        ctx.enter_endgame("B", "F")


def _h_b11112(ctx):
    if ctx.ss.step == 0:
        ctx.claim("A", "I")
        ctx.ss.step = 1
    else:
        ctx.enter_endgame("A", "F")


def _h_b1112(ctx):
    # No move of its own: picks a side on the same turn.
    if ctx.p1_has("A", "D"):
        ctx.mark_specified("A", "D")
        ctx.goto("B.1.1.1.2.1")
    elif ctx.p1_has("D", "F"):
        ctx.mark_specified("D", "F")
        ctx.swap("A", "F")
        ctx.goto("B.1.1.1.2.1")
    else:
        ctx.goto("B.1.1.1.2.2")


def _h_b11121(ctx):
    if ctx.ss.step == 0:
        ctx.claim_fresh("F", "I")
        ctx.ss.step = 1
        return
    if ctx.p1_has("B", "I"):
        ctx.mark_specified("B", "I")
        ctx.goto("B.1.1.1.2.1.1")
    else:
        ctx.goto("B.1.1.1.2.1.2")


def _h_b111211(ctx):
    if ctx.ss.step == 0:
        ctx.claim("A", "I")
        ctx.ss.step = 1
    else:
        ctx.enter_endgame("A", "F")


def _h_b111212(ctx):
    if ctx.ss.step == 0:
        ctx.claim("B", "I")
        ctx.ss.step = 1
    else:
        ctx.enter_endgame("B", "F")


def _h_b11122(ctx):
    if ctx.ss.step == 0:
        ctx.claim("B", "D")
        ctx.ss.step = 1
    elif ctx.ss.step == 1:
        ctx.claim_first_free(("A", "D"), ("D", "F"), swap=("A", "F"))
        ctx.ss.step = 2
    else:
        ctx.enter_endgame("A", "B")


def _h_b112(ctx):
    if ctx.ss.step == 0:
        ctx.claim("E", "F")
        ctx.ss.step = 1
        return
    if ctx.p1_has("C", "F"):
        ctx.mark_specified("C", "F")
        ctx.goto("B.1.1.2.1")
    else:
        ctx.goto("B.1.1.2.2")


def _h_b1121(ctx):
    if ctx.p1_has("A", "F"):
        ctx.mark_specified("A", "F")
        ctx.goto("B.1.1.2.1.1")
    else:
        ctx.goto("B.1.1.2.1.2")


def _h_b11211(ctx):
    if ctx.ss.step == 0:
        ctx.claim_fresh("E", "I")
        ctx.ss.step = 1
        return
    ctx.record_ledger(2)
    if ctx.p1_has("B", "I"):
        ctx.mark_specified("B", "I")
        ctx.goto("B.1.1.2.1.1.1")
    else:
        ctx.goto("B.1.1.2.1.1.2")


def _h_b112111(ctx):
    if ctx.ss.step == 0:
        ctx.claim("F", "I")
        ctx.ss.step = 1
    else:
        ctx.enter_endgame("E", "F")


def _h_b112112(ctx):
    if ctx.ss.step == 0:
        ctx.claim("B", "I")
        ctx.ss.step = 1
    else:
        ctx.enter_endgame("B", "E")


def _h_b11212(ctx):
    if ctx.ss.step == 0:
        ctx.claim("A", "F")
        ctx.ss.step = 1
        return
    wit = is_potential_base(ctx.state, ctx.edge("B", "F"))
    if isinstance(wit, PotentialBaseWitness):
        ctx.goto("B.1.1.2.1.2.2")
    else:
        ctx.goto("B.1.1.2.1.2.1")


def _h_b112122(ctx):
    ctx.enter_endgame("B", "F")


def _h_b112121(ctx):
    """Three-rung threat ladder ahead of the special end-cases."""
    ss = ctx.ss
    if ss.step == 0:
        ctx.claim_fresh("F", "I")
        ss.step = 1
    elif ss.step == 1:
        if ctx.p1_has("B", "I"):
            ctx.mark_specified("B", "I")
            ctx.claim_fresh("F", "J")
            ss.step = 2
        else:
            ctx.claim("B", "I")
            _enter_special2(ctx, declined=1)
    elif ss.step == 2:
        if ctx.p1_has("B", "J"):
            ctx.mark_specified("B", "J")
            ctx.claim_fresh("F", "K")
            ss.step = 3
        else:
            ctx.claim("B", "J")
            _enter_special2(ctx, declined=2)
    elif ss.step == 3:
        if ctx.p1_has("B", "K"):
            ctx.mark_specified("B", "K")
            ctx.claim("E", "I")
            ss.step = 4
        else:
            ctx.claim("B", "K")
            _enter_special2(ctx, declined=3)
    else:
        ctx.claim_first_free(("E", "J"), ("E", "K"), swap=("J", "K"))
        ss.phase = "special1"
        ss.step = 0
        ss.special_entry_edges = _p1_effective(ctx.state, ss)
        ctx.emitted.append(("special", 1))


def _enter_special2(ctx: _Ctx, declined: int):
    """Normalise a ladder decline into the conceded/granted picture.

    The declined rung's vertex is renamed K (P2 holds both its edges);
    F-edges of answered rungs are conceded, and P1 is granted the B-edges of
    both earlier rungs, binding fresh virtual vertices for rungs that never
    happened.
    """
    ss = ctx.ss
    roles = ["I", "J", "K"]
    declined_role = roles[declined - 1]
    if declined_role != "K":
        ss.labels["K"] = ss.labels.pop(declined_role)
    conceded = set()
    for role in roles[:declined - 1]:
        conceded.add(ctx.edge("F", role))
    for role in ("I", "J"):
        if role not in ss.labels:
            v = lowest_free_vertex(ctx.state, ss.k2, excluded=ss.reserved)
            ss.labels[role] = v
            ss.reserved.add(v)
    granted = {ctx.edge("B", "I"), ctx.edge("B", "J")}
    ss.conceded = frozenset(ss.conceded | conceded)
    ss.granted = frozenset(ss.granted | granted)
    ss.phase = "special2"
    ss.step = 0
    ss.special_entry_edges = _p1_effective(ctx.state, ss)
    ctx.emitted.append(("special", 2))


def _h_b1122(ctx):
    if ctx.ss.step == 0:
        ctx.claim("C", "F")
        ctx.ss.step = 1
    else:
        ctx.enter_endgame("E", "F")


def _h_b12(ctx):
    if ctx.ss.step == 0:
        ctx.claim("B", "C")
        ctx.ss.step = 1
        return
    if ctx.p1_has("A", "C"):
        ctx.mark_specified("A", "C")
        ctx.goto("B.1.2.1")
    else:
        ctx.goto("B.1.2.2")


def _h_b121(ctx):
    if ctx.p1_has("D", "E"):
        ctx.mark_specified("D", "E")
        ctx.goto("B.1.2.1.1")
    else:
        ctx.goto("B.1.2.1.2")


def _h_b1211(ctx):
    if ctx.ss.step == 0:
        ctx.claim("A", "D")
        ctx.ss.step = 1
    elif ctx.ss.step == 1:
        ctx.claim_fresh("B", "F")
        ctx.ss.step = 2
    else:
        ctx.record_ledger(2)
        if ctx.p1_has("E", "F"):
            ctx.mark_specified("E", "F")
            ctx.goto("B.1.2.1.1.1")
        else:
            ctx.goto("B.1.2.1.1.2")


def _h_b12111(ctx):
    if ctx.ss.step == 0:
        ctx.claim("C", "F")
        ctx.ss.step = 1
    else:
        ctx.enter_endgame("B", "C")


def _h_b12112(ctx):
    if ctx.ss.step == 0:
        ctx.claim("E", "F")
        ctx.ss.step = 1
    else:
        ctx.enter_endgame("B", "E")


def _h_b1212(ctx):
    if ctx.ss.step == 0:
        ctx.claim("D", "E")
        ctx.ss.step = 1
        return
    ctx.record_ledger(1)
    if ctx.p1_has("B", "D"):
        ctx.mark_specified("B", "D")
        ctx.goto("B.1.2.1.2.1")
    else:
        ctx.goto("B.1.2.1.2.2")


def _h_b12121(ctx):
    if ctx.ss.step == 0:
        ctx.claim_fresh("B", "F")
        ctx.ss.step = 1
        return
    ctx.record_ledger(2)
    if ctx.p1_has("E", "F"):
        ctx.mark_specified("E", "F")
        ctx.goto("B.1.2.1.2.1.1")
    else:
        ctx.goto("B.1.2.1.2.1.2")


def _h_b121211(ctx):
    if ctx.ss.step == 0:
        ctx.claim("C", "F")
        ctx.ss.step = 1
    else:
        ctx.enter_endgame("B", "C")


def _h_b121212(ctx):
    if ctx.ss.step == 0:
        ctx.claim("E", "F")
        ctx.ss.step = 1
    else:
        ctx.enter_endgame("B", "E")


def _h_b12122(ctx):
    if ctx.ss.step == 0:
        ctx.claim("B", "D")
        ctx.ss.step = 1
    else:
        ctx.enter_endgame("B", "E")


def _h_b122(ctx):
    if ctx.ss.step == 0:
        ctx.claim("A", "C")
        ctx.ss.step = 1
    else:
        ctx.enter_endgame("B", "C")


def _h_b2(ctx):
    from .board import degree
    ss = ctx.ss
    if ss.step == 0:
        ctx.claim("A", "E")
        ss.step = 1
    elif ss.step == 1:
        for role in ("B", "A", "E"):
            if degree(ctx.state, P1, ctx.v(role)) == 0:
                if role != "B":
                    ctx.swap("B", role)
                break
        else:
            raise InternalInvariantViolation(
                "no P1-free vertex among A, B, E")
        ctx.claim_fresh("B", "F")
        ss.step = 2
    else:
        if ctx.p1_has("E", "F"):
            ctx.mark_specified("E", "F")
            ctx.goto("B.2.1")
        elif ctx.p1_has("A", "F"):
            ctx.mark_specified("A", "F")
            ctx.swap("A", "E")
            ctx.goto("B.2.1")
        else:
            ctx.goto("B.2.2")


def _h_b21(ctx):
    if ctx.ss.step == 0:
        # F was P1-free before P1's last move, so AF is still open.
        ctx.claim("A", "F")
        ctx.ss.step = 1
    else:
        ctx.enter_endgame("A", "B")


def _h_b22(ctx):
    from .board import degree
    if ctx.ss.step == 0:
        if degree(ctx.state, P1, ctx.v("A")) > 1:
            ctx.swap("A", "E")
        if degree(ctx.state, P1, ctx.v("A")) > 1:
            raise InternalInvariantViolation("both A and E have P1-degree > 1")
        ctx.claim("A", "F")
        ctx.ss.step = 1
    else:
        ctx.enter_endgame("A", "B")


CASE_HANDLERS = {
    "root": _h_root,
    "A": _h_a, "A.1": _h_a1, "A.1.1": _h_a11, "A.1.2": _h_a12,
    "A.2": _h_a2, "A.2.1": _h_a21, "A.2.2": _h_a22,
    "B": _h_b, "B.1": _h_b1, "B.1.1": _h_b11,
    "B.1.1.1": _h_b111, "B.1.1.1.1": _h_b1111,
    "B.1.1.1.1.1": _h_b11111, "B.1.1.1.1.2": _h_b11112,
    "B.1.1.1.2": _h_b1112, "B.1.1.1.2.1": _h_b11121,
    "B.1.1.1.2.1.1": _h_b111211, "B.1.1.1.2.1.2": _h_b111212,
    "B.1.1.1.2.2": _h_b11122,
    "B.1.1.2": _h_b112, "B.1.1.2.1": _h_b1121,
    "B.1.1.2.1.1": _h_b11211,
    "B.1.1.2.1.1.1": _h_b112111, "B.1.1.2.1.1.2": _h_b112112,
    "B.1.1.2.1.2": _h_b11212,
    "B.1.1.2.1.2.1": _h_b112121, "B.1.1.2.1.2.2": _h_b112122,
    "B.1.1.2.2": _h_b1122,
    "B.1.2": _h_b12, "B.1.2.1": _h_b121,
    "B.1.2.1.1": _h_b1211,
    "B.1.2.1.1.1": _h_b12111, "B.1.2.1.1.2": _h_b12112,
    "B.1.2.1.2": _h_b1212, "B.1.2.1.2.1": _h_b12121,
    "B.1.2.1.2.1.1": _h_b121211, "B.1.2.1.2.1.2": _h_b121212,
    "B.1.2.1.2.2": _h_b12122,
    "B.1.2.2": _h_b122,
    "B.2": _h_b2, "B.2.1": _h_b21, "B.2.2": _h_b22,
}

# Marked split-cases and their lost-edge counts, straight off the case tree.
MARKED_SPLIT_CASES = {
    "A.1": 1, "B.1.1": 1, "B.1.2.1.2": 1,
    "B.1.1.1": 2, "B.1.1.2.1.1": 2, "B.1.2.1.1": 2, "B.1.2.1.2.1": 2,
}

END_CASES = {
    "A.1.1": ("B", "D"), "A.1.2": ("B", "D"),
    "A.2.1": ("B", "C"), "A.2.2": ("A", "C"),
    "B.1.1.1.1.1": ("B", "F"), "B.1.1.1.1.2": ("A", "F"),
    "B.1.1.1.2.1.1": ("A", "F"), "B.1.1.1.2.1.2": ("B", "F"),
    "B.1.1.1.2.2": ("A", "B"),
    "B.1.1.2.1.1.1": ("E", "F"), "B.1.1.2.1.1.2": ("B", "E"),
    "B.1.1.2.1.2.2": ("B", "F"), "B.1.1.2.2": ("E", "F"),
    "B.1.2.1.1.1": ("B", "C"), "B.1.2.1.1.2": ("B", "E"),
    "B.1.2.1.2.1.1": ("B", "C"), "B.1.2.1.2.1.2": ("B", "E"),
    "B.1.2.1.2.2": ("B", "E"),
    "B.1.2.2": ("B", "C"),
    "B.2.1": ("A", "B"), "B.2.2": ("A", "B"),
}

SPECIAL_END_CASES = ("B.1.1.2.1.2.1.1", "B.1.1.2.1.2.1.2")


# ---------------------------------------------------------------------------
# Endgame and special end-cases
# ---------------------------------------------------------------------------

def _p1_effective(state: GameState, ss: StrategyState) -> frozenset:
    out = {e for e, o in state.owners.items() if o == P1}
    out.update(ss.granted)
    return frozenset(out)


def p2_effective(state: GameState, ss: StrategyState) -> frozenset:
    out = {e for e, o in state.owners.items() if o == P2}
    out -= set(ss.conceded)
    return frozenset(out)


def _claim_star(ctx: _Ctx, from_v):
    ss = ctx.ss
    f = lowest_free_vertex(ctx.state, ss.k2, excluded=ss.reserved)
    ss.stars.append(f)
    ss.pending_star = f
    ctx._claim_edge(graph_edge_v(from_v, f))


def _endgame_step(ctx: _Ctx):
    ss = ctx.ss
    if ss.node in ("star1", "star2"):
        if ss.pending_star is not None:
            answer = graph_edge_v(ss.a0, ss.pending_star)
            if ctx.state.owner(answer) == P1:
                _claim_star(ctx, ss.a1)
                return
            ctx._claim_edge(answer)
            ss.pending_star = None
            if ss.node == "star1":
                ss.star_k = len(ss.stars)
                ss.node = "block"
            else:
                _finish(ctx)
            return
        _claim_star(ctx, ss.a1)
        return

    if ss.node == "block":
        _block_check(ctx)
        return

    if ss.node == "mirror":
        mirrored = _try_mirror(ctx)
        if mirrored:
            return
        ss.node = "star2"
        _endgame_step(ctx)
        return

    if ss.node == "star2-pending":
        ss.node = "star2"
        _endgame_step(ctx)
        return

    raise InternalInvariantViolation(f"unknown endgame node {ss.node}")


def _block_check(ctx: _Ctx):
    """Cases at the start of the blocking stage, on P1's own clique."""
    ss = ctx.ss
    view = copy_view(ctx.state, ss.k1)
    candidates = near_copies(view, P1)
    with_base = [c for c in candidates if c["base_present"]]
    without = [c for c in candidates if not c["base_present"]]
    if with_base:
        c = min(with_base, key=lambda c: tuple(sorted(c["missing"])))
        base = c["copy"].base
        missing = c["missing"]
        c0 = next(v for v in base if v in missing)
        c1 = base[0] if base[1] == c0 else base[1]
        ss.block_base = (c0, c1)
        ss.block_case = "I"
        ss.node = "mirror"
        ctx.emitted.append(("block", "I"))
        ctx._claim_edge(graph_edge_v(*tuple(missing)), label="endgame:block")
        return
    if without:
        c = min(without, key=lambda c: tuple(sorted(c["missing"])))
        ss.block_case = "II"
        ss.node = "star2-pending"
        ctx.emitted.append(("block", "II"))
        ctx._claim_edge(graph_edge_v(*tuple(c["missing"])),
                        label="endgame:block")
        return
    ss.block_case = "III"
    ss.node = "star2"
    ctx.emitted.append(("block", "III"))
    _endgame_step(ctx)


def _try_mirror(ctx: _Ctx) -> bool:
    """Mirror a fresh cherry threat on the blocked base; False to move on."""
    ss = ctx.ss
    if ctx.event[0] != MOVE:
        return False
    e = ctx.event[1]
    if e[0] != "g" or e[1] != ss.k1:
        return False
    u, w = edge_vertices(e)
    c0, c1 = ss.block_base
    ends = {u, w}
    if len(ends & {c0, c1}) != 1:
        return False
    d = (ends - {c0, c1}).pop()
    deg = sum(1 for e2 in ctx.state.owners if d in edge_vertices(e2))
    if deg != 1:
        return False  # not a fresh-vertex cherry: a different kind of edge
    other = c1 if u == c0 or w == c0 else c0
    mirror = graph_edge_v(other, d)
    if ctx.state.owner(mirror) != UNCLAIMED:
        raise InternalInvariantViolation(
            f"mirror edge {edge_to_text(mirror)} already claimed")
    ctx.emitted.append(("mirror", edge_to_text(mirror)))
    ctx._claim_edge(mirror, label="endgame:mirror")
    return True


def _finish(ctx: _Ctx):
    ss = ctx.ss
    ss.phase = "done"
    ctx.emitted.append(("complete",))


def completed_copy_edges(ss: StrategyState):
    """The nine edges of the copy P2 finishes with, as board edges."""
    if ss.phase != "done":
        return None
    if ss.node in ("star1", "star2"):
        a0, a1 = ss.a0, ss.a1
        b1, b2 = ss.witness.book
        f_k = ss.stars[ss.star_k - 1]
        f_l = ss.stars[-1]
        base, pendants = (a0, a1), (b1, b2, f_k, f_l)
    elif ss.node == "special1-ek":
        base = (ss.labels["E"], ss.labels["F"])
        pendants = (ss.labels["B"], ss.labels["I"], ss.labels["J"],
                    ss.labels["K"])
    elif ss.node == "special1":
        base = (ss.labels["E"], ss.labels["F"])
        pendants = (ss.labels["B"], ss.labels["I"], ss.labels["J"], ss.ls[-1])
    elif ss.node == "special2":
        base = (ss.labels["B"], ss.labels["F"])
        pendants = (ss.labels["A"], ss.labels["E"], ss.labels["K"], ss.ls[-1])
    else:
        return None
    verts = [base] + [(base[0], p) for p in pendants] + \
        [(base[1], p) for p in pendants]
    return [graph_edge_v(u, v) for u, v in verts]


def _special1_step(ctx: _Ctx):
    ss = ctx.ss
    ss.node = "special1"
    if ss.step == 0:
        ss.step = 1
        ek = ctx.edge("E", "K")
        if ctx.state.owner(ek) != P1 and ek not in ss.granted:
            ctx._claim_edge(ek)
            ss.node = "special1-ek"
            _finish(ctx)
            return
        ctx.mark_specified("E", "K")
        _claim_l(ctx, "F")
        return
    answer = graph_edge_v(ctx.v("E"), ss.pending_l)
    if ctx.state.owner(answer) == P1:
        _claim_l(ctx, "F")
        return
    ctx._claim_edge(answer)
    ss.pending_l = None
    _finish(ctx)


def _special2_step(ctx: _Ctx):
    ss = ctx.ss
    ss.node = "special2"
    if ss.pending_l is None:
        _claim_l(ctx, "B")
        return
    answer = graph_edge_v(ctx.v("F"), ss.pending_l)
    if ctx.state.owner(answer) == P1:
        _claim_l(ctx, "B")
        return
    ctx._claim_edge(answer)
    ss.pending_l = None
    _finish(ctx)


def _claim_l(ctx: _Ctx, from_role):
    ss = ctx.ss
    v = lowest_free_vertex(ctx.state, ss.k2, excluded=ss.reserved)
    ss.ls.append(v)
    ss.pending_l = v
    ctx._claim_edge(graph_edge_v(ctx.v(from_role), v))


# ---------------------------------------------------------------------------
# Public operations
# ---------------------------------------------------------------------------

def open_game(state: GameState):
    """P2's opening reply; exactly one P1 action must have happened.

    If P1's first action was already the stop, the two copies are
    interchangeable; copy 2 is used as P2's building ground by convention.
    """
    if len(state.history) != 1:
        raise InternalInvariantViolation(
            "open_game expects exactly one P1 action on the board")
    if state.history[0] == ("stop",):
        k1 = 1
        ss = StrategyState(k1=k1, k2=2)
    else:
        _, first = state.history[0]
        k1 = first[1]
        ss = StrategyState(k1=k1, k2=2 if k1 == 1 else 1)
        ss.specified.add(first)
    ss.labels["A"] = (ss.k2, 0)
    ss.labels["B"] = (ss.k2, 1)
    move = graph_edge_v(ss.labels["A"], ss.labels["B"])
    return move, ss


def respond(state: GameState, ss: StrategyState, event):
    """One P2 turn: consume P1's latest event, emit P2's move.

    ``event`` is ``("move", edge)`` or ``("stop",)``.  Returns
    ``(move_or_None, new_strategy_state, emitted_annotations)``; the move is
    None only when the automaton is already done.
    """
    ss = ss.clone()
    if ss.phase == "done":
        return None, ss, []
    ctx = _Ctx(state, ss, event)
    guard = 0
    while ctx.move is None and ss.phase != "done":
        guard += 1
        if guard > 60:
            raise InternalInvariantViolation("automaton failed to move")
        if ss.phase == "case":
            CASE_HANDLERS[ss.node](ctx)
        elif ss.phase == "endgame":
            _endgame_step(ctx)
        elif ss.phase == "special1":
            _special1_step(ctx)
        elif ss.phase == "special2":
            _special2_step(ctx)
    if ctx.move is not None:
        ctx.emitted.insert(0, ("label", ctx.move_label))
    return ctx.move, ss, ctx.emitted


def endgame_step(state: GameState, ss: StrategyState, event):
    """One endgame turn (stars and blocking); requires the endgame phase."""
    if ss.phase != "endgame":
        raise InternalInvariantViolation(
            f"endgame_step called in phase {ss.phase!r}")
    return respond(state, ss, event)


def special_case_step(state: GameState, ss: StrategyState, event):
    """One turn of either special end-case protocol."""
    if ss.phase not in ("special1", "special2"):
        raise InternalInvariantViolation(
            f"special_case_step called in phase {ss.phase!r}")
    return respond(state, ss, event)


def case_label(ss: StrategyState) -> str:
    if ss.phase == "case":
        return ss.node
    if ss.phase == "endgame":
        return f"endgame:{ss.node}"
    return ss.phase


# ---------------------------------------------------------------------------
# Trace annotation
# ---------------------------------------------------------------------------

def explain(lines):
    """Annotate a trace (parsed JSONL dicts or raw strings).

    Replays the moves, checking P2's against the automaton, and reports the
    case label, ledger and endgame markers per ply.
    """
    from .board import apply_move, declare_stop, new_board

    records = []
    for line in lines:
        if isinstance(line, str):
            line = line.strip()
            if not line:
                continue
            try:
                line = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ValueError(f"malformed trace line: {exc}") from None
        records.append(line)
    if not records:
        raise ValueError("empty trace")

    from .board import edge_from_text
    edge_texts = [r["edge"] for r in records
                  if r.get("edge") and r["edge"] != "stop"]
    if not edge_texts:
        raise ValueError("trace contains no edges")
    n = max(_edge_span(t) for t in edge_texts) + 1
    kind = TWO_CLIQUES if edge_texts[0].startswith("g") else "hyper4"
    state = new_board(kind, max(n, 6 if kind == TWO_CLIQUES else 8))
    ss = None
    annotated = []
    for rec in records:
        player = P1 if rec["player"] == "P1" else P2
        note = dict(rec)
        if rec.get("edge") == "stop":
            state = declare_stop(state)
            annotated.append(note)
            continue
        edge = edge_from_text(rec["edge"])
        if player == P1:
            state = apply_move(state, P1, edge)
            annotated.append(note)
            continue
        if ss is None:
            move, ss = open_game(state)
        else:
            event = (("stop",) if state.p1_stopped
                     else ("move", state.history[-1][1]))
            move, ss, _ = respond(state, ss, event)
        if move != edge:
            raise ValueError(
                f"trace deviates from the strategy at ply {rec.get('ply')}: "
                f"expected {edge_to_text(move)}, trace has {rec['edge']}")
        note["case"] = case_label(ss)
        note["ledger"] = ({"k": ss.ledger[0], "l": ss.ledger[1]}
                          if ss.ledger else None)
        state = apply_move(state, P2, edge)
        annotated.append(note)
    return annotated


def _edge_span(text: str) -> int:
    from .board import edge_from_text
    e = edge_from_text(text)
    return max(e[2:]) if e[0] == "g" else max(e[1:])
