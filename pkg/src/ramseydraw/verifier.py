"""Adversarial validation of the drawing strategies.

Three modes:

  * ``exhaustive_verify`` -- every P1 reply (plus the stop action) up to
    canonical equivalence per ply, to a given P1-move depth, with the stop
    continuation run at every node;
  * ``stochastic_verify`` -- seeded deep playouts mixing uniform, structure-
    seeking and probe-chasing P1 policies;
  * ``crosscheck_lemmas`` -- predicate cross-implications on random and
    reachable states.

Each playout re-checks, move by move: P1 never owns a target copy, declared
potential bases really are potential bases, endgame entry conditions hold at
every non-special end-case, recorded lost-edge ledgers are true bounds, and
P2's post-stop completion stays within its move budget.  Free-vertex
exhaustion (``BoardTooSmall``) is recorded as a finding, not a violation: it
bounds the board size the strategy needs but is not a safety failure.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import combinations

from . import hyperstrategy, strategy
from .board import (HYPER4, P1, P2, TWO_CLIQUES, UNCLAIMED, BoardTooSmall,
                    GameState, apply_move, canonicalize, declare_stop,
                    edge_to_text, free_vertices, graph_edge, graph_edge_v,
                    hyper_edge, new_board)
from .lemmas import (PotentialBaseWitness, _p1_bad_cycles_at,
                     _p1_triangles_at, lemma2_preconditions,
                     potential_base_on_view)
# The exact game solver doubles as this module's independent oracle; its
# implementation deliberately shares no code with the strategy or lemma
# modules (tests enforce that).
from .oracle import OracleResult, ResourceExceeded, oracle_solve  # noqa: F401
from .patterns import copies_in_view, exact_max_ep1_view, \
    max_ep1_over_bases_view
from .strategy import InternalInvariantViolation
from .views import PairView, copy_view


@dataclass
class Verdict:
    mode: str
    params: dict
    states_explored: int = 0
    transposition_hits: int = 0
    playouts: int = 0
    completions: int = 0
    violations: list = field(default_factory=list)
    findings: list = field(default_factory=list)
    result: str = "safe"

    def record_violation(self, desc, trace):
        self.violations.append({"desc": str(desc), "trace": list(trace)})
        self.result = "violated"

    def record_finding(self, desc, trace):
        self.findings.append({"desc": str(desc), "trace": list(trace)})

    def to_json(self):
        return {
            "mode": self.mode, "params": self.params,
            "states_explored": self.states_explored,
            "transposition_hits": self.transposition_hits,
            "playouts": self.playouts,
            "completions": self.completions,
            "violations": self.violations[:20],
            "violation_count": len(self.violations),
            "findings": self.findings[:20],
            "finding_count": len(self.findings),
            "result": self.result,
        }


class Violation(Exception):
    pass


STAR_LABELS = ("endgame:star1", "endgame:star2", "special1", "special2",
               "special1-ek", "stage2", "stage4")
BLOCK_LABELS = ("endgame:block", "endgame:mirror", "stage3:block",
                "stage3:mirror")


# ---------------------------------------------------------------------------
# Playout driver with per-move checks
# ---------------------------------------------------------------------------

class Playout:
    """One game of the modified strong game, driven move by move.

    Owns the board, P2's automaton, the trace and the invariant checks.
    ``p1_move``/``p1_stop`` raise ``Violation`` on a broken invariant and
    ``BoardTooSmall`` propagates from P1-side scripts; P2-side exhaustion
    truncates the playout instead (``self.truncated``).
    """

    def __init__(self, n: int, game: str = "graph", checks: bool = True,
                 p2_factory=None):
        self.game = game
        self.checks = checks
        kind = TWO_CLIQUES if game == "graph" else HYPER4
        self.state = new_board(kind, n)
        self.ss = None
        self.trace = []
        self.done = False
        self.truncated = None
        self.winner = None
        self.post_stop = []   # (label, edge, opened_rung) after the stop
        self.phase_at_stop = None
        self.p2_factory = p2_factory
        self._rungs_before = 0

    # -- P2 plumbing ---------------------------------------------------------

    def _p2_respond(self, event):
        if self.p2_factory is not None:
            move, self.ss = self.ss.respond(self.state, event)
            return move, [("label", "stub")]
        if self.game == "graph":
            move, self.ss, emitted = strategy.respond(self.state, self.ss,
                                                      event)
        else:
            move, self.ss, emitted = hyperstrategy.respond(self.state,
                                                           self.ss, event)
        return move, emitted

    # -- public driving surface ----------------------------------------------

    def legal_p1_edges(self):
        return list(self.state.unclaimed_edges())

    def p1_move(self, edge):
        if self.done or self.truncated:
            raise Violation("game already over")
        self.state = apply_move(self.state, P1, edge)
        self.trace.append({"ply": len(self.state.history), "player": "P1",
                           "edge": edge_to_text(edge), "case": None,
                           "ledger": None})
        self._check_p1_safety()
        self._p2_turn(("move", edge))

    def p1_stop(self):
        if self.done or self.truncated:
            raise Violation("game already over")
        self.state = declare_stop(self.state)
        self.trace.append({"ply": len(self.state.history), "player": "P1",
                           "edge": "stop", "case": None, "ledger": None})
        self.phase_at_stop = self._phase_tag()
        guard = 0
        while not self.done and not self.truncated:
            guard += 1
            if guard > 40:
                raise Violation("completion did not terminate")
            self._p2_turn(("stop",))
        if self.checks and not self.truncated:
            self._check_completion()

    def _phase_tag(self):
        if self.ss is None:
            return "open"
        if self.p2_factory is not None:
            return "stub"
        if self.game == "graph":
            return self.ss.phase
        if self.ss.done:
            return "done"
        return f"stage{self.ss.stage}"

    def _p2_turn(self, event):
        try:
            if self.ss is None:
                if self.p2_factory is not None:
                    move, self.ss = self.p2_factory(self.state)
                elif self.game == "graph":
                    move, self.ss = strategy.open_game(self.state)
                else:
                    move, self.ss = hyperstrategy.hyper_open(self.state)
                emitted = [("label", "root" if self.game == "graph"
                            else "stage1")]
            else:
                move, emitted = self._p2_respond(event)
        except BoardTooSmall as exc:
            self.truncated = str(exc)
            return
        if move is None:
            self.done = True
            return
        label = next((e[1] for e in emitted if e[0] == "label"), "?")
        pre_state = self.state
        self.state = apply_move(self.state, P2, move)
        ledger = None
        if self.game == "graph" and getattr(self.ss, "ledger", None):
            ledger = {"k": self.ss.ledger[0], "l": self.ss.ledger[1]}
        rec = {"ply": len(self.state.history), "player": "P2",
               "edge": edge_to_text(move), "case": label, "ledger": ledger}
        if self.game == "hyper":
            rec["stage"] = label.split(":")[0]
        self.trace.append(rec)
        if self.state.p1_stopped:
            rungs = self._rung_count()
            opened = rungs > self._rungs_before
            self.post_stop.append((label, move, opened))
        self._rungs_before = self._rung_count()
        if self.checks:
            for ev in emitted:
                self._check_event(ev, pre_state)
        finished = (self.p2_factory is None and
                    ((self.game == "graph" and self.ss.phase == "done") or
                     (self.game == "hyper" and self.ss.done)))
        if finished:
            self.done = True
            self.winner = "P2"
            if self.checks:
                self._check_p2_completion()

    # -- checks ---------------------------------------------------------------

    def _p1_effective_count(self):
        cnt = sum(1 for o in self.state.owners.values() if o == P1)
        if self.game == "graph" and self.ss is not None and \
                self.p2_factory is None:
            cnt += len(self.ss.granted)
        return cnt

    def _check_p1_safety(self):
        if not self.checks or self._p1_effective_count() < 9:
            return
        if self.game == "graph":
            granted = self.ss.granted if (
                self.ss is not None and self.p2_factory is None) else ()
            for c in (1, 2):
                view = copy_view(self.state, c, granted=granted)
                if copies_in_view(view, P1):
                    raise Violation(f"P1 owns a target copy in copy {c}")
        else:
            from .patterns import find_gprime_copies
            if find_gprime_copies(self.state, P1):
                raise Violation("P1 owns a lifted target copy")

    def _check_event(self, ev, pre_state):
        if self.p2_factory is not None:
            return
        kind = ev[0]
        if kind == "special-vertex":
            # End of hyper stage 1: P1 has six hyperedges, at most four on
            # the building board, and the chosen special endpoint has at
            # most two P1 hyperedges avoiding its partner.
            _, special, off_count = ev
            p1_edges = pre_state.edges_of(P1)
            if not pre_state.p1_stopped and len(p1_edges) != 6:
                raise Violation(
                    f"stage 1 ended with {len(p1_edges)} P1 hyperedges")
            x, y = self.ss.labels["X"], self.ss.labels["Y"]
            on_view = sum(1 for e in p1_edges
                          if x in e[1:] and y in e[1:])
            if on_view > 4:
                raise Violation(
                    f"{on_view} P1 hyperedges on the building board")
            if off_count > 2:
                raise Violation(
                    f"special vertex has {off_count} off-partner hyperedges")
            return
        if kind == "ledger":
            _, node, k, l = ev
            expected = strategy.MARKED_SPLIT_CASES.get(node)
            if expected != l:
                raise Violation(f"ledger at {node} recorded l={l}, "
                                f"marked value is {expected}")
            view = copy_view(pre_state, self.ss.k2, granted=self.ss.granted,
                             conceded=self.ss.conceded)
            _, bound = max_ep1_over_bases_view(view)
            if bound > k - l:
                raise Violation(
                    f"lost-edge ledger broken at {node}: bound {bound} > "
                    f"{k}-{l}")
        elif kind == "endgame":
            _, node, base_text, special = ev
            if node in strategy.SPECIAL_END_CASES:
                return
            res = lemma2_preconditions(pre_state, self.ss.witness, self.ss.k1,
                                       granted=self.ss.granted,
                                       conceded=self.ss.conceded)
            if not res.holds:
                raise Violation(
                    f"endgame entry conditions fail at {node}: {res.reasons}")
        elif kind == "special":
            self._check_special_entry(ev[1], pre_state)

    def _check_special_entry(self, which, pre_state):
        ss = self.ss
        view = copy_view(pre_state, ss.k2, granted=ss.granted,
                         conceded=ss.conceded)
        p1_eff = sum(1 for o in pre_state.owners.values() if o == P1) \
            + len(ss.granted)
        k = p1_eff - 1
        _, bound = max_ep1_over_bases_view(view)
        lost = 3
        if which == 1:
            e = ss.labels["E"]
            ek = graph_edge_v(ss.labels["E"], ss.labels["K"])
            if pre_state.owner(ek) == P1:
                lost = 4
            tris = _p1_triangles_at(view, e)
            cycles = _p1_bad_cycles_at(view, e, chord_blocker=P2)
            if len(tris) > 1 or cycles:
                raise Violation(
                    f"special end-case 1 structure at E violated: "
                    f"{len(tris)} triangles, {len(cycles)} open cycles")
        else:
            f = ss.labels["F"]
            tris = _p1_triangles_at(view, f)
            cycles = _p1_bad_cycles_at(view, f, chord_blocker=None)
            ok = (len(cycles) <= 1 and len(tris) <= 1) or \
                 (len(cycles) == 0 and len(tris) <= 2)
            if not ok:
                raise Violation(
                    f"special end-case 2 structure at F violated: "
                    f"{len(tris)} triangles, {len(cycles)} open cycles")
        if bound > k - lost:
            raise Violation(
                f"special end-case {which} entry: bound {bound} > {k}-{lost}")

    def _check_p2_completion(self):
        if self.game == "graph":
            edges = strategy.completed_copy_edges(self.ss)
            conceded = self.ss.conceded
        else:
            edges = hyperstrategy.completed_copy_hyperedges(self.ss)
            conceded = ()
        if edges is None:
            raise Violation("automaton finished without a completed copy")
        for e in edges:
            if self.state.owner(e) != P2 or e in conceded:
                raise Violation(
                    f"completion edge {edge_to_text(e)} not usable for P2")
        self._check_p1_safety()

    def _rung_count(self):
        if self.ss is None or self.p2_factory is not None:
            return 0
        if self.game == "graph":
            return len(self.ss.stars) + len(self.ss.ls)
        return len(self.ss.stars)

    def _check_completion(self):
        """Post-stop move budget: the executable form of the endgame claim.

        Star moves split into *opens* (a threat to a fresh rung vertex) and
        *closes* (completing a rung's cherry); the strategy may close at
        most one more rung than it opens after the stop.  A stop at or past
        the endgame allows one open, no blocking and no case-script moves;
        an earlier stop allows the remaining case script (at most 4 moves),
        at most one blocking move and two opens.
        """
        if not self.done:
            raise Violation("P1 stopped but P2 never completed")
        opens = sum(1 for lab, _, op in self.post_stop
                    if lab in STAR_LABELS and op)
        closes = sum(1 for lab, _, op in self.post_stop
                     if lab in STAR_LABELS and not op)
        blocks = sum(1 for lab, _, _ in self.post_stop
                     if lab in BLOCK_LABELS)
        scripts = len(self.post_stop) - opens - closes - blocks
        in_endgame = self.phase_at_stop in (
            "endgame", "special1", "special2",
            "stage2", "stage3", "stage4")
        if closes > opens + 1:
            raise Violation(
                f"completion closed {closes} rungs over {opens} opens")
        if in_endgame:
            if scripts or blocks or opens > 1:
                raise Violation(
                    f"post-stop completion from {self.phase_at_stop} used "
                    f"{scripts} script, {blocks} block, {opens} opens")
        else:
            # Opening plus at most four case-script moves remain before the
            # endgame when P1 stops inside the case tree.
            if scripts > 5 or blocks > 1 or opens > 2:
                raise Violation(
                    f"post-stop budget exceeded: {scripts} script, "
                    f"{blocks} block, {opens} opens")


# ---------------------------------------------------------------------------
# Canonical keys including the automaton state
# ---------------------------------------------------------------------------

def playout_key(p: Playout) -> bytes:
    ss = p.ss
    pinned = {}
    extra = []
    if ss is not None and p.p2_factory is None:
        inv = {}
        for role, v in ss.labels.items():
            pinned[v] = role
            inv[v] = role
        for i, f in enumerate(ss.stars):
            pinned[f] = f"F{i}"
            inv[f] = f"F{i}"
        if p.game == "graph":
            for i, f in enumerate(ss.ls):
                pinned[f] = f"L{i}"
                inv[f] = f"L{i}"
            for v in ss.reserved:
                pinned.setdefault(v, "RES")
            if ss.block_base:
                pinned[ss.block_base[0]] = "C0"
                pinned[ss.block_base[1]] = "C1"

            def role_pair(e):
                u, w = ((e[1], e[2]), (e[1], e[3]))
                return tuple(sorted((inv.get(u, "?"), inv.get(w, "?"))))

            extra = ["g", ss.phase, ss.node, ss.step, ss.ledger, ss.star_k,
                     ss.pending_star is not None, ss.pending_l is not None,
                     ss.block_case,
                     tuple(sorted(role_pair(e) for e in ss.granted)),
                     tuple(sorted(role_pair(e) for e in ss.conceded))]
        else:
            if ss.block_base:
                pinned[ss.block_base[0]] = "C0"
                pinned[ss.block_base[1]] = "C1"
            if ss.block_centres:
                for i, c in enumerate(ss.block_centres):
                    pinned.setdefault(c, f"BC{i}")
            extra = ["h", ss.stage, ss.step, ss.star_k,
                     ss.pending_star is not None, ss.block_case, ss.done]
    board_key = canonicalize(p.state, pinned=pinned)
    return repr(extra).encode() + b"|" + board_key


# ---------------------------------------------------------------------------
# Exhaustive verification
# ---------------------------------------------------------------------------

def _fork(p: Playout) -> Playout:
    out = Playout.__new__(Playout)
    out.game = p.game
    out.checks = p.checks
    out.state = p.state
    out.ss = p.ss.clone() if p.ss is not None else None
    out.trace = list(p.trace)
    out.done = p.done
    out.truncated = p.truncated
    out.winner = p.winner
    out.post_stop = list(p.post_stop)
    out.phase_at_stop = p.phase_at_stop
    out.p2_factory = p.p2_factory
    out._rungs_before = p._rungs_before
    return out


def exhaustive_verify(n: int, p1_depth: int, game: str = "graph",
                      prefix=(), p2_factory=None,
                      reduction: bool = True, key_collector=None,
                      stop_on_violation: bool = False) -> Verdict:
    """Explore all isomorphism-reduced P1 lines to a given move depth.

    ``prefix`` is a list of P1 move instructions (see ``resolve_instruction``)
    played first; ``p1_depth`` counts further P1 moves.  The stop action is
    explored at every node, which also closes out every depth-limit leaf
    through the completion path.
    """
    verdict = Verdict(mode="exhaustive",
                      params={"n": n, "depth": p1_depth, "game": game,
                              "prefix_len": len(prefix)})
    seen = set()

    class _Abort(Exception):
        pass

    def bail():
        if stop_on_violation and verdict.violations:
            raise _Abort

    root = Playout(n, game=game, p2_factory=p2_factory)
    try:
        for instr in prefix:
            root.p1_move(resolve_instruction(root, instr))
    except (Violation, InternalInvariantViolation) as exc:
        verdict.record_violation(f"during prefix: {exc}", root.trace)
        return verdict
    except BoardTooSmall as exc:
        verdict.record_finding(f"during prefix: {exc}", root.trace)
        return verdict

    def run_stop(node: Playout):
        branch = _fork(node)
        verdict.states_explored += 1
        try:
            branch.p1_stop()
        except (Violation, InternalInvariantViolation) as exc:
            verdict.record_violation(str(exc), branch.trace)
            bail()
            return
        except BoardTooSmall as exc:
            verdict.record_finding(str(exc), branch.trace)
            return
        if branch.truncated:
            verdict.record_finding(branch.truncated, branch.trace)
        elif branch.done and branch.winner == "P2":
            verdict.completions += 1

    def visit(node: Playout, depth_left: int):
        verdict.states_explored += 1
        if key_collector is not None:
            key_collector.add(playout_key(node))
        run_stop(node)
        if depth_left == 0 or node.done or node.truncated:
            return
        child_seen = set()
        for edge in node.legal_p1_edges():
            branch = _fork(node)
            try:
                branch.p1_move(edge)
            except (Violation, InternalInvariantViolation) as exc:
                verdict.record_violation(str(exc), branch.trace)
                bail()
                continue
            except BoardTooSmall as exc:
                verdict.record_finding(str(exc), branch.trace)
                continue
            if branch.truncated:
                verdict.record_finding(branch.truncated, branch.trace)
                continue
            if reduction:
                key = playout_key(branch)
                if key in child_seen:
                    continue
                child_seen.add(key)
                if key in seen:
                    verdict.transposition_hits += 1
                    continue
                seen.add(key)
            visit(branch, depth_left - 1)

    try:
        if not prefix and p1_depth > 0:
            # On the empty board the two copies and all first edges within a
            # copy are interchangeable: one opening represents them all.
            run_stop(root)
            node = _fork(root)
            first = graph_edge(1, 0, 1) if game == "graph" else \
                hyper_edge((0, 1, 2, 3))
            try:
                node.p1_move(first)
                visit(node, p1_depth - 1)
            except (Violation, InternalInvariantViolation) as exc:
                verdict.record_violation(str(exc), node.trace)
            except BoardTooSmall as exc:
                verdict.record_finding(str(exc), node.trace)
        else:
            visit(root, p1_depth)
    except _Abort:
        pass
    return verdict


# ---------------------------------------------------------------------------
# Stochastic verification
# ---------------------------------------------------------------------------

# Probe edge each case node tests next, for the probe-chasing P1 policy.
PROBE_ROLES = {
    "A": ("A", "C"), "A.1": ("D", "C"), "A.2": ("A", "D"),
    "B": ("A", "E"), "B.1": ("B", "C"), "B.1.1": ("E", "F"),
    "B.1.1.1": ("B", "D"), "B.1.1.1.1": ("A", "I"),
    "B.1.1.1.2.1": ("B", "I"), "B.1.1.2": ("C", "F"),
    "B.1.1.2.1.1": ("B", "I"),
    "B.1.1.2.1.2.1": ("B", "I"),
    "B.1.2": ("A", "C"), "B.1.2.1.1": ("E", "F"), "B.1.2.1.2": ("B", "D"),
    "B.1.2.1.2.1": ("E", "F"), "B.2": ("E", "F"),
}


def _probe_or_answer(rng, p: Playout):
    state, ss = p.state, p.ss
    if p.game == "graph":
        if ss.phase == "case":
            roles = PROBE_ROLES.get(ss.node)
            if roles and all(r in ss.labels for r in roles):
                e = graph_edge_v(ss.labels[roles[0]], ss.labels[roles[1]])
                if state.owner(e) == UNCLAIMED:
                    return e
        if ss.phase == "endgame" and ss.pending_star is not None:
            e = graph_edge_v(ss.a0, ss.pending_star)
            if state.owner(e) == UNCLAIMED:
                return e
        if ss.phase == "special1" and ss.pending_l is not None:
            e = graph_edge_v(ss.labels["E"], ss.pending_l)
            if state.owner(e) == UNCLAIMED:
                return e
        if ss.phase == "special2" and ss.pending_l is not None:
            e = graph_edge_v(ss.labels["F"], ss.pending_l)
            if state.owner(e) == UNCLAIMED:
                return e
        if ss.phase == "endgame" and ss.node == "mirror":
            c = ss.block_base[rng.randrange(2)]
            free = free_vertices(state, ss.k1)
            if free:
                return graph_edge_v(c, free[0])
    else:
        if ss.stage in (2, 4) and ss.pending_star is not None:
            e = hyper_edge((ss.labels["X"], ss.labels["Y"],
                            ss.labels["A0"], ss.pending_star))
            if state.owner(e) == UNCLAIMED:
                return e
        if ss.stage == 3 and ss.block_base is not None:
            c = ss.block_base[rng.randrange(2)]
            free = free_vertices(state)
            if free:
                return hyper_edge(tuple(ss.block_centres) + (c, free[0]))
    return None


def _structure_move(rng, state: GameState):
    touched = sorted(state.touched_vertices(), key=repr)
    if state.kind == TWO_CLIQUES:
        for _ in range(15):
            if len(touched) < 2:
                break
            u, v = rng.sample(touched, 2)
            if u[0] != v[0] or u == v:
                continue
            e = graph_edge_v(u, v)
            if state.owner(e) == UNCLAIMED:
                return e
    else:
        for _ in range(15):
            if len(touched) < 3:
                break
            vs = rng.sample(touched, 3)
            rest = [w for w in range(state.n) if w not in vs]
            if not rest:
                continue
            e = hyper_edge(list(vs) + [rng.choice(rest)])
            if state.owner(e) == UNCLAIMED:
                return e
    return None


def _policy_move(rng, p: Playout, policy: str):
    if policy == "adjacent" and p.ss is not None and rng.random() < 0.75:
        edge = _probe_or_answer(rng, p)
        if edge is not None:
            return edge
    if policy in ("threat", "adjacent") and rng.random() < 0.8:
        edge = _structure_move(rng, p.state)
        if edge is not None:
            return edge
    legal = p.legal_p1_edges()
    return rng.choice(legal) if legal else None


def stochastic_verify(n: int, playouts: int, max_p1_moves: int, seed: int,
                      game: str = "graph", p2_factory=None) -> Verdict:
    verdict = Verdict(mode="stochastic",
                      params={"n": n, "playouts": playouts,
                              "max_p1_moves": max_p1_moves, "seed": seed,
                              "game": game})
    policies = ("uniform", "threat", "adjacent")
    for i in range(playouts):
        rng = random.Random(f"{seed}:{i}")
        policy = policies[i % len(policies)]
        p = Playout(n, game=game, p2_factory=p2_factory)
        verdict.playouts += 1
        try:
            moves = 0
            while moves < max_p1_moves and not p.done and not p.truncated:
                if moves > 0 and rng.random() < 0.015:
                    break
                edge = _policy_move(rng, p, policy)
                if edge is None:
                    break
                p.p1_move(edge)
                moves += 1
            if not p.done and not p.truncated:
                p.p1_stop()
        except (Violation, InternalInvariantViolation) as exc:
            verdict.record_violation(f"playout {i}: {exc}", p.trace)
            continue
        except BoardTooSmall as exc:
            verdict.record_finding(f"playout {i}: {exc}", p.trace)
            continue
        if p.truncated:
            verdict.record_finding(f"playout {i}: {p.truncated}", p.trace)
        elif p.done and p.winner == "P2":
            verdict.completions += 1
    return verdict


# ---------------------------------------------------------------------------
# Lemma cross-checks
# ---------------------------------------------------------------------------

def _naive_two_delta(view: PairView, base) -> bool:
    """Independent route: scan 5-subsets of P1 pairs for the pattern.

    The configuration is five edges on four vertices with degree multiset
    {2,2,3,3} whose two degree-2 vertices are exactly the base pair.
    """
    pairs = sorted(view.p1, key=lambda p: tuple(sorted(p)))
    base_set = frozenset(base)
    for sub in combinations(pairs, 5):
        verts = {}
        for q in sub:
            for v in q:
                verts[v] = verts.get(v, 0) + 1
        if len(verts) != 4:
            continue
        deg2 = frozenset(v for v, d in verts.items() if d == 2)
        if len(deg2) == 2 and deg2 == base_set:
            return True
    return False


def _random_view(rng, n_verts: int) -> PairView:
    verts = list(range(n_verts))
    pairs = [frozenset(q) for q in combinations(verts, 2)]
    rng.shuffle(pairs)
    cut1 = rng.randrange(0, min(10, len(pairs)))
    cut2 = cut1 + rng.randrange(0, min(10, len(pairs) - cut1))
    return PairView(verts, pairs[:cut1], pairs[cut1:cut2])


def crosscheck_lemmas(samples: int = 10_000, seed: int = 7,
                      corpus=None) -> dict:
    """Predicate implications on random states (plus an optional corpus)."""
    from .lemmas import has_two_delta, lemma3_check
    rng = random.Random(seed)
    report = {"samples": 0, "lemma3_implications": 0, "failures": []}
    views = [_random_view(rng, rng.randrange(6, 10)) for _ in range(samples)]
    if corpus:
        views.extend(corpus)
    for view in views:
        report["samples"] += 1
        for base in sorted(view.p2, key=lambda p: tuple(sorted(p)))[:6]:
            base = tuple(sorted(base))
            res = lemma3_check(view, base)
            if res.holds:
                report["lemma3_implications"] += 1
                wit = potential_base_on_view(view, base)
                if not isinstance(wit, PotentialBaseWitness):
                    report["failures"].append(
                        ("lemma3-but-no-witness", base,
                         sorted(tuple(sorted(q)) for q in view.p1)))
            if bool(has_two_delta(view, base)) != \
                    _naive_two_delta(view, base):
                report["failures"].append(("two-delta-mismatch", base))
        _, bound = max_ep1_over_bases_view(view)
        exact = exact_max_ep1_view(view)
        if exact > bound:
            report["failures"].append(("bound-below-exact", exact, bound))
    report["ok"] = not report["failures"]
    return report


# ---------------------------------------------------------------------------
# Scripted witnesses for every case node, and mutation checks
# ---------------------------------------------------------------------------

def resolve_instruction(p: Playout, instr):
    """Turn a symbolic witness instruction into a board edge.

    ``"k1"`` claims a fresh disjoint edge in P1's copy (also used for his
    first move), ``"pair"`` a fresh disjoint pair in P2's copy, and a role
    tuple the edge between two labeled vertices.
    """
    state = p.state
    if instr == "k1":
        k1 = p.ss.k1 if p.ss is not None else 1
        free = free_vertices(state, k1)
        if len(free) < 2:
            raise BoardTooSmall("witness script needs room in copy 1")
        return graph_edge_v(free[0], free[1])
    if instr == "pair":
        free = free_vertices(state, p.ss.k2)
        if len(free) < 2:
            raise BoardTooSmall("witness script needs room in copy 2")
        return graph_edge_v(free[0], free[1])
    r1, r2 = instr
    return graph_edge_v(p.ss.labels[r1], p.ss.labels[r2])


# P1 move scripts reaching each case node, starting from his second move
# (the first is always a fresh edge in his own copy).
WITNESS_PLANS = {
    "A": ["k1"],
    "A.1": ["k1", ("A", "C")],
    "A.1.1": ["k1", ("A", "C"), "k1", ("D", "C")],
    "A.1.2": ["k1", ("A", "C"), "k1", "k1"],
    "A.2": ["k1", "k1"],
    "A.2.1": ["k1", "k1", "k1", ("A", "D")],
    "A.2.2": ["k1", "k1", "k1", "k1"],
    "B": ["pair"],
    "B.1": ["pair", ("A", "E")],
    "B.1.1": ["pair", ("A", "E"), ("B", "C")],
    "B.1.1.1": ["pair", ("A", "E"), ("B", "C"), ("E", "F")],
    "B.1.1.1.1": ["pair", ("A", "E"), ("B", "C"), ("E", "F"), ("B", "D")],
    "B.1.1.1.1.1": ["pair", ("A", "E"), ("B", "C"), ("E", "F"), ("B", "D"),
                    ("A", "I")],
    "B.1.1.1.1.2": ["pair", ("A", "E"), ("B", "C"), ("E", "F"), ("B", "D"),
                    "k1"],
    "B.1.1.1.2": ["pair", ("A", "E"), ("B", "C"), ("E", "F"), ("A", "D")],
    "B.1.1.1.2.1": ["pair", ("A", "E"), ("B", "C"), ("E", "F"), ("A", "D")],
    "B.1.1.1.2.1.1": ["pair", ("A", "E"), ("B", "C"), ("E", "F"), ("A", "D"),
                      ("B", "I")],
    "B.1.1.1.2.1.2": ["pair", ("A", "E"), ("B", "C"), ("E", "F"), ("A", "D"),
                      "k1"],
    "B.1.1.1.2.2": ["pair", ("A", "E"), ("B", "C"), ("E", "F"), "k1", "k1"],
    "B.1.1.2": ["pair", ("A", "E"), ("B", "C"), "k1"],
    "B.1.1.2.1": ["pair", ("A", "E"), ("B", "C"), "k1", ("C", "F")],
    "B.1.1.2.1.1": ["pair", ("A", "E"), ("B", "C"), ("A", "F"), ("C", "F")],
    "B.1.1.2.1.1.1": ["pair", ("A", "E"), ("B", "C"), ("A", "F"), ("C", "F"),
                      ("B", "I")],
    "B.1.1.2.1.1.2": ["pair", ("A", "E"), ("B", "C"), ("A", "F"), ("C", "F"),
                      "k1"],
    "B.1.1.2.1.2": ["pair", ("A", "E"), ("B", "C"), "k1", ("C", "F")],
    "B.1.1.2.1.2.2": ["pair", ("A", "E"), ("B", "C"), "k1", ("C", "F"),
                      "k1"],
    "B.1.1.2.1.2.1": ["pair", ("A", "E"), ("B", "C"), ("B", "D"), ("C", "F"),
                      ("D", "F")],
    "B.1.1.2.1.2.1.1": ["pair", ("A", "E"), ("B", "C"), ("B", "D"),
                        ("C", "F"), ("D", "F"), ("B", "I"), ("B", "J"),
                        ("B", "K"), ("E", "K"), "k1"],
    "B.1.1.2.1.2.1.2": ["pair", ("A", "E"), ("B", "C"), ("B", "D"),
                        ("C", "F"), ("D", "F"), "k1"],
    "B.1.1.2.2": ["pair", ("A", "E"), ("B", "C"), "k1", "k1"],
    "B.1.2": ["pair", ("A", "E"), "k1"],
    "B.1.2.1": ["pair", ("A", "E"), "k1", ("A", "C")],
    "B.1.2.1.1": ["pair", ("A", "E"), ("D", "E"), ("A", "C")],
    "B.1.2.1.1.1": ["pair", ("A", "E"), ("D", "E"), ("A", "C"), "k1",
                    ("E", "F")],
    "B.1.2.1.1.2": ["pair", ("A", "E"), ("D", "E"), ("A", "C"), "k1", "k1"],
    "B.1.2.1.2": ["pair", ("A", "E"), "k1", ("A", "C")],
    "B.1.2.1.2.1": ["pair", ("A", "E"), "k1", ("A", "C"), ("B", "D")],
    "B.1.2.1.2.1.1": ["pair", ("A", "E"), "k1", ("A", "C"), ("B", "D"),
                      ("E", "F")],
    "B.1.2.1.2.1.2": ["pair", ("A", "E"), "k1", ("A", "C"), ("B", "D"),
                      "k1"],
    "B.1.2.1.2.2": ["pair", ("A", "E"), "k1", ("A", "C"), "k1"],
    "B.1.2.2": ["pair", ("A", "E"), "k1", "k1"],
    "B.2": ["pair", "k1"],
    "B.2.1": ["pair", "k1", "k1", ("E", "F")],
    "B.2.2": ["pair", "k1", "k1", "k1"],
}


def full_plan(node_label: str) -> list:
    return ["k1"] + WITNESS_PLANS[node_label]


def reach_node(node_label: str, n: int = 14) -> Playout:
    """Drive a fresh playout along the witness plan for a case node."""
    p = Playout(n, game="graph")
    for instr in full_plan(node_label):
        p.p1_move(resolve_instruction(p, instr))
    return p


def mutation_check(node_label: str, n: int = 14) -> Verdict:
    """Exhaustive run with the named case branch disabled; must not be safe.

    A disabled branch that still verifies safe would mean dead strategy
    code; reaching it must surface as a violation or finding.  The two
    special end-cases live in their own phase steps rather than the case
    handler table, so they are disabled there.
    """
    def _disabled(ctx):
        raise InternalInvariantViolation(
            f"case branch {node_label} removed by mutation")

    plan = full_plan(node_label)
    prefix = plan[:-1]
    depth = max(2, 4 - len(prefix))
    specials = {"B.1.1.2.1.2.1.1": "_special1_step",
                "B.1.1.2.1.2.1.2": "_special2_step"}
    if node_label in specials:
        attr = specials[node_label]
        original = getattr(strategy, attr)
        setattr(strategy, attr, _disabled)
    else:
        original = strategy.CASE_HANDLERS[node_label]
        strategy.CASE_HANDLERS[node_label] = _disabled
    try:
        verdict = exhaustive_verify(n, depth, game="graph", prefix=prefix,
                                    stop_on_violation=True)
    finally:
        if node_label in specials:
            setattr(strategy, specials[node_label], original)
        else:
            strategy.CASE_HANDLERS[node_label] = original
    return verdict


def passthrough_p2_factory(state):
    """A deliberately broken P2 used as a mutation-sensitivity control.

    Mirrors P1's edge into the other copy, or takes the lowest unclaimed
    edge; builds nothing and blocks nothing, so the verifier must catch P1
    completing a copy.
    """

    class _Stub:
        phase = "stub"

        def clone(self):
            return self

        def respond(self, state, event):
            if event[0] == "move" and event[1][0] == "g":
                e = event[1]
                other = 2 if e[1] == 1 else 1
                mirror = graph_edge(other, e[2], e[3])
                if state.owner(mirror) == UNCLAIMED:
                    return mirror, self
            for e in state.unclaimed_edges():
                return e, self
            return None, self

    stub = _Stub()
    first = state.history[0]
    if first == ("stop",):
        return graph_edge(2, 0, 1), stub
    e = first[1]
    other = 2 if e[1] == 1 else 1
    return graph_edge(other, e[2], e[3]), stub
