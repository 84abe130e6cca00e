"""Game-state substrate for the two games.

Two board kinds are supported:

  * ``two-cliques`` -- two disjoint copies of K_n.  A vertex is a pair
    ``(copy, ordinal)`` with ``copy`` in {1, 2}; an edge joins two vertices of
    the same copy.
  * ``hyper4`` -- the complete 4-uniform hypergraph on n vertices.  A vertex
    is an integer ordinal; a hyperedge is a 4-set.

Edges are plain tuples so they hash fast and serialise trivially:

  ``("g", copy, a, b)`` with a < b, and ``("h", a, b, c, d)`` sorted ascending.

The text encoding used in traces, the CLI and the UI protocol is
``g:<copy>:<a>-<b>`` and ``h:<a>-<b>-<c>-<d>``.

States are immutable values: ``apply_move`` returns a new state, so states can
be shared freely between verifier workers and forked search branches.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, permutations
from typing import Iterable, Iterator, Optional

UNCLAIMED = 0
P1 = 1
P2 = 2

TWO_CLIQUES = "two-cliques"
HYPER4 = "hyper4"

PLAYER_NAMES = {P1: "P1", P2: "P2"}


class BoardError(Exception):
    """Base class for board-level failures."""


class ConfigurationError(BoardError):
    """Board parameters outside the supported range."""


class IllegalMove(BoardError):
    """Attempt to claim an already-claimed or malformed edge."""


class TurnError(BoardError):
    """Move by the wrong player, or by P1 after declaring stop."""


class BoardTooSmall(BoardError):
    """The strategy asked for a free vertex and none is left.

    Raised as a distinguished error so the verifier can record it as a
    finding instead of crashing.
    """


# ---------------------------------------------------------------------------
# Edges and vertices
# ---------------------------------------------------------------------------

def graph_vertex(copy: int, ordinal: int):
    return (copy, ordinal)


def graph_edge(copy: int, a: int, b: int) -> tuple:
    if copy not in (1, 2):
        raise IllegalMove(f"copy must be 1 or 2, got {copy!r}")
    if a == b:
        raise IllegalMove("edge endpoints must be distinct")
    if a > b:
        a, b = b, a
    return ("g", copy, a, b)


def graph_edge_v(u, v) -> tuple:
    """Edge from two ``(copy, ordinal)`` vertices; rejects cross-copy pairs."""
    if u[0] != v[0]:
        raise IllegalMove(f"cross-copy edge {u}-{v} rejected")
    return graph_edge(u[0], u[1], v[1])


def hyper_edge(vertices: Iterable[int]) -> tuple:
    vs = sorted(vertices)
    if len(vs) != 4 or len(set(vs)) != 4:
        raise IllegalMove(f"hyperedge needs 4 distinct vertices, got {vs!r}")
    return ("h", vs[0], vs[1], vs[2], vs[3])


def edge_vertices(edge: tuple):
    """Vertices of an edge, in board-native vertex representation."""
    if edge[0] == "g":
        return ((edge[1], edge[2]), (edge[1], edge[3]))
    return edge[1:]


def edge_to_text(edge: tuple) -> str:
    if edge[0] == "g":
        return f"g:{edge[1]}:{edge[2]}-{edge[3]}"
    return "h:" + "-".join(str(v) for v in edge[1:])


def edge_from_text(text: str) -> tuple:
    try:
        kind, rest = text.split(":", 1)
        if kind == "g":
            copy_s, pair = rest.split(":")
            a_s, b_s = pair.split("-")
            return graph_edge(int(copy_s), int(a_s), int(b_s))
        if kind == "h":
            return hyper_edge(int(p) for p in rest.split("-"))
    except (ValueError, IllegalMove) as exc:
        raise IllegalMove(f"bad edge text {text!r}: {exc}") from None
    raise IllegalMove(f"bad edge text {text!r}")


# ---------------------------------------------------------------------------
# Game state
# ---------------------------------------------------------------------------

STOP = ("stop",)


@dataclass(frozen=True, eq=False)
class GameState:
    """Immutable snapshot of a game.

    ``owners`` maps claimed edges to P1/P2; unclaimed edges are absent.
    ``history`` is a tuple of ``(player, edge)`` pairs plus the marker
    ``("stop",)`` once P1 stops.  Treat all fields as read-only.
    """

    kind: str
    n: int
    owners: dict
    history: tuple
    to_move: int
    p1_stopped: bool = False

    def owner(self, edge: tuple) -> int:
        return self.owners.get(edge, UNCLAIMED)

    def move_count(self) -> int:
        return len(self.owners)

    def edges_of(self, player: int) -> list:
        return [e for e, o in self.owners.items() if o == player]

    def vertices(self):
        if self.kind == TWO_CLIQUES:
            return [(c, i) for c in (1, 2) for i in range(self.n)]
        return list(range(self.n))

    def all_edges(self) -> Iterator[tuple]:
        if self.kind == TWO_CLIQUES:
            for c in (1, 2):
                for a, b in combinations(range(self.n), 2):
                    yield ("g", c, a, b)
        else:
            for vs in combinations(range(self.n), 4):
                yield ("h",) + vs

    def unclaimed_edges(self) -> Iterator[tuple]:
        for e in self.all_edges():
            if e not in self.owners:
                yield e

    def touched_vertices(self) -> set:
        out = set()
        for e in self.owners:
            out.update(edge_vertices(e))
        return out


def new_board(kind: str, n: int) -> GameState:
    if kind == TWO_CLIQUES:
        if n < 6:
            raise ConfigurationError(f"two-cliques board needs n >= 6, got {n}")
    elif kind == HYPER4:
        if n < 8:
            raise ConfigurationError(f"hyper4 board needs n >= 8, got {n}")
    else:
        raise ConfigurationError(f"unknown board kind {kind!r}")
    return GameState(kind=kind, n=n, owners={}, history=(), to_move=P1)


def _validate_edge(state: GameState, edge: tuple) -> None:
    if state.kind == TWO_CLIQUES:
        if edge[0] != "g":
            raise IllegalMove(f"expected a graph edge, got {edge!r}")
        if not (0 <= edge[2] < state.n and 0 <= edge[3] < state.n):
            raise IllegalMove(f"edge {edge!r} off the board (n={state.n})")
    else:
        if edge[0] != "h":
            raise IllegalMove(f"expected a hyperedge, got {edge!r}")
        if not all(0 <= v < state.n for v in edge[1:]):
            raise IllegalMove(f"hyperedge {edge!r} off the board (n={state.n})")


def apply_move(state: GameState, player: int, edge: tuple) -> GameState:
    if player != state.to_move:
        raise TurnError(f"{PLAYER_NAMES.get(player, player)} moved out of turn")
    if player == P1 and state.p1_stopped:
        raise TurnError("P1 cannot move after declaring stop")
    _validate_edge(state, edge)
    if edge in state.owners:
        raise IllegalMove(f"edge {edge_to_text(edge)} already claimed")
    owners = dict(state.owners)
    owners[edge] = player
    if state.p1_stopped:
        nxt = P2
    else:
        nxt = P2 if player == P1 else P1
    return GameState(
        kind=state.kind,
        n=state.n,
        owners=owners,
        history=state.history + ((player, edge),),
        to_move=nxt,
        p1_stopped=state.p1_stopped,
    )


def declare_stop(state: GameState) -> GameState:
    """P1 stops playing; P2 then moves alone until he completes his target."""
    if state.to_move != P1:
        raise TurnError("only P1 can stop, and only on his turn")
    if state.p1_stopped:
        raise TurnError("P1 already stopped")
    return GameState(
        kind=state.kind,
        n=state.n,
        owners=state.owners,
        history=state.history + (STOP,),
        to_move=P2,
        p1_stopped=True,
    )


def replay(kind: str, n: int, history: Iterable) -> GameState:
    state = new_board(kind, n)
    for item in history:
        if item == STOP:
            state = declare_stop(state)
        else:
            player, edge = item
            state = apply_move(state, player, edge)
    return state


# ---------------------------------------------------------------------------
# Degrees and freeness
# ---------------------------------------------------------------------------

def degree(state: GameState, player: int, v) -> int:
    count = 0
    for e, o in state.owners.items():
        if o == player and v in edge_vertices(e):
            count += 1
    return count


def is_p1_free_vertex(state: GameState, v) -> bool:
    return degree(state, P1, v) == 0


def is_free_vertex(state: GameState, v) -> bool:
    for e in state.owners:
        if v in edge_vertices(e):
            return False
    return True


def free_vertices(state: GameState, copy: Optional[int] = None,
                  excluded: Iterable = ()) -> list:
    """Free vertices in ascending ordinal order.

    For the graph board, restrict to one copy with ``copy``.  ``excluded``
    removes vertices that are reserved (e.g. virtually granted to P1) even
    though the board shows them untouched.
    """
    touched = state.touched_vertices()
    touched.update(excluded)
    if state.kind == TWO_CLIQUES:
        copies = (copy,) if copy is not None else (1, 2)
        return [(c, i) for c in copies for i in range(state.n)
                if (c, i) not in touched]
    return [i for i in range(state.n) if i not in touched]


def lowest_free_vertex(state: GameState, copy: Optional[int] = None,
                       excluded: Iterable = ()):
    free = free_vertices(state, copy, excluded)
    if not free:
        raise BoardTooSmall(
            f"no free vertex left on {state.kind} board with n={state.n}")
    return free[0]


# ---------------------------------------------------------------------------
# Canonical keys
# ---------------------------------------------------------------------------
#
# Two states map to the same key iff they differ by a relabeling of vertices
# that preserves copy identity, ownership and any pinned role assignment.
# Untouched vertices are interchangeable and never enter the ordering; only
# their per-copy counts are recorded.  The key is exact: colour refinement is
# followed by individualisation search over the (tiny) ambiguous cells.

def _copy_tag(state: GameState, v) -> int:
    return v[0] if state.kind == TWO_CLIQUES else 0


def _refine(colors: dict, incident: dict) -> dict:
    while True:
        sigs = {}
        for v, col in colors.items():
            nb = sorted(
                (owner, tuple(sorted(colors[u] for u in others)))
                for owner, others in incident[v]
            )
            sigs[v] = (col, tuple(nb))
        ranks = {s: i for i, s in enumerate(sorted(set(sigs.values())))}
        new = {v: ranks[s] for v, s in sigs.items()}
        if len(set(new.values())) == len(set(colors.values())):
            # No refinement progress; normalise and stop.
            return new
        colors = new


def _ordering_key(state: GameState, order: list) -> tuple:
    pos = {v: i for i, v in enumerate(order)}
    rows = []
    for e, o in state.owners.items():
        vs = edge_vertices(e)
        rows.append((tuple(sorted(pos[v] for v in vs)), o))
    rows.sort()
    return tuple(rows)


def _min_order(state: GameState, colors: dict) -> tuple:
    cells: dict = {}
    for v, c in colors.items():
        cells.setdefault(c, []).append(v)
    for vs in cells.values():
        vs.sort()
    cell_list = [cells[c] for c in sorted(cells)]
    if all(len(c) == 1 for c in cell_list):
        return _ordering_key(state, [c[0] for c in cell_list])

    incident = _incidence(state, colors.keys())
    best = None
    target = next(c for c in cell_list if len(c) > 1)

    for v in target:
        forked = dict(colors)
        # Individualise v just below its cell, preserving relative order.
        forked = {u: (col, 1 if u == v else 2) for u, col in forked.items()}
        ranks = {s: i for i, s in enumerate(sorted(set(forked.values())))}
        forked = {u: ranks[s] for u, s in forked.items()}
        refined = _refine(forked, incident)
        key = _min_order(state, refined)
        if best is None or key < best:
            best = key
    return best


def _incidence(state: GameState, vertices) -> dict:
    incident = {v: [] for v in vertices}
    for e, o in state.owners.items():
        vs = edge_vertices(e)
        for v in vs:
            others = tuple(u for u in vs if u != v)
            if v in incident:
                incident[v].append((o, others))
    return incident


def canonicalize(state: GameState, touched: Optional[set] = None,
                 pinned: Optional[dict] = None) -> bytes:
    """Relabeling-invariant fingerprint of a position.

    ``pinned`` maps vertices to role tags; pinned vertices are only
    interchangeable with vertices carrying the same tag.  ``touched`` must
    contain every vertex of nonzero degree (it defaults to exactly those).
    """
    pinned = pinned or {}
    if touched is None:
        touched = state.touched_vertices()
    else:
        touched = set(touched)
        need = state.touched_vertices()
        if not need <= touched:
            raise ValueError("touched must cover all vertices of nonzero degree")
    touched.update(pinned)

    colors = {v: (_copy_tag(state, v), str(pinned.get(v, ""))) for v in touched}
    ranks = {s: i for i, s in enumerate(sorted(set(colors.values())))}
    colors = {v: ranks[s] for v, s in colors.items()}
    incident = _incidence(state, touched)
    colors = _refine(colors, incident)
    edge_key = _min_order(state, colors) if touched else ()

    if state.kind == TWO_CLIQUES:
        untouched = tuple(
            state.n - sum(1 for v in touched if v[0] == c) for c in (1, 2))
    else:
        untouched = (state.n - len(touched),)
    payload = (state.kind, state.n, untouched, state.to_move,
               state.p1_stopped, edge_key)
    return repr(payload).encode()


def automorphism_count(edges: list) -> int:
    """Number of vertex permutations preserving an edge list (brute force).

    Test/verification helper for small graphs (used to cross-check copy
    counting); edges are 2-tuples over an implicit vertex set.
    """
    verts = sorted({v for e in edges for v in e})
    eset = {frozenset(e) for e in edges}
    count = 0
    for perm in permutations(verts):
        m = dict(zip(verts, perm))
        if {frozenset((m[a], m[b])) for a, b in edges} == eset:
            count += 1
    return count
