"""HTTP+JSON bridge between the engine and the web playground.

Endpoints (all JSON):

  POST /game                {"game": "graph"|"hyper", "n": int} -> {"id", "to_move", ...}
  POST /game/{id}/move      {"edge": "<edge text>" | "stop"}
  GET  /game/{id}/state     full board, trace and annotations
  GET  /game/{id}/hints     legal P1 edges

The bridge holds games in memory with idle eviction; requests for one game
id are serialised, distinct ids run concurrently.  It drives exactly the
same strategy code path as the CLI ``play`` command.
"""

from __future__ import annotations

import json
import threading
import time
import uuid
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

from . import verifier
from .board import (P1, P2, BoardTooSmall, IllegalMove, TurnError,
                    edge_from_text, edge_to_text)
from .lemmas import PotentialBaseWitness
from .patterns import threats

IDLE_EVICT_SECONDS = 1800


class GameSession:
    def __init__(self, game: str, n: int):
        self.playout = verifier.Playout(n, game=game, checks=True)
        self.game = game
        self.n = n
        self.lock = threading.Lock()
        self.touched = time.time()
        self.error = None

    def to_move(self) -> str:
        if self.playout.done or self.playout.truncated:
            return "none"
        return "P1"

    def _potential_base(self):
        ss = self.playout.ss
        if self.game != "graph" or ss is None:
            return None
        wit = getattr(ss, "witness", None)
        if isinstance(wit, PotentialBaseWitness):
            from .board import graph_edge_v
            return {"edge": edge_to_text(graph_edge_v(*wit.base)),
                    "special": list(wit.special)}
        return None

    def _threats(self):
        state = self.playout.state
        out = {}
        for player, name in ((P1, "P1"), (P2, "P2")):
            try:
                out[name] = sorted({edge_to_text(e)
                                    for e, _ in threats(state, player)})
            except Exception:
                out[name] = []
        return out

    def _ledger(self):
        ss = self.playout.ss
        if self.game == "graph" and ss is not None and ss.ledger:
            return {"k": ss.ledger[0], "l": ss.ledger[1]}
        return None

    def _case_path(self):
        return [rec["case"] for rec in self.playout.trace
                if rec["player"] == "P2" and rec["case"]]

    def state_payload(self):
        p = self.playout
        return {
            "game": self.game, "n": self.n,
            "to_move": self.to_move(),
            "owners": {edge_to_text(e): ("P1" if o == P1 else "P2")
                       for e, o in p.state.owners.items()},
            "trace": p.trace,
            "case_path": self._case_path(),
            "case": next((rec["case"] for rec in reversed(p.trace)
                          if rec["player"] == "P2" and rec["case"]), None),
            "ledger": self._ledger(),
            "threats": self._threats(),
            "potential_base": self._potential_base(),
            "finished": bool(p.done or p.truncated),
            "winner": p.winner,
            "truncated": p.truncated,
            "p1_stopped": p.state.p1_stopped,
        }

    def move(self, edge_text: str):
        p = self.playout
        before = len(p.trace)
        if edge_text == "stop":
            p.p1_stop()
        else:
            p.p1_move(edge_from_text(edge_text))
        new = p.trace[before:]
        return {
            "p2_moves": [rec["edge"] for rec in new
                         if rec["player"] == "P2"],
            "case": next((rec["case"] for rec in reversed(new)
                          if rec["player"] == "P2"), None),
            "ledger": self._ledger(),
            "threats": self._threats(),
            "potential_base": self._potential_base(),
            "finished": bool(p.done or p.truncated),
            "winner": p.winner,
        }


class Bridge:
    def __init__(self, default_n: int = 14):
        self.games = {}
        self.lock = threading.Lock()
        self.default_n = default_n

    def evict_idle(self):
        now = time.time()
        with self.lock:
            stale = [gid for gid, s in self.games.items()
                     if now - s.touched > IDLE_EVICT_SECONDS]
            for gid in stale:
                del self.games[gid]

    def create(self, game: str, n: int) -> str:
        session = GameSession(game, n)
        gid = uuid.uuid4().hex[:12]
        with self.lock:
            self.games[gid] = session
        return gid

    def get(self, gid: str):
        self.evict_idle()
        with self.lock:
            session = self.games.get(gid)
        if session:
            session.touched = time.time()
        return session


def make_handler(bridge: Bridge):
    class Handler(BaseHTTPRequestHandler):
        def log_message(self, *args):
            pass

        def _reply(self, code: int, payload):
            body = json.dumps(payload).encode()
            self.send_response(code)
            self.send_header("Content-Type", "application/json")
            self.send_header("Access-Control-Allow-Origin", "*")
            self.send_header("Access-Control-Allow-Headers", "Content-Type")
            self.send_header("Access-Control-Allow-Methods",
                             "GET, POST, OPTIONS")
            self.send_header("Content-Length", str(len(body)))
            self.end_headers()
            self.wfile.write(body)

        def do_OPTIONS(self):
            self._reply(200, {})

        def _body(self):
            length = int(self.headers.get("Content-Length") or 0)
            if not length:
                return {}
            return json.loads(self.rfile.read(length) or b"{}")

        def do_POST(self):
            parts = [p for p in self.path.split("/") if p]
            try:
                body = self._body()
            except json.JSONDecodeError:
                self._reply(400, {"error": "bad JSON body"})
                return
            if parts == ["game"]:
                game = body.get("game", "graph")
                n = int(body.get("n", bridge.default_n))
                if game not in ("graph", "hyper"):
                    self._reply(400, {"error": f"unknown game {game!r}"})
                    return
                try:
                    gid = bridge.create(game, n)
                except Exception as exc:
                    self._reply(400, {"error": str(exc)})
                    return
                self._reply(200, {"id": gid, "to_move": "P1",
                                  "game": game, "n": n})
                return
            if len(parts) == 3 and parts[0] == "game" and parts[2] == "move":
                session = bridge.get(parts[1])
                if session is None:
                    self._reply(404, {"error": f"no game {parts[1]!r}"})
                    return
                edge = body.get("edge")
                if not isinstance(edge, str):
                    self._reply(400, {"error": "move needs an 'edge' string"})
                    return
                with session.lock:
                    try:
                        payload = session.move(edge)
                    except (IllegalMove, TurnError) as exc:
                        self._reply(409, {"error": str(exc)})
                        return
                    except BoardTooSmall as exc:
                        self._reply(200, {"finding": str(exc),
                                          "finished": True, "winner": None})
                        return
                    except verifier.Violation as exc:
                        self._reply(500, {"error": f"violation: {exc}"})
                        return
                self._reply(200, payload)
                return
            self._reply(404, {"error": f"no such endpoint {self.path!r}"})

        def do_GET(self):
            parts = [p for p in self.path.split("/") if p]
            if len(parts) == 3 and parts[0] == "game":
                session = bridge.get(parts[1])
                if session is None:
                    self._reply(404, {"error": f"no game {parts[1]!r}"})
                    return
                with session.lock:
                    if parts[2] == "state":
                        self._reply(200, session.state_payload())
                        return
                    if parts[2] == "hints":
                        legal = [edge_to_text(e) for e
                                 in session.playout.legal_p1_edges()]
                        self._reply(200, {"legal": legal,
                                          "to_move": session.to_move()})
                        return
            self._reply(404, {"error": f"no such endpoint {self.path!r}"})

    return Handler


def make_server(port: int, default_n: int = 14) -> ThreadingHTTPServer:
    bridge = Bridge(default_n=default_n)
    return ThreadingHTTPServer(("127.0.0.1", port), make_handler(bridge))


def serve(port: int, default_n: int = 14):
    httpd = make_server(port, default_n)
    print(json.dumps({"event": "serving", "port": httpd.server_address[1]}),
          flush=True)
    try:
        httpd.serve_forever()
    finally:
        httpd.server_close()
