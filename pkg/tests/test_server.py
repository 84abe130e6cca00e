import json
import threading
import urllib.error
import urllib.request

import pytest

from ramseydraw.server import make_server


@pytest.fixture()
def bridge():
    srv = make_server(0)
    port = srv.server_address[1]
    thread = threading.Thread(target=srv.serve_forever, daemon=True)
    thread.start()
    yield f"http://127.0.0.1:{port}"
    srv.shutdown()
    srv.server_close()


def req(base, method, path, body=None):
    data = json.dumps(body).encode() if body is not None else None
    r = urllib.request.Request(base + path, data=data, method=method,
                               headers={"Content-Type": "application/json"})
    try:
        with urllib.request.urlopen(r, timeout=30) as resp:
            return resp.status, json.loads(resp.read())
    except urllib.error.HTTPError as exc:
        return exc.code, json.loads(exc.read())


def test_game_lifecycle(bridge):
    code, out = req(bridge, "POST", "/game", {"game": "graph", "n": 14})
    assert code == 200 and out["to_move"] == "P1"
    gid = out["id"]

    code, out = req(bridge, "POST", f"/game/{gid}/move",
                    {"edge": "g:1:0-1"})
    assert code == 200
    assert out["p2_moves"] == ["g:2:0-1"]
    assert out["case"] == "root"
    assert out["finished"] is False

    code, out = req(bridge, "GET", f"/game/{gid}/hints")
    assert code == 200
    assert "g:1:0-1" not in out["legal"]
    assert "g:1:0-2" in out["legal"]

    # Illegal move: structured error, state unchanged.
    code, out = req(bridge, "POST", f"/game/{gid}/move",
                    {"edge": "g:1:0-1"})
    assert code == 409 and "error" in out
    code, state = req(bridge, "GET", f"/game/{gid}/state")
    assert state["owners"]["g:1:0-1"] == "P1"
    assert len(state["owners"]) == 2

    # Stop: P2 finishes a copy and wins.
    code, out = req(bridge, "POST", f"/game/{gid}/move", {"edge": "stop"})
    assert code == 200
    assert out["finished"] is True and out["winner"] == "P2"
    assert len(out["p2_moves"]) >= 2

    code, state = req(bridge, "GET", f"/game/{gid}/state")
    assert state["winner"] == "P2"
    assert state["case_path"][0] == "root"


def test_unknown_game_id(bridge):
    code, out = req(bridge, "GET", "/game/doesnotexist/state")
    assert code == 404 and "error" in out
    code, out = req(bridge, "POST", "/game/doesnotexist/move",
                    {"edge": "g:1:0-1"})
    assert code == 404


def test_bad_requests(bridge):
    code, out = req(bridge, "POST", "/game", {"game": "chess"})
    assert code == 400
    code, out = req(bridge, "POST", "/game", {"game": "graph", "n": 14})
    gid = out["id"]
    code, out = req(bridge, "POST", f"/game/{gid}/move", {"no": "edge"})
    assert code == 400
    code, out = req(bridge, "POST", f"/game/{gid}/move",
                    {"edge": "garbage"})
    assert code == 409


def test_hyper_game_over_bridge(bridge):
    code, out = req(bridge, "POST", "/game", {"game": "hyper", "n": 12})
    gid = out["id"]
    code, out = req(bridge, "POST", f"/game/{gid}/move",
                    {"edge": "h:0-1-2-3"})
    assert code == 200 and out["p2_moves"] == ["h:4-5-6-7"]
    code, out = req(bridge, "POST", f"/game/{gid}/move", {"edge": "stop"})
    assert out["finished"] is True and out["winner"] == "P2"


def test_threat_markers_appear(bridge):
    code, out = req(bridge, "POST", "/game", {"game": "graph", "n": 14})
    gid = out["id"]
    # Build a P1 near-copy in his clique: threats must list the missing edge.
    moves = ["g:1:0-1", "g:1:0-2", "g:1:1-2", "g:1:0-3", "g:1:1-3",
             "g:1:0-4", "g:1:1-4", "g:1:1-5"]
    for m in moves:
        code, out = req(bridge, "POST", f"/game/{gid}/move", {"edge": m})
        assert code == 200
    # The blocking stage claims g:1:0-5 at once, so P1's threat is gone.
    code, state = req(bridge, "GET", f"/game/{gid}/state")
    assert state["owners"]["g:1:0-5"] == "P2"


def test_serve_and_play_share_golden_traces(bridge):
    """The bridge and the CLI drive the identical strategy code path."""
    from ramseydraw.verifier import Playout
    from ramseydraw import board as b
    code, out = req(bridge, "POST", "/game", {"game": "graph", "n": 14})
    gid = out["id"]
    script = ["g:1:0-1", "g:2:4-5", "g:2:0-2"]
    for m in script:
        req(bridge, "POST", f"/game/{gid}/move", {"edge": m})
    req(bridge, "POST", f"/game/{gid}/move", {"edge": "stop"})
    code, state = req(bridge, "GET", f"/game/{gid}/state")

    p = Playout(14)
    for m in script:
        p.p1_move(b.edge_from_text(m))
    p.p1_stop()
    assert state["trace"] == p.trace
