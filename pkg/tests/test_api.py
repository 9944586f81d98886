import pytest
from fastapi.testclient import TestClient

from app.api import routes
from app.main import app


@pytest.fixture
def client(temp_db, monkeypatch):
    monkeypatch.setattr(routes, "API_KEY", "")
    with TestClient(app) as c:
        yield c


def _generate(client, family: str, params: dict, seed=None) -> dict:
    resp = client.post("/api/generate", json={"family": family, "params": params, "seed": seed})
    assert resp.status_code == 200, resp.text
    return resp.json()


# --- Service ---

def test_root(client):
    card = client.get("/").json()
    assert card["service"] == "tracklayout"
    assert set(card["oracle_limits"]) == {"queue-number", "track-number", "pathwidth", "treewidth"}


def test_api_key_required(client, monkeypatch):
    monkeypatch.setattr(routes, "API_KEY", "secret")
    body = {"family": "path", "params": {"n": 3}}
    assert client.post("/api/generate", json=body).status_code == 401
    assert client.post("/api/generate", json=body, headers={"X-API-Key": "secret"}).status_code == 200


# --- Pipeline ---

def test_generate(client):
    env = _generate(client, "complete", {"n": 4})
    assert env["graph"]["n"] == 4
    assert len(env["graph"]["edges"]) == 6


def test_generate_bad_params(client):
    resp = client.post("/api/generate", json={"family": "tree", "params": {"n": 5}})
    assert resp.status_code == 400
    assert resp.json()["detail"]["error"] == "BadParams"


def test_track_then_queue(client):
    env = _generate(client, "ktree", {"k": 2, "n": 50}, seed=3)
    resp = client.post("/api/layout/track", json={"envelope": env})
    assert resp.status_code == 200, resp.text
    env = resp.json()
    assert len(env["track_layout"]["tracks"]) <= 54
    assert env["reports"]["track_layout"]["ok"]

    resp = client.post("/api/layout/queue", json={"envelope": env})
    assert resp.status_code == 200
    env = resp.json()
    assert len(env["queue_layout"]["queues"]) <= len(env["track_layout"]["tracks"]) - 1


def test_unknown_layout_kind(client):
    env = _generate(client, "path", {"n": 3})
    assert client.post("/api/layout/book", json={"envelope": env}).status_code == 404


def test_not_a_ktree(client):
    env = _generate(client, "cycle", {"n": 5})
    resp = client.post("/api/layout/track", json={"envelope": env, "method": "ktree"})
    assert resp.status_code == 400
    assert resp.json()["detail"]["error"] == "NotKTree"


def test_draw_balanced(client):
    env = _generate(client, "tree", {"n": 40}, seed=1)
    resp = client.post("/api/draw/balanced", json={"envelope": env})
    assert resp.status_code == 200
    drawing = resp.json()["drawing"]
    assert len(drawing["points"]) == 40
    assert min(c for p in drawing["points"] for c in p) == 0


def test_unknown_draw_method(client):
    env = _generate(client, "path", {"n": 3})
    assert client.post("/api/draw/spiral", json={"envelope": env}).status_code == 404


def test_invalid_envelope(client):
    resp = client.post("/api/layout/track", json={"envelope": {"graph": {"n": 2, "edges": [[0, 0]]}}})
    assert resp.status_code == 400
    assert resp.json()["detail"]["error"] == "InvalidGraph"


def test_verify_missing_artifact(client):
    env = _generate(client, "path", {"n": 3})
    resp = client.post("/api/verify/drawing", json={"envelope": env})
    assert resp.status_code == 400


def test_verify_reports_failure(client):
    env = {"graph": {"n": 4, "edges": [[0, 2], [1, 3]]}, "track_layout": {"tracks": [[0, 1], [3, 2]]}}
    resp = client.post("/api/verify/track", json={"envelope": env})
    assert resp.status_code == 200
    assert resp.json()["ok"] is False


def test_oracle(client):
    env = _generate(client, "complete", {"n": 4})
    resp = client.post("/api/oracle/queue-number", json={"envelope": env})
    assert resp.status_code == 200
    assert resp.json()["value"] == 2


def test_oracle_too_large(client):
    env = _generate(client, "path", {"n": 6})
    resp = client.post("/api/oracle/treewidth", json={"envelope": env, "limit": 4})
    assert resp.status_code == 413
    assert resp.json()["detail"]["error"] == "TooLarge"


# --- Runs ---

def test_stats_runs_crud(client):
    env = _generate(client, "grid", {"rows": 4, "cols": 4})
    env = client.post("/api/layout/track", json={"envelope": env, "method": "grid"}).json()
    resp = client.post("/api/stats", json={"envelope": env, "label": "grid"})
    assert resp.status_code == 200
    row = resp.json()
    assert row["tracks"] <= 3
    run_id = row["id"]

    runs = client.get("/api/runs", params={"family": "grid"}).json()
    assert [r["id"] for r in runs] == [run_id]
    stored = client.get(f"/api/runs/{run_id}").json()
    assert stored["label"] == "grid"
    assert stored["row"]["tracks"] == row["tracks"]
    assert stored["verified"] is True

    assert client.delete(f"/api/runs/{run_id}").json() == {"deleted": run_id}
    assert client.get(f"/api/runs/{run_id}").status_code == 404
    assert client.delete(f"/api/runs/{run_id}").status_code == 404
