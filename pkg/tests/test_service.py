"""HTTP session service: endpoints, versions, optimistic concurrency."""

from __future__ import annotations

import numpy as np
import pytest
from fastapi.testclient import TestClient

from terraseg.dataset import export_dataset
from terraseg.service import create_app
from terraseg.session import Session, SessionStore
from terraseg.synthetic import benchmark_dataset


@pytest.fixture(scope="module")
def fixture_bytes(tmp_path_factory):
    dataset, _ = benchmark_dataset()
    path = tmp_path_factory.mktemp("svc") / "fixture.csv"
    export_dataset(dataset, path)
    return path.read_bytes()


@pytest.fixture
def client(tmp_path):
    store = SessionStore(tmp_path / "sessions")
    app = create_app(store)
    with TestClient(app) as c:
        c.store = store
        yield c


def create(client, fixture_bytes) -> str:
    resp = client.post("/sessions", files={"file": ("fixture.csv", fixture_bytes, "text/csv")})
    assert resp.status_code == 201
    body = resp.json()
    assert body["version"] == 1
    return body["id"]


def test_create_session_and_dendrogram(client, fixture_bytes):
    sid = create(client, fixture_bytes)
    tree = client.get(f"/sessions/{sid}/dendrogram").json()
    assert tree["n"] == 366
    assert len(tree["merges"]) == 365
    assert tree["version"] == 1


def test_cut_sixteen_groups(client, fixture_bytes):
    sid = create(client, fixture_bytes)
    resp = client.post(f"/sessions/{sid}/cut", json={"mode": "by-count", "value": 16})
    assert resp.status_code == 200
    body = resp.json()
    assert body["version"] == 2
    assert body["n_groups"] == 16
    assignment = client.get(f"/sessions/{sid}/assignment").json()
    groups = {e["group"] for e in assignment["entities"]}
    assert len(groups) == 16


def test_override_appends_one_ledger_entry_and_replays(client, fixture_bytes):
    sid = create(client, fixture_bytes)
    client.post(f"/sessions/{sid}/cut", json={"mode": "by-count", "value": 3,
                                              "mapping": {0: "Ia", 1: "IIa", 2: "IIIa"}})
    assignment = client.get(f"/sessions/{sid}/assignment").json()
    version = assignment["version"]
    target = next(e["id"] for e in assignment["entities"] if e["label"] == "IIa")
    resp = client.post(
        f"/sessions/{sid}/overrides",
        json={"target": target, "to_label": "Ia", "rationale": "city hierarchy",
              "base_version": version},
    )
    assert resp.status_code == 200
    assert resp.json()["ledger_length"] == 1
    ledger = client.get(f"/sessions/{sid}/overrides").json()["entries"]
    assert len(ledger) == 1
    assert ledger[0]["target"] == target
    assert ledger[0]["from_label"] == "IIa"
    # Replay server-side state and compare with the served assignment.
    session = client.store.get(sid)
    from terraseg.taxonomy import replay_ledger

    assert replay_ledger(session.taxonomy).effective == session.taxonomy.effective


def test_concurrent_overrides_conflict(client, fixture_bytes):
    sid = create(client, fixture_bytes)
    client.post(f"/sessions/{sid}/cut", json={"mode": "by-count", "value": 2,
                                              "mapping": {0: "Ia", 1: "IIb"}})
    version = client.get(f"/sessions/{sid}/assignment").json()["version"]
    entities = client.get(f"/sessions/{sid}/assignment").json()["entities"]
    first, second = entities[0]["id"], entities[1]["id"]
    ok = client.post(
        f"/sessions/{sid}/overrides",
        json={"target": first, "to_label": "IIb", "rationale": "a", "base_version": version},
    )
    stale = client.post(
        f"/sessions/{sid}/overrides",
        json={"target": second, "to_label": "Ia", "rationale": "b", "base_version": version},
    )
    assert ok.status_code == 200
    assert stale.status_code == 409
    retry = client.post(
        f"/sessions/{sid}/overrides",
        json={"target": second, "to_label": "Ia", "rationale": "b",
              "base_version": ok.json()["version"]},
    )
    assert retry.status_code == 200


def test_versions_strictly_increase(client, fixture_bytes):
    sid = create(client, fixture_bytes)
    versions = [1]
    versions.append(client.post(f"/sessions/{sid}/cut", json={"mode": "by-count", "value": 5}).json()["version"])
    versions.append(client.put(f"/sessions/{sid}/weights", json={"w": [1.0 / 15] * 15}).json()["version"])
    assignment = client.get(f"/sessions/{sid}/assignment").json()
    target = assignment["entities"][0]["id"]
    versions.append(
        client.post(
            f"/sessions/{sid}/overrides",
            json={"target": target, "to_label": "G1", "rationale": "r",
                  "base_version": versions[-1]},
        ).json()["version"]
    )
    assert versions == sorted(versions)
    assert len(set(versions)) == len(versions)


def test_one_hot_weights_match_complemented_column(client, fixture_bytes):
    sid = create(client, fixture_bytes)
    w = [0.0] * 15
    w[0] = 1.0  # x1
    client.put(f"/sessions/{sid}/weights", json={"w": w})
    indicator = client.get(f"/sessions/{sid}/indicator").json()
    session = client.store.get(sid)
    for row in indicator["values"][:5]:
        pos = session.dataset.index_of_id(row["id"])
        assert row["nl2"] == pytest.approx(session.complemented.z[pos, 0], abs=1e-12)


def test_bad_weights_rejected(client, fixture_bytes):
    sid = create(client, fixture_bytes)
    resp = client.put(f"/sessions/{sid}/weights", json={"w": [0.5] * 15})
    assert resp.status_code == 400


def test_unknown_session_404(client):
    assert client.get("/sessions/doesnotexist/assignment").status_code == 404


def test_unknown_entity_override_404(client, fixture_bytes):
    sid = create(client, fixture_bytes)
    resp = client.post(
        f"/sessions/{sid}/overrides",
        json={"target": 99999, "to_label": "G0", "rationale": "r", "base_version": 1},
    )
    assert resp.status_code == 404


def test_malformed_cut_400(client, fixture_bytes):
    sid = create(client, fixture_bytes)
    assert client.post(f"/sessions/{sid}/cut", json={"mode": "sideways", "value": 3}).status_code == 400
    assert client.post(f"/sessions/{sid}/cut", json={"mode": "by-count", "value": 0}).status_code == 400


def test_charts_and_export(client, fixture_bytes):
    sid = create(client, fixture_bytes)
    client.post(f"/sessions/{sid}/cut", json={"mode": "by-count", "value": 7})
    for kind in ("dendrogram", "nl2-scatter", "radial", "boxplot"):
        resp = client.get(f"/sessions/{sid}/charts/{kind}.svg")
        assert resp.status_code == 200
        assert resp.headers["content-type"].startswith("image/svg+xml")
        assert resp.content.startswith(b"<?xml")
    export = client.get(f"/sessions/{sid}/export.csv")
    lines = export.text.splitlines()
    assert lines[0] == "id,name,label,nl2"
    assert len(lines) == 367


def test_stats_endpoint(client, fixture_bytes):
    sid = create(client, fixture_bytes)
    client.post(f"/sessions/{sid}/cut", json={"mode": "by-count", "value": 4})
    stats = client.get(f"/sessions/{sid}/stats").json()
    assert stats["partition"]["total_entities"] == 366
    assert len(stats["category_stats"]["labels"]) == 4


def test_session_persistence_round_trip(client, fixture_bytes, tmp_path):
    sid = create(client, fixture_bytes)
    client.post(f"/sessions/{sid}/cut", json={"mode": "by-count", "value": 3})
    store: SessionStore = client.store
    session = store.get(sid)
    reloaded = Session.from_dict(
        __import__("json").loads(store._path(sid).read_text(encoding="utf-8"))
    )
    assert reloaded.version == session.version
    assert reloaded.taxonomy.effective == session.taxonomy.effective
    assert reloaded.tree == session.tree
    assert np.allclose(reloaded.complemented.z, session.complemented.z)
