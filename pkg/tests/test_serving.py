"""Tests for the correction service and its HTTP routes."""
import threading

import pytest
from fastapi.testclient import TestClient
from pydantic import ValidationError

from app.mondegreen.errors import EmptyQueryError, SnapshotMissingError
from app.mondegreen.query_model import normalize
from app.mondegreen.serving import (
    CorrectionResponse,
    CorrectionService,
    ServingStats,
    correct,
    create_app,
    load_snapshot,
    trigger_rate,
)
from app.mondegreen.trainer import RewriteEntry, RewriteTable, SnapshotMetadata, write_snapshot


def table_of(mapping, digest="abc"):
    entries = {normalize(k): RewriteEntry(normalize(v), 4, 0.5) for k, v in mapping.items()}
    return RewriteTable(entries=entries, metadata=SnapshotMetadata(digest=digest))


@pytest.fixture
def table():
    return table_of({"rocks and": "roxanne", "how stores": "house tours"})


def test_hit_returns_correction(table):
    response = correct("  Rocks AND ", table)
    assert response.triggered
    assert response.corrected == "roxanne"
    assert response.normalized == "rocks and"
    assert response.original == "  Rocks AND "
    assert response.table_version == table.version


def test_miss_passes_through(table):
    response = correct("Roxanne", table)
    assert not response.triggered
    assert response.corrected is None
    assert response.normalized == "roxanne"


@pytest.mark.parametrize("raw", ["", "   "])
def test_empty_query(table, raw):
    with pytest.raises(EmptyQueryError):
        correct(raw, table)


def test_response_rejects_inconsistent_trigger():
    with pytest.raises(ValidationError):
        CorrectionResponse(original="x", normalized="x", corrected="y", triggered=False, table_version="v")
    with pytest.raises(ValidationError):
        CorrectionResponse(original="x", normalized="x", corrected="x", triggered=True, table_version="v")


def test_empty_service_passes_everything_through():
    service = CorrectionService()
    assert not service.ready
    assert not service.correct("rocks and").triggered


def test_swap_returns_previous_table(table):
    service = CorrectionService(table)
    replacement = table_of({"look out music": "work out music"}, digest="def")
    assert service.swap_snapshot(replacement) is table
    assert service.table is replacement
    assert not service.correct("rocks and").triggered
    assert service.correct("look out music").corrected == "work out music"


def test_lookups_during_swaps_see_one_version_each():
    old = table_of({"rocks and": "roxanne"}, digest="old")
    new = table_of({"rocks and": "rocks and roll"}, digest="new")
    expected = {"old": "roxanne", "new": "rocks and roll"}
    service = CorrectionService(old)
    mismatches = []
    stop = threading.Event()

    def reader():
        while not stop.is_set():
            response = service.correct("rocks and")
            version = response.table_version.split("@")[1]
            if response.corrected != expected[version]:
                mismatches.append(response)

    threads = [threading.Thread(target=reader) for _ in range(4)]
    for thread in threads:
        thread.start()
    for i in range(200):
        service.swap_snapshot(new if i % 2 == 0 else old)
    stop.set()
    for thread in threads:
        thread.join()
    assert mismatches == []


def test_stats_and_trigger_rate(table):
    assert trigger_rate(ServingStats()) is None
    service = CorrectionService(table)
    assert service.trigger_rate() is None
    service.correct("rocks and")
    service.correct("roxanne")
    service.correct("how stores")
    service.correct("house tours")
    assert service.stats.snapshot() == (4, 2)
    assert service.trigger_rate() == pytest.approx(50.0)


def test_load_snapshot_versions_by_file_digest(tmp_path):
    path = write_snapshot(table_of({"rocks and": "roxanne"}), tmp_path / "snap.tsv")
    loaded = load_snapshot(path)
    assert loaded.version.startswith("mondegreen-snapshot/1@")
    assert loaded.version == load_snapshot(path).version
    assert correct("rocks and", loaded).corrected == "roxanne"


def test_reload_rejects_missing_file_and_keeps_table(table, tmp_path):
    service = CorrectionService(table)
    with pytest.raises(SnapshotMissingError):
        service.reload(tmp_path / "absent.tsv")
    assert service.table is table


@pytest.fixture
def client(table):
    return TestClient(create_app(CorrectionService(table)))


def test_correct_route(client):
    body = client.get("/v1/correct", params={"q": "Rocks And"}).json()
    assert body["corrected"] == "roxanne"
    assert body["triggered"] is True
    assert body["original"] == "Rocks And"


def test_correct_route_rejects_empty_query(client):
    assert client.get("/v1/correct", params={"q": "  "}).status_code == 400
    assert client.get("/v1/correct").status_code == 400


def test_reload_route(client, tmp_path):
    path = write_snapshot(table_of({"how stores": "house tours"}), tmp_path / "snap.tsv")
    response = client.post("/v1/reload", json={"path": str(path)})
    assert response.status_code == 200
    assert response.json()["entries"] == 1
    assert client.get("/v1/correct", params={"q": "rocks and"}).json()["triggered"] is False


def test_reload_route_rejects_bad_snapshot(client, tmp_path):
    assert client.post("/v1/reload", json={"path": str(tmp_path / "absent.tsv")}).status_code == 409
    corrupt = tmp_path / "corrupt.tsv"
    corrupt.write_text("#version=mondegreen-snapshot/1\nrocks and\n", encoding="utf-8")
    assert client.post("/v1/reload", json={"path": str(corrupt)}).status_code == 409
    assert client.get("/v1/correct", params={"q": "rocks and"}).json()["corrected"] == "roxanne"


def test_healthz():
    assert TestClient(create_app(CorrectionService())).get("/healthz").status_code == 503
    assert TestClient(create_app(CorrectionService(RewriteTable()))).get("/healthz").status_code == 200


def test_stats_route(client):
    assert client.get("/v1/stats").json() == {"total": 0, "triggered": 0, "trigger_rate_pct": None}
    client.get("/v1/correct", params={"q": "rocks and"})
    client.get("/v1/correct", params={"q": "roxanne"})
    assert client.get("/v1/stats").json() == {"total": 2, "triggered": 1, "trigger_rate_pct": 50.0}


@pytest.mark.slow
def test_lookup_p99_under_a_millisecond_on_a_million_entries():
    import time

    import numpy as np

    entries = {normalize(f"query {i:07d}"): RewriteEntry(normalize(f"fix {i:07d}"), 5, 0.5) for i in range(1_000_000)}
    service = CorrectionService(RewriteTable(entries=entries))
    rng = np.random.default_rng(8)
    ids = rng.integers(0, 2_000_000, size=100_000)
    queries = [f"Query {i:07d}" for i in ids.tolist()]

    elapsed = np.empty(len(queries))
    for n, query in enumerate(queries):
        start = time.perf_counter()
        service.correct(query)
        elapsed[n] = time.perf_counter() - start

    total, hits = service.stats.snapshot()
    assert total == 100_000
    assert 0.4 < hits / total < 0.6
    assert np.percentile(elapsed, 99) < 1e-3
