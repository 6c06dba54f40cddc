"""Tests for the rewrite snapshot text format."""
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from app.mondegreen.errors import (
    DuplicateKeyError,
    SnapshotCorruptError,
    SnapshotMissingError,
    SnapshotVersionError,
)
from app.mondegreen.query_model import normalize
from app.mondegreen.trainer import (
    SNAPSHOT_VERSION,
    RewriteEntry,
    RewriteTable,
    SnapshotMetadata,
    TrainerConfig,
    dumps,
    loads,
    read_snapshot,
    train,
    write_snapshot,
)

HEADER = f"#version={SNAPSHOT_VERSION}\n#config: alpha=0.5\n#records=3\n#built=9\n"


def table_of(mapping):
    entries = {normalize(k): RewriteEntry(normalize(v), 3, 0.5) for k, v in mapping.items()}
    return RewriteTable(entries=entries, metadata=SnapshotMetadata(config="alpha=0.5", records=3, built=9))


def test_dumps_format():
    text = dumps(table_of({"rocks and": "roxanne"}))
    assert text == HEADER + "rocks and\troxanne\t3\t0.500000\n"


def test_file_round_trip(tmp_path):
    table = table_of({"rocks and": "roxanne", "how stores": "house tours"})
    path = tmp_path / "snap.tsv"
    write_snapshot(table, path)
    loaded = read_snapshot(path)
    assert loaded.entries == table.entries
    assert loaded.metadata.records == 3
    assert loaded.version.startswith(SNAPSHOT_VERSION + "@")
    assert dumps(loaded) == path.read_text(encoding="utf-8")


def test_queries_with_leading_hash_and_backslash_round_trip():
    table = table_of({"#1 hits": "number one hits", "a\\b": "ab"})
    assert loads(dumps(table)).entries == table.entries


def test_empty_snapshot(tmp_path, caplog):
    path = tmp_path / "empty.tsv"
    write_snapshot(RewriteTable(), path)
    table = read_snapshot(path)
    assert len(table) == 0
    assert "no entries" in caplog.text


def test_missing_snapshot(tmp_path):
    with pytest.raises(SnapshotMissingError):
        read_snapshot(tmp_path / "absent.tsv")


def test_duplicate_key():
    with pytest.raises(DuplicateKeyError):
        loads(HEADER + "rocks and\troxanne\t3\t0.500000\nrocks and\troxanne\t3\t0.500000\n")


def test_unsorted_entries():
    with pytest.raises(SnapshotCorruptError):
        loads(HEADER + "zebra\tabba\t3\t0.500000\nabba\tzebra\t3\t0.500000\n")


def test_version_mismatch():
    with pytest.raises(SnapshotVersionError):
        loads("#version=mondegreen-snapshot/2\nrocks and\troxanne\t3\t0.500000\n")


def test_missing_version():
    with pytest.raises(SnapshotCorruptError):
        loads("rocks and\troxanne\t3\t0.500000\n")


@pytest.mark.parametrize(
    "line",
    [
        "rocks and\troxanne\t3",
        "rocks and\troxanne\t0\t0.500000",
        "rocks and\troxanne\t3\t0.5",
        "rocks and\troxanne\t3\t1.500000",
        "Rocks And\troxanne\t3\t0.500000",
        "roxanne\troxanne\t3\t0.500000",
    ],
)
def test_corrupt_lines(line):
    with pytest.raises(SnapshotCorruptError) as info:
        loads(HEADER + line + "\n")
    assert info.value.line_number == 5


def test_unknown_headers_are_ignored():
    table = loads(HEADER + "#note: x\nrocks and\troxanne\t3\t0.500000\n")
    assert table.corrections() == {"rocks and": "roxanne"}


query_text = st.text(
    alphabet=st.characters(exclude_categories=("Cs", "Zs", "Zl", "Zp", "Cc")),
    min_size=1,
    max_size=12,
).map(lambda s: " ".join(s.lower().split())).filter(bool)


mappings = st.dictionaries(query_text, query_text, max_size=20)


def assert_text_round_trips(mapping):
    mapping = {k: v for k, v in mapping.items() if normalize(k) != normalize(v)}
    text = dumps(table_of(mapping))
    assert dumps(loads(text)) == text
    assert loads(text).corrections() == {str(normalize(k)): str(normalize(v)) for k, v in mapping.items()}


@settings(max_examples=200)
@given(mappings)
def test_snapshot_text_round_trip(mapping):
    assert_text_round_trips(mapping)


@pytest.mark.slow
@settings(max_examples=10_000, deadline=None)
@given(mappings)
def test_snapshot_text_round_trip_ten_thousand_tables(mapping):
    assert_text_round_trips(mapping)


def test_trained_snapshots_are_byte_identical(roxanne_corpus, lexicon, tmp_path):
    first, second = tmp_path / "a.tsv", tmp_path / "b.tsv"
    write_snapshot(train(roxanne_corpus, TrainerConfig(), lexicon).table, first)
    write_snapshot(train(roxanne_corpus, TrainerConfig(), lexicon).table, second)
    assert first.read_bytes() == second.read_bytes()


@pytest.mark.slow
def test_million_entry_snapshot_loads_quickly(tmp_path):
    import time

    entries = {normalize(f"query {i:07d}"): RewriteEntry(normalize(f"fix {i:07d}"), 5, 0.5) for i in range(1_000_000)}
    path = tmp_path / "big.tsv"
    write_snapshot(RewriteTable(entries=entries), path)
    start = time.perf_counter()
    table = read_snapshot(path)
    assert time.perf_counter() - start < 10
    assert len(table) == 1_000_000
