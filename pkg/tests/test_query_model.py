"""Tests for query normalization and the log record format."""
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from app.mondegreen.errors import EmptyQueryError, InputFileError, LogParseError, RecordInvariantError
from app.mondegreen.query_model import (
    AsrParty,
    NormalizedQuery,
    QueryLogRecord,
    QueryOutcome,
    normalize,
    parse_log_line,
    read_log,
    sort_for_mining,
    write_log,
    write_log_line,
)

from .conftest import make_record


def test_normalize_collapses_whitespace_and_lowercases():
    assert normalize("  Rocks   AND ") == "rocks and"


def test_normalize_keeps_punctuation_and_diacritics():
    assert normalize("Beyoncé  Halo!") == "beyoncé halo!"


def test_normalize_tabs_and_newlines():
    assert normalize("gaming\tchair\n") == "gaming chair"


@pytest.mark.parametrize("raw", ["", "   ", "\t\n"])
def test_normalize_rejects_blank(raw):
    with pytest.raises(EmptyQueryError):
        normalize(raw)


def test_normalized_query_rejects_non_canonical_text():
    with pytest.raises(ValueError):
        NormalizedQuery("Gaming Chair")


def test_normalized_query_words():
    assert normalize("best gaming mouse").words == ["best", "gaming", "mouse"]


@given(st.text(min_size=1).filter(lambda s: s.strip()))
def test_normalize_is_idempotent(raw):
    once = normalize(raw)
    assert normalize(once) == once
    assert normalize(str(once)) == once


def test_outcome_follows_clicks():
    assert make_record("u", 1, "roxanne", clicks=0).outcome is QueryOutcome.ABANDONED
    assert make_record("u", 1, "roxanne", clicks=2).outcome is QueryOutcome.SUCCESSFUL


def test_extended_interaction_requires_a_click():
    with pytest.raises(ValueError):
        make_record("u", 1, "roxanne", clicks=0, extended=True)


def test_record_rejects_blank_text():
    with pytest.raises(ValueError):
        make_record("u", 1, "   ")


def test_log_line_escapes_tabs_in_text():
    record = make_record("u1", 5, "tab\there", clicks=1)
    line = write_log_line(record)
    assert line.count("\t") == 7
    assert parse_log_line(line) == record


def test_parse_rejects_wrong_field_count():
    with pytest.raises(LogParseError) as info:
        parse_log_line("u1\t5\tasr\t3P", line_number=7)
    assert info.value.line_number == 7


def test_parse_rejects_bad_party():
    with pytest.raises(LogParseError):
        parse_log_line("u1\t5\tasr\t2P\ten-US\t0\t0\troxanne")


def test_parse_rejects_negative_timestamp():
    with pytest.raises(LogParseError):
        parse_log_line("u1\t-5\tasr\t3P\ten-US\t0\t0\troxanne")


def test_parse_reports_invariant_violations():
    with pytest.raises(RecordInvariantError):
        parse_log_line("u1\t5\tasr\t3P\ten-US\t0\t1\troxanne")


def test_parse_rejects_invalid_escape():
    with pytest.raises(LogParseError):
        parse_log_line("u1\t5\tasr\t3P\ten-US\t0\t0\tbad\\q")


_field_text = st.text(
    alphabet=st.characters(exclude_categories=("Cs",)),
    min_size=1,
    max_size=30,
)


@st.composite
def records(draw):
    clicks = draw(st.integers(min_value=0, max_value=50))
    return QueryLogRecord(
        user_id=draw(_field_text),
        timestamp=draw(st.integers(min_value=0, max_value=2**40)),
        raw_text=draw(_field_text.filter(lambda s: s.strip())),
        asr_source=draw(_field_text),
        asr_party=draw(st.sampled_from(list(AsrParty))),
        locale=draw(_field_text),
        clicks=clicks,
        extended_interaction=draw(st.booleans()) if clicks else False,
    )


def assert_line_round_trips(record):
    line = write_log_line(record)
    assert "\n" not in line
    assert parse_log_line(line) == record
    assert write_log_line(parse_log_line(line)) == line


@settings(max_examples=500)
@given(records())
def test_log_line_round_trip(record):
    assert_line_round_trips(record)


@pytest.mark.slow
@settings(max_examples=10_000, deadline=None)
@given(records())
def test_log_line_round_trip_ten_thousand_records(record):
    assert_line_round_trips(record)


def test_extended_interaction_is_written_as_one():
    record = QueryLogRecord(
        user_id="u1", timestamp=5, raw_text="roxanne", asr_source="asr",
        asr_party=AsrParty.THIRD_PARTY, locale="en-US", clicks=2, extended_interaction=True,
    )
    assert write_log_line(record).split("\t")[6] == "1"
    assert_line_round_trips(record)


def test_log_file_round_trip(tmp_path, roxanne_corpus):
    path = tmp_path / "logs.tsv"
    assert write_log(path, roxanne_corpus) == len(roxanne_corpus)
    assert read_log(path) == roxanne_corpus


def test_read_log_missing_file(tmp_path):
    with pytest.raises(InputFileError):
        read_log(tmp_path / "missing.tsv")


def test_read_log_reports_line_number(tmp_path):
    path = tmp_path / "logs.tsv"
    path.write_text(write_log_line(make_record("u", 1, "roxanne")) + "\nnot a record\n", encoding="utf-8")
    with pytest.raises(LogParseError) as info:
        read_log(path)
    assert info.value.line_number == 2


def test_sort_for_mining_groups_users():
    shuffled = [
        make_record("b", 5, "x"),
        make_record("a", 9, "y"),
        make_record("b", 1, "z"),
        make_record("a", 2, "w"),
    ]
    ordered = sort_for_mining(shuffled)
    assert [(r.user_id, r.timestamp) for r in ordered] == [("a", 2), ("a", 9), ("b", 1), ("b", 5)]
