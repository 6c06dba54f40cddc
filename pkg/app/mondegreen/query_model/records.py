"""Voice query log records and the newline-delimited, tab-separated log format.

Field order on disk::

    user_id \\t timestamp \\t asr_source \\t asr_party(1P|3P) \\t locale \\t clicks \\t extended_interaction(0|1) \\t raw_text

Backslash, tab, newline and carriage return inside string fields are escaped as
``\\\\``, ``\\t``, ``\\n`` and ``\\r``.
"""
from __future__ import annotations

import re
from enum import Enum
from pathlib import Path
from typing import Iterable, Iterator, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from ..errors import InputFileError, LogParseError, RecordInvariantError
from ..utils import atomic_write, setup_logger
from .normalize import NormalizedQuery, normalize

logger = setup_logger(__name__)

FIELD_COUNT = 8
DEFAULT_LOCALE = "en-US"

_ESCAPES = {"\\": "\\\\", "\t": "\\t", "\n": "\\n", "\r": "\\r"}
_UNESCAPES = {"\\": "\\", "t": "\t", "n": "\n", "r": "\r"}
_ESCAPE_RE = re.compile(r"[\\\t\n\r]")
_UNESCAPE_RE = re.compile(r"\\(.?)", re.DOTALL)
_UINT_RE = re.compile(r"[0-9]+")


class AsrParty(str, Enum):
    FIRST_PARTY = "1P"
    THIRD_PARTY = "3P"


class QueryOutcome(str, Enum):
    """Outcome of one query occurrence: successful iff at least one click."""

    SUCCESSFUL = "successful"
    ABANDONED = "abandoned"

    @property
    def successful(self) -> bool:
        return self is QueryOutcome.SUCCESSFUL


class QueryLogRecord(BaseModel):
    """One voice query event with its click outcome and ASR source."""

    model_config = ConfigDict(frozen=True)

    user_id: str
    timestamp: int = Field(ge=0)
    raw_text: str
    asr_source: str
    asr_party: AsrParty
    locale: str = DEFAULT_LOCALE
    clicks: int = Field(default=0, ge=0)
    extended_interaction: bool = False

    @field_validator("raw_text")
    @classmethod
    def _has_text(cls, value: str) -> str:
        if not value.strip():
            raise ValueError("raw_text must contain a non-whitespace character")
        return value

    @model_validator(mode="after")
    def _interaction_needs_click(self) -> "QueryLogRecord":
        if self.extended_interaction and self.clicks < 1:
            raise ValueError("extended_interaction requires clicks >= 1")
        return self

    @property
    def successful(self) -> bool:
        return self.clicks >= 1

    @property
    def outcome(self) -> QueryOutcome:
        return QueryOutcome.SUCCESSFUL if self.clicks >= 1 else QueryOutcome.ABANDONED

    @property
    def query(self) -> NormalizedQuery:
        return normalize(self.raw_text)


def escape_field(value: str) -> str:
    return _ESCAPE_RE.sub(lambda m: _ESCAPES[m.group(0)], value)


def unescape_field(value: str, line_number: int | None = None) -> str:
    def replace(match: re.Match) -> str:
        code = match.group(1)
        if code not in _UNESCAPES:
            raise LogParseError(f"invalid escape sequence \\{code}", line_number, value)
        return _UNESCAPES[code]

    return _UNESCAPE_RE.sub(replace, value)


def write_log_line(record: QueryLogRecord) -> str:
    """Serialize a record to one log line (no trailing newline)."""
    return "\t".join(
        (
            escape_field(record.user_id),
            str(record.timestamp),
            escape_field(record.asr_source),
            record.asr_party.value,
            escape_field(record.locale),
            str(record.clicks),
            "1" if record.extended_interaction else "0",
            escape_field(record.raw_text),
        )
    )


def parse_log_line(line: str, line_number: int | None = None) -> QueryLogRecord:
    """Parse one log line; raises ``LogParseError`` with the line number on bad input."""
    fields = line.rstrip("\n").split("\t")
    if len(fields) != FIELD_COUNT:
        raise LogParseError(f"expected {FIELD_COUNT} tab-separated fields, got {len(fields)}", line_number, line)

    user_id, timestamp, asr_source, party, locale, clicks, extended, raw_text = fields
    if not _UINT_RE.fullmatch(timestamp):
        raise LogParseError(f"timestamp is not a non-negative integer: {timestamp!r}", line_number, line)
    if not _UINT_RE.fullmatch(clicks):
        raise LogParseError(f"clicks is not a non-negative integer: {clicks!r}", line_number, line)
    if extended not in ("0", "1"):
        raise LogParseError(f"extended_interaction must be 0 or 1, got {extended!r}", line_number, line)
    try:
        asr_party = AsrParty(party)
    except ValueError:
        raise LogParseError(f"asr_party must be 1P or 3P, got {party!r}", line_number, line) from None

    try:
        return QueryLogRecord(
            user_id=unescape_field(user_id, line_number),
            timestamp=int(timestamp),
            asr_source=unescape_field(asr_source, line_number),
            asr_party=asr_party,
            locale=unescape_field(locale, line_number),
            clicks=int(clicks),
            extended_interaction=extended == "1",
            raw_text=unescape_field(raw_text, line_number),
        )
    except ValidationError as exc:
        messages = "; ".join(err["msg"] for err in exc.errors())
        raise RecordInvariantError(messages, line_number, line) from exc


def iter_log_lines(lines: Iterable[str]) -> Iterator[QueryLogRecord]:
    for line_number, line in enumerate(lines, start=1):
        if not line.rstrip("\n"):
            continue
        yield parse_log_line(line, line_number)


def read_log(path: Union[str, Path]) -> list[QueryLogRecord]:
    """Read every record of a log file."""
    path = Path(path)
    if not path.exists():
        raise InputFileError(f"log file not found: {path}")
    # newline="\n": only LF terminates a record; CR inside text is escaped.
    with path.open("r", encoding="utf-8", newline="\n") as handle:
        records = list(iter_log_lines(handle))
    logger.info(f"Read {len(records)} records from {path}")
    return records


def write_log(path: Union[str, Path], records: Iterable[QueryLogRecord]) -> int:
    """Write records atomically; returns the number of lines written."""
    count = 0
    with atomic_write(path) as handle:
        for record in records:
            handle.write(write_log_line(record))
            handle.write("\n")
            count += 1
    logger.info(f"Wrote {count} records to {path}")
    return count


def sort_for_mining(records: Iterable[QueryLogRecord]) -> list[QueryLogRecord]:
    """Group by user and sort by timestamp, the order pair mining requires."""
    return sorted(records, key=lambda r: (r.user_id, r.timestamp))
