"""Canonical query text, log records and the log file format."""
from .normalize import NormalizedQuery, normalize
from .records import (
    DEFAULT_LOCALE,
    FIELD_COUNT,
    AsrParty,
    QueryLogRecord,
    QueryOutcome,
    parse_log_line,
    read_log,
    sort_for_mining,
    write_log,
    write_log_line,
)

__all__ = [
    "DEFAULT_LOCALE",
    "FIELD_COUNT",
    "AsrParty",
    "NormalizedQuery",
    "QueryLogRecord",
    "QueryOutcome",
    "normalize",
    "parse_log_line",
    "read_log",
    "sort_for_mining",
    "write_log",
    "write_log_line",
]
