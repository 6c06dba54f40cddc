"""Canonical text form of the rewrite table.

::

    #version=mondegreen-snapshot/1
    #config: alpha=0.5 beta=0.2 tau=2 t=60 min_count=5 ...
    #records=123456
    #built=1600003600
    query \\t correction \\t pair_count \\t ratio

Entries are sorted by query and unique. Backslashes in queries are escaped as in
the log format and a leading ``#`` is written as ``\\#``.
"""
from __future__ import annotations

import hashlib
import re
from pathlib import Path
from typing import Union

from ..errors import DuplicateKeyError, SnapshotCorruptError, SnapshotMissingError, SnapshotVersionError
from ..query_model import NormalizedQuery
from ..query_model.records import escape_field, unescape_field
from ..utils import atomic_write, setup_logger
from .rewrite import RATIO_DIGITS, SNAPSHOT_VERSION, RewriteEntry, RewriteTable, SnapshotMetadata

logger = setup_logger(__name__)

DIGEST_LENGTH = 12
_COUNT_RE = re.compile(r"[1-9][0-9]*")
_RATIO_RE = re.compile(r"[0-9]\.[0-9]{%d}" % RATIO_DIGITS)


def _escape_query(text: str) -> str:
    escaped = escape_field(text)
    return "\\" + escaped if escaped.startswith("#") else escaped


def _unescape_query(text: str, line_number: int) -> str:
    if "\\" not in text:
        return text
    if text.startswith("\\#"):
        return "#" + unescape_field(text[2:], line_number)
    return unescape_field(text, line_number)


def dumps(table: RewriteTable) -> str:
    """Serialize a table; identical tables give identical text."""
    meta = table.metadata
    lines = [
        f"#version={meta.version}",
        f"#config: {meta.config}",
        f"#records={meta.records}",
        f"#built={meta.built}",
    ]
    for query in sorted(table.entries):
        entry = table.entries[query]
        lines.append(
            f"{_escape_query(query)}\t{_escape_query(entry.correction)}\t{entry.pair_count}\t{entry.ratio:.{RATIO_DIGITS}f}"
        )
    return "\n".join(lines) + "\n"


def write_snapshot(table: RewriteTable, path: Union[str, Path]) -> Path:
    """Write atomically: readers never see a partially written snapshot."""
    path = Path(path)
    with atomic_write(path) as handle:
        handle.write(dumps(table))
    logger.info(f"Wrote snapshot with {len(table)} entries to {path}")
    return path


def _parse_header(line: str, meta: dict, line_number: int) -> None:
    body = line[1:]
    if body.startswith("config:"):
        meta["config"] = body[len("config:"):].strip()
        return
    key, sep, value = body.partition("=")
    if not sep:
        key, sep, value = body.partition(":")
    key, value = key.strip(), value.strip()
    if key == "version":
        meta["version"] = value
    elif key in ("records", "built"):
        if not value.isdigit():
            raise SnapshotCorruptError(f"header {key} is not an integer: {value!r}", line_number)
        meta[key] = int(value)
    else:
        logger.debug(f"Ignoring unknown snapshot header {key!r}")


def _parse_entry(line: str, line_number: int) -> tuple[NormalizedQuery, RewriteEntry]:
    fields = line.split("\t")
    if len(fields) != 4:
        raise SnapshotCorruptError(f"expected 4 tab-separated fields, got {len(fields)}", line_number)
    raw_query, raw_correction, count, ratio = fields
    if not _COUNT_RE.fullmatch(count):
        raise SnapshotCorruptError(f"pair_count is not a positive integer: {count!r}", line_number)
    if not _RATIO_RE.fullmatch(ratio):
        raise SnapshotCorruptError(f"ratio is not a {RATIO_DIGITS}-decimal number: {ratio!r}", line_number)
    ratio_value = float(ratio)
    if not 0.0 <= ratio_value <= 1.0:
        raise SnapshotCorruptError(f"ratio outside [0, 1]: {ratio}", line_number)
    try:
        query = NormalizedQuery(_unescape_query(raw_query, line_number))
        correction = NormalizedQuery(_unescape_query(raw_correction, line_number))
    except ValueError as exc:
        raise SnapshotCorruptError(str(exc), line_number) from None
    if query == correction:
        raise SnapshotCorruptError(f"self-rewrite for {query!r}", line_number)
    return query, RewriteEntry(correction, int(count), ratio_value)


def loads(text: str, digest: str = "") -> RewriteTable:
    meta: dict = {}
    entries: dict[NormalizedQuery, RewriteEntry] = {}
    previous: str | None = None
    in_header = True
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    for line_number, line in enumerate(lines, start=1):
        if in_header and line.startswith("#"):
            _parse_header(line, meta, line_number)
            continue
        if in_header:
            in_header = False
            _check_version(meta)
        if not line:
            raise SnapshotCorruptError("empty line", line_number)
        query, entry = _parse_entry(line, line_number)
        if previous is not None:
            if query == previous:
                raise DuplicateKeyError(f"duplicate query {query!r}", line_number)
            if query < previous:
                raise SnapshotCorruptError(f"entries not sorted at {query!r}", line_number)
        entries[query] = entry
        previous = query
    if in_header:
        _check_version(meta)
    metadata = SnapshotMetadata(
        version=meta["version"],
        config=meta.get("config", ""),
        records=meta.get("records", 0),
        built=meta.get("built", 0),
        digest=digest,
    )
    return RewriteTable(entries=entries, metadata=metadata)


def _check_version(meta: dict) -> None:
    version = meta.get("version")
    if version is None:
        raise SnapshotCorruptError("missing #version header", 1)
    if version != SNAPSHOT_VERSION:
        raise SnapshotVersionError(f"snapshot version {version!r} is not supported (expected {SNAPSHOT_VERSION!r})")


def read_snapshot(path: Union[str, Path]) -> RewriteTable:
    """Load and validate a snapshot file."""
    path = Path(path)
    if not path.is_file():
        raise SnapshotMissingError(f"snapshot not found: {path}")
    data = path.read_bytes()
    digest = hashlib.sha256(data).hexdigest()[:DIGEST_LENGTH]
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise SnapshotCorruptError(f"not UTF-8: {exc}") from None
    table = loads(text, digest=digest)
    if not table:
        logger.warning(f"Snapshot {path} has no entries; every query will pass through")
    logger.info(f"Loaded snapshot {table.version} with {len(table)} entries from {path}")
    return table
