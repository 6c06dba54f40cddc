"""Candidate set and the offline rewrite table.

For a query q with enough traffic, the candidate corrections are

    C = { q' : phonetic-distance(q', q) <= tau
               and 1 - count(q'|q)/count(q) < abandonment_rate(q)
               and count(q'|q)/count(q) > beta }

and the table stores the argmax of count(q'|q) over C, for queries whose
abandonment rate exceeds alpha.
"""
from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from types import MappingProxyType
from typing import Iterable, Iterator, Mapping, NamedTuple, Optional

from ..phonetics import PronouncingLexicon, within_threshold
from ..query_model import NormalizedQuery
from ..utils import setup_logger
from .config import TrainerConfig
from .tables import CountTables

logger = setup_logger(__name__)

SNAPSHOT_VERSION = "mondegreen-snapshot/1"
RATIO_DIGITS = 6


class RewriteEntry(NamedTuple):
    correction: NormalizedQuery
    pair_count: int
    ratio: float


@dataclass(frozen=True)
class SnapshotMetadata:
    version: str = SNAPSHOT_VERSION
    config: str = ""
    records: int = 0
    built: int = 0
    digest: str = ""


@dataclass(frozen=True)
class RewriteTable:
    """Immutable map from a query to its single best correction."""

    entries: Mapping[NormalizedQuery, RewriteEntry] = field(default_factory=dict)
    metadata: SnapshotMetadata = field(default_factory=SnapshotMetadata)

    def __post_init__(self) -> None:
        if not isinstance(self.entries, MappingProxyType):
            object.__setattr__(self, "entries", MappingProxyType(dict(self.entries)))

    def get(self, query: str) -> Optional[RewriteEntry]:
        return self.entries.get(query)

    def __contains__(self, query: object) -> bool:
        return query in self.entries

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self) -> Iterator[NormalizedQuery]:
        return iter(self.entries)

    def items(self) -> Iterable[tuple[NormalizedQuery, RewriteEntry]]:
        return self.entries.items()

    @property
    def version(self) -> str:
        if self.metadata.digest:
            return f"{self.metadata.version}@{self.metadata.digest}"
        return self.metadata.version

    def corrections(self) -> dict[str, str]:
        return {str(q): str(e.correction) for q, e in self.entries.items()}


def _ratio(pair_count: int, query_count: int) -> Fraction:
    return Fraction(pair_count, query_count)


def _exact(threshold: float) -> Fraction:
    """The decimal a threshold was written as, so 0.3 means 3/10 and not the nearest double."""
    return Fraction(repr(threshold))


def candidate_set(
    query: NormalizedQuery,
    tables: CountTables,
    config: TrainerConfig,
    lexicon: PronouncingLexicon,
) -> set[NormalizedQuery]:
    """All mined corrections of ``query`` that pass the distance, abandonment and frequency conditions."""
    total = tables.query_count.get(query, 0)
    if total == 0:
        return set()
    abandonment = tables.abandonment_rate(query)
    beta = _exact(config.beta)
    candidates: set[NormalizedQuery] = set()
    for correction, count in tables.corrections(query).items():
        ratio = _ratio(count, total)
        if not ratio > beta:
            continue
        if not 1 - ratio < abandonment:
            continue
        if not within_threshold(
            query,
            correction,
            lexicon,
            config.tau,
            normalized=config.normalized_distance,
            tau_ratio=config.tau_ratio,
        ):
            continue
        candidates.add(correction)
    return candidates


def best_rewrite(
    query: NormalizedQuery,
    tables: CountTables,
    config: TrainerConfig,
    lexicon: PronouncingLexicon,
) -> Optional[RewriteEntry]:
    """Argmax of count(q'|q) over the candidate set; ties go to the smallest correction."""
    if tables.query_count.get(query, 0) < config.min_query_count:
        return None
    if not tables.abandonment_rate(query) > _exact(config.alpha):
        return None
    candidates = candidate_set(query, tables, config, lexicon)
    if not candidates:
        logger.debug(f"No candidate for {query!r}")
        return None
    counts = tables.corrections(query)
    winner = min(candidates, key=lambda c: (-counts[c], c))
    count = counts[winner]
    ratio = round(float(_ratio(count, tables.query_count[query])), RATIO_DIGITS)
    logger.debug(f"Rewrite {query!r} -> {winner!r} (count={count}, ratio={ratio})")
    return RewriteEntry(winner, count, ratio)


def _trainable(tables: CountTables) -> list[NormalizedQuery]:
    return sorted(q for q in tables.query_count if tables.corrections(q))


def _build_shard(args: tuple[list[NormalizedQuery], CountTables, TrainerConfig, PronouncingLexicon]) -> dict:
    queries, tables, config, lexicon = args
    entries = {}
    for query in queries:
        entry = best_rewrite(query, tables, config, lexicon)
        if entry is not None:
            entries[query] = entry
    return entries


def build_rewrite_table(
    tables: CountTables,
    config: TrainerConfig,
    lexicon: PronouncingLexicon,
) -> RewriteTable:
    """Precompute the single best rewrite of every query that passes the alpha filter.

    With ``config.workers > 1`` the query space is split into shards built in
    worker processes; the result does not depend on the number of workers.
    """
    queries = _trainable(tables)
    if config.workers > 1 and len(queries) > config.workers:
        shards = [queries[i::config.workers] for i in range(config.workers)]
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            parts = list(pool.map(_build_shard, [(shard, tables, config, lexicon) for shard in shards]))
    else:
        parts = [_build_shard((queries, tables, config, lexicon))]

    entries: dict[NormalizedQuery, RewriteEntry] = {}
    for part in parts:
        entries.update(part)
    ordered = {query: entries[query] for query in sorted(entries)}

    metadata = SnapshotMetadata(
        config=config.header(),
        records=tables.record_count,
        built=tables.latest_timestamp,
    )
    logger.info(f"Built rewrite table with {len(ordered)} entries from {len(queries)} trainable queries")
    return RewriteTable(entries=ordered, metadata=metadata)
