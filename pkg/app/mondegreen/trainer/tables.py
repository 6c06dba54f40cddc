"""Count tables: count(q2|q1), count(q) and the abandonment rate of every query."""
from __future__ import annotations

from collections import Counter, defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from ..query_model import NormalizedQuery, QueryLogRecord, normalize
from ..utils import setup_logger
from .mining import CorrectionPair

logger = setup_logger(__name__)


@dataclass
class CountTables:
    """Counts over one corpus, keyed on normalized queries.

    ``abandoned_count`` holds zero-click occurrences, ``refined_count`` the
    zero-click occurrences that produced a correction pair.
    """

    pair_count: Counter = field(default_factory=Counter)
    query_count: Counter = field(default_factory=Counter)
    abandoned_count: Counter = field(default_factory=Counter)
    refined_count: Counter = field(default_factory=Counter)
    exclude_refined: bool = False
    record_count: int = 0
    latest_timestamp: int = 0

    def __post_init__(self) -> None:
        self._corrections: dict[NormalizedQuery, dict[NormalizedQuery, int]] | None = None

    def abandonment_rate(self, query: str) -> Fraction:
        total = self.query_count.get(query, 0)
        if total == 0:
            return Fraction(0)
        abandoned = self.abandoned_count.get(query, 0)
        if self.exclude_refined:
            abandoned -= self.refined_count.get(query, 0)
        return Fraction(abandoned, total)

    def corrections(self, query: str) -> Mapping[NormalizedQuery, int]:
        """q' -> count(q'|q) for every q' mined as a correction of ``query``."""
        if self._corrections is None:
            index: dict[NormalizedQuery, dict[NormalizedQuery, int]] = defaultdict(dict)
            for (q1, q2), count in self.pair_count.items():
                if count > 0:
                    index[q1][q2] = count
            self._corrections = dict(index)
        return self._corrections.get(query, {})

    def merge(self, other: "CountTables") -> "CountTables":
        """Associative, commutative sum of two shards' counts."""
        return CountTables(
            pair_count=self.pair_count + other.pair_count,
            query_count=self.query_count + other.query_count,
            abandoned_count=self.abandoned_count + other.abandoned_count,
            refined_count=self.refined_count + other.refined_count,
            exclude_refined=self.exclude_refined,
            record_count=self.record_count + other.record_count,
            latest_timestamp=max(self.latest_timestamp, other.latest_timestamp),
        )

    def check_invariants(self) -> None:
        totals: Counter = Counter()
        for (q1, _), count in self.pair_count.items():
            totals[q1] += count
        for q1, total in totals.items():
            if total > self.query_count.get(q1, 0):
                raise AssertionError(f"pair counts for {q1!r} exceed its query count")
        for query in self.query_count:
            rate = self.abandonment_rate(query)
            if not 0 <= rate <= 1:
                raise AssertionError(f"abandonment rate of {query!r} outside [0, 1]")

    def __len__(self) -> int:
        return len(self.query_count)


def build_tables(
    records: Iterable[QueryLogRecord],
    pairs: Sequence[CorrectionPair],
    exclude_refined: bool = False,
) -> CountTables:
    """Exact-match counts after normalization.

    With ``exclude_refined`` an abandoned occurrence that produced a pair counts
    as refined rather than abandoned.
    """
    tables = CountTables(exclude_refined=exclude_refined)
    for record in records:
        query = normalize(record.raw_text)
        tables.query_count[query] += 1
        if record.clicks == 0:
            tables.abandoned_count[query] += 1
        tables.record_count += 1
        tables.latest_timestamp = max(tables.latest_timestamp, record.timestamp)
    for pair in pairs:
        tables.pair_count[(pair.q1, pair.q2)] += 1
        tables.refined_count[pair.q1] += 1
    logger.info(
        f"Built count tables: {len(tables.query_count)} distinct queries, "
        f"{len(tables.pair_count)} distinct pairs from {tables.record_count} records"
    )
    return tables
