"""Correction-pair mining from per-user query sessions."""
from __future__ import annotations

import zlib
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from itertools import groupby
from typing import Iterable, Sequence

from ..errors import OrderingError
from ..query_model import NormalizedQuery, QueryLogRecord, QueryOutcome, normalize
from ..utils import setup_logger
from .config import TrainerConfig

logger = setup_logger(__name__)


@dataclass(frozen=True, slots=True)
class CorrectionPair:
    """An abandoned query q1 followed by a successful correction q2 from the same user."""

    q1: NormalizedQuery
    q2: NormalizedQuery
    user_id: str
    dt: int
    timestamp: int = 0


def classify(record: QueryLogRecord) -> QueryOutcome:
    """Successful iff the user clicked at least one result."""
    return record.outcome


def check_ordering(records: Sequence[QueryLogRecord]) -> None:
    """Records must be grouped by user and ascending in time within each user."""
    seen: set[str] = set()
    previous: QueryLogRecord | None = None
    for index, record in enumerate(records):
        if previous is not None and record.user_id == previous.user_id:
            if record.timestamp < previous.timestamp:
                raise OrderingError(
                    f"record {index}: timestamp {record.timestamp} precedes {previous.timestamp} "
                    f"for user {record.user_id!r}"
                )
        else:
            if record.user_id in seen:
                raise OrderingError(f"record {index}: records of user {record.user_id!r} are not contiguous")
            seen.add(record.user_id)
        previous = record


def _mine_user(records: Sequence[QueryLogRecord], queries: Sequence[NormalizedQuery], t_window: int) -> list[CorrectionPair]:
    pairs: list[CorrectionPair] = []
    for i, record in enumerate(records):
        if record.clicks >= 1:
            continue
        q1 = queries[i]
        for j in range(i + 1, len(records)):
            follow_up = records[j]
            dt = follow_up.timestamp - record.timestamp
            if dt >= t_window:
                break
            if dt <= 0 or follow_up.clicks < 1 or queries[j] == q1:
                continue
            pairs.append(CorrectionPair(q1, queries[j], record.user_id, dt, record.timestamp))
            break
    return pairs


def mine_pairs(records: Sequence[QueryLogRecord], config: TrainerConfig) -> list[CorrectionPair]:
    """At most one pair per abandoned occurrence: its first successful, different follow-up.

    The follow-up must come from the same user strictly within ``config.t_window``
    seconds. Input must be grouped by user and time-sorted.
    """
    check_ordering(records)
    pairs: list[CorrectionPair] = []
    for _, group in groupby(records, key=lambda r: r.user_id):
        session = list(group)
        queries = [normalize(r.raw_text) for r in session]
        pairs.extend(_mine_user(session, queries, config.t_window))
    logger.info(f"Mined {len(pairs)} correction pairs from {len(records)} records")
    return pairs


def shard_of(user_id: str, shards: int) -> int:
    return zlib.crc32(user_id.encode("utf-8")) % shards


def partition_by_user(records: Iterable[QueryLogRecord], shards: int) -> list[list[QueryLogRecord]]:
    """Split a grouped, time-sorted stream into user-disjoint shards, preserving order."""
    parts: list[list[QueryLogRecord]] = [[] for _ in range(shards)]
    for record in records:
        parts[shard_of(record.user_id, shards)].append(record)
    return parts


def _mine_shard(args: tuple[list[QueryLogRecord], TrainerConfig]) -> list[CorrectionPair]:
    shard, config = args
    return mine_pairs(shard, config)


def mine_pairs_sharded(records: Sequence[QueryLogRecord], config: TrainerConfig) -> list[CorrectionPair]:
    """``mine_pairs`` over user shards in worker processes; output order matches the sequential run."""
    if config.workers <= 1:
        return mine_pairs(records, config)
    check_ordering(records)
    shards = partition_by_user(records, config.workers)
    with ProcessPoolExecutor(max_workers=config.workers) as pool:
        results = list(pool.map(_mine_shard, [(shard, config) for shard in shards]))
    order = {user_id: index for index, user_id in enumerate(dict.fromkeys(r.user_id for r in records))}
    merged = [pair for result in results for pair in result]
    merged.sort(key=lambda p: (order[p.user_id], p.timestamp))
    return merged
