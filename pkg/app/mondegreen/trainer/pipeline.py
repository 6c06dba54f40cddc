"""Two-pass offline training: counts, then the rewrite table."""
from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from typing import Sequence

from ..phonetics import PronouncingLexicon
from ..query_model import QueryLogRecord, sort_for_mining
from ..utils import setup_logger
from .config import TrainerConfig
from .mining import CorrectionPair, mine_pairs_sharded, partition_by_user, shard_of
from .rewrite import RewriteTable, build_rewrite_table
from .tables import CountTables, build_tables

logger = setup_logger(__name__)


@dataclass(frozen=True)
class TrainingResult:
    pairs: list[CorrectionPair]
    tables: CountTables
    table: RewriteTable


def count_sharded(
    records: Sequence[QueryLogRecord],
    pairs: Sequence[CorrectionPair],
    config: TrainerConfig,
) -> CountTables:
    """Per-user-shard count tables merged by count addition."""
    if config.workers <= 1:
        return build_tables(records, pairs, exclude_refined=config.abandonment_excludes_refined)
    record_shards = partition_by_user(records, config.workers)
    pair_shards: list[list[CorrectionPair]] = [[] for _ in range(config.workers)]
    for pair in pairs:
        pair_shards[shard_of(pair.user_id, config.workers)].append(pair)
    parts = [
        build_tables(shard, shard_pairs, exclude_refined=config.abandonment_excludes_refined)
        for shard, shard_pairs in zip(record_shards, pair_shards)
    ]
    return reduce(CountTables.merge, parts)


def train(
    records: Sequence[QueryLogRecord],
    config: TrainerConfig,
    lexicon: PronouncingLexicon,
    presorted: bool = False,
) -> TrainingResult:
    """Mine pairs, count, and build the rewrite table from raw log records."""
    if not records:
        logger.warning("No training records; the rewrite table will be empty")
    ordered = list(records) if presorted else sort_for_mining(records)
    pairs = mine_pairs_sharded(ordered, config)
    tables = count_sharded(ordered, pairs, config)
    table = build_rewrite_table(tables, config, lexicon)
    return TrainingResult(pairs=pairs, tables=tables, table=table)
