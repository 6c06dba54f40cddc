"""Offline trainer: pair mining, count tables and the rewrite table."""
from .config import TrainerConfig
from .mining import CorrectionPair, check_ordering, classify, mine_pairs, mine_pairs_sharded
from .pipeline import TrainingResult, train
from .rewrite import (
    SNAPSHOT_VERSION,
    RewriteEntry,
    RewriteTable,
    SnapshotMetadata,
    best_rewrite,
    build_rewrite_table,
    candidate_set,
)
from .snapshot import dumps, loads, read_snapshot, write_snapshot
from .tables import CountTables, build_tables

__all__ = [
    "SNAPSHOT_VERSION",
    "CorrectionPair",
    "CountTables",
    "RewriteEntry",
    "RewriteTable",
    "SnapshotMetadata",
    "TrainerConfig",
    "TrainingResult",
    "best_rewrite",
    "build_rewrite_table",
    "build_tables",
    "candidate_set",
    "check_ordering",
    "classify",
    "dumps",
    "loads",
    "mine_pairs",
    "mine_pairs_sharded",
    "read_snapshot",
    "train",
    "write_snapshot",
]
