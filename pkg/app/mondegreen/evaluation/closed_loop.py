"""Rewrite quality against simulator ground truth."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from ..query_model import QueryLogRecord
from ..simulator import GroundTruth
from ..trainer import CorrectionPair, RewriteTable
from ..utils import setup_logger

logger = setup_logger(__name__)


@dataclass(frozen=True)
class GroundTruthReport:
    entries: int
    correct_entries: int
    lookups: int
    correct_lookups: int
    retried_types: int
    covered_types: int

    @property
    def table_precision(self) -> Optional[float]:
        return self.correct_entries / self.entries if self.entries else None

    @property
    def triggered_precision(self) -> Optional[float]:
        return self.correct_lookups / self.lookups if self.lookups else None

    @property
    def coverage(self) -> Optional[float]:
        return self.covered_types / self.retried_types if self.retried_types else None

    def as_dict(self) -> dict:
        return {
            "entries": self.entries,
            "correct_entries": self.correct_entries,
            "table_precision": self.table_precision,
            "triggered_lookups": self.lookups,
            "correct_lookups": self.correct_lookups,
            "triggered_precision": self.triggered_precision,
            "retried_types": self.retried_types,
            "covered_types": self.covered_types,
            "coverage": self.coverage,
        }


def ground_truth_report(
    table: RewriteTable,
    truth: GroundTruth,
    pairs: Sequence[CorrectionPair],
    records: Optional[Iterable[QueryLogRecord]] = None,
) -> GroundTruthReport:
    """Precision of the table and of triggered lookups, and coverage of retried corruptions.

    A rewrite is correct when its key is a known corruption and the correction
    is that corruption's true query. Lookups run over ``records`` when given,
    otherwise over the abandoned side of ``pairs``.
    """
    correct_entries = sum(1 for query, entry in table.items() if truth.get(query) == entry.correction)

    queries = [r.query for r in records] if records is not None else [p.q1 for p in pairs]
    lookups = correct_lookups = 0
    for query in queries:
        entry = table.get(query)
        if entry is None:
            continue
        lookups += 1
        correct_lookups += int(truth.get(query) == entry.correction)

    retried = {p.q1 for p in pairs if p.q1 in truth}
    covered = {q for q in retried if (entry := table.get(q)) is not None and entry.correction == truth.get(q)}

    report = GroundTruthReport(
        entries=len(table),
        correct_entries=correct_entries,
        lookups=lookups,
        correct_lookups=correct_lookups,
        retried_types=len(retried),
        covered_types=len(covered),
    )
    logger.info(
        f"Ground truth: {correct_entries}/{len(table)} entries correct, "
        f"{len(covered)}/{len(retried)} retried corruptions covered"
    )
    return report
