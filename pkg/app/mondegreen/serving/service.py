"""Runtime correction against an immutable, hot-swappable rewrite snapshot."""
from __future__ import annotations

import threading
from pathlib import Path
from typing import Optional, Union

from pydantic import BaseModel, ConfigDict, model_validator

from ..errors import EmptyQueryError
from ..query_model import normalize
from ..trainer import RewriteTable, read_snapshot
from ..utils import setup_logger

logger = setup_logger(__name__)


class CorrectionResponse(BaseModel):
    """Lookup result; ``original`` is always the caller's raw text so it can be restored."""

    model_config = ConfigDict(frozen=True)

    original: str
    normalized: str
    corrected: Optional[str] = None
    triggered: bool = False
    table_version: str

    @model_validator(mode="after")
    def _consistent(self) -> "CorrectionResponse":
        if self.triggered != (self.corrected is not None):
            raise ValueError("triggered must be true exactly when a correction is present")
        if self.corrected is not None and self.corrected == self.normalized:
            raise ValueError("a correction must differ from the normalized query")
        return self


class ServingStats:
    """Monotonic lookup counters, safe under concurrent increment."""

    def __init__(self) -> None:
        self._lock = threading.Lock()
        self.total_lookups = 0
        self.triggered_lookups = 0

    def record(self, triggered: bool) -> None:
        with self._lock:
            self.total_lookups += 1
            if triggered:
                self.triggered_lookups += 1

    def snapshot(self) -> tuple[int, int]:
        with self._lock:
            return self.total_lookups, self.triggered_lookups


def trigger_rate(stats: ServingStats) -> Optional[float]:
    """Percentage of lookups that were rewritten; ``None`` before the first lookup."""
    total, triggered = stats.snapshot()
    if total == 0:
        return None
    return 100.0 * triggered / total


def load_snapshot(path: Union[str, Path]) -> RewriteTable:
    return read_snapshot(path)


def correct(q_raw: str, table: RewriteTable) -> CorrectionResponse:
    """Single lookup; a miss passes the normalized query through unmodified."""
    if not q_raw or not q_raw.strip():
        raise EmptyQueryError(q_raw)
    key = normalize(q_raw)
    entry = table.get(key)
    if entry is None:
        return CorrectionResponse(original=q_raw, normalized=key, table_version=table.version)
    return CorrectionResponse(
        original=q_raw,
        normalized=key,
        corrected=entry.correction,
        triggered=True,
        table_version=table.version,
    )


class CorrectionService:
    """Holds the active table; readers take one reference per lookup, writers swap it whole."""

    def __init__(self, table: Optional[RewriteTable] = None) -> None:
        self._table = table
        self._swap_lock = threading.Lock()
        self.stats = ServingStats()

    @classmethod
    def from_snapshot(cls, path: Union[str, Path]) -> "CorrectionService":
        return cls(load_snapshot(path))

    @property
    def table(self) -> Optional[RewriteTable]:
        return self._table

    @property
    def ready(self) -> bool:
        return self._table is not None

    def correct(self, q_raw: str) -> CorrectionResponse:
        table = self._table
        if table is None:
            table = RewriteTable()
        response = correct(q_raw, table)
        self.stats.record(response.triggered)
        return response

    def swap_snapshot(self, new_table: RewriteTable) -> RewriteTable | None:
        """Atomically replace the active table; returns the previous one."""
        with self._swap_lock:
            previous, self._table = self._table, new_table
        logger.info(f"Swapped rewrite table to {new_table.version} ({len(new_table)} entries)")
        return previous

    def reload(self, path: Union[str, Path]) -> RewriteTable:
        """Load and validate ``path`` fully before swapping it in."""
        table = load_snapshot(path)
        self.swap_snapshot(table)
        return table

    def trigger_rate(self) -> Optional[float]:
        return trigger_rate(self.stats)
