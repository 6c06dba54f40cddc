"""Low latency correction lookups over the offline rewrite table."""
from .api import create_app
from .service import (
    CorrectionResponse,
    CorrectionService,
    ServingStats,
    correct,
    load_snapshot,
    trigger_rate,
)

__all__ = [
    "CorrectionResponse",
    "CorrectionService",
    "ServingStats",
    "correct",
    "create_app",
    "load_snapshot",
    "trigger_rate",
]
