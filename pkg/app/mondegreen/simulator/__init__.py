"""Synthetic voice-search logs with a known phonetic ASR-error channel."""
from .config import SimConfig
from .confusions import (
    BUNDLED_CONFUSIONS,
    ConfusionLexicon,
    ConfusionReport,
    GroundTruth,
    augment_confusions,
    load_confusions,
    mine_confusions,
    validate_confusions,
)
from .generator import (
    FIRST_PARTY_SOURCE,
    THIRD_PARTY_SOURCES,
    SimulationResult,
    generate_logs,
    zipf_weights,
)

__all__ = [
    "BUNDLED_CONFUSIONS",
    "FIRST_PARTY_SOURCE",
    "THIRD_PARTY_SOURCES",
    "ConfusionLexicon",
    "ConfusionReport",
    "GroundTruth",
    "SimConfig",
    "SimulationResult",
    "augment_confusions",
    "generate_logs",
    "load_confusions",
    "mine_confusions",
    "validate_confusions",
    "zipf_weights",
]
