"""Seeded synthetic voice-search logs with ground truth.

Every session consumes a fixed block of uniforms from one PCG64 stream, so a
control run and a treatment run with the same seed see the same users, the
same intended queries and the same ASR errors; only behavior that depends on
what was served differs.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np
from tqdm import tqdm

from ..errors import ConfigError
from ..phonetics import PronouncingLexicon
from ..query_model import AsrParty, NormalizedQuery, QueryLogRecord, normalize
from ..trainer import RewriteTable
from ..utils import setup_logger
from .config import SimConfig
from .confusions import ConfusionLexicon, GroundTruth, augment_confusions

logger = setup_logger(__name__)

FIRST_PARTY_SOURCE = "asr-1p"
THIRD_PARTY_SOURCES = ("asr-3p-a", "asr-3p-b")

# Uniform slots drawn per session.
(
    _USER,
    _QUERY,
    _PARTY,
    _SOURCE,
    _ERROR,
    _CORRUPTION,
    _CLICK,
    _CLICKS,
    _EXTENDED,
    _RETRY,
    _RETRY_DT,
    _RETRY_CLICK,
    _RETRY_CLICKS,
    _RETRY_EXTENDED,
    _GAP,
) = range(15)
_SLOTS = 15


@dataclass(frozen=True)
class SimulationResult:
    records: list[QueryLogRecord]
    truth: GroundTruth
    sessions: int
    corrupted_sessions: int
    triggered: int = 0


def zipf_weights(n: int, s: float) -> np.ndarray:
    """Probability of rank ``k`` proportional to ``k ** -s``."""
    ranks = np.arange(1, n + 1, dtype=np.float64)
    weights = ranks ** -s
    return weights / weights.sum()


def _pick(cdf: np.ndarray, u: float) -> int:
    return min(int(np.searchsorted(cdf, u, side="right")), len(cdf) - 1)


def _scaled(u: float, n: int) -> int:
    return min(int(u * n), n - 1)


def generate_logs(
    config: SimConfig,
    confusions: ConfusionLexicon,
    rewrite_table: Optional[RewriteTable] = None,
    lexicon: Optional[PronouncingLexicon] = None,
    progress: bool = False,
) -> SimulationResult:
    """Emit session records grouped by user and sorted by timestamp.

    With ``rewrite_table`` the run is a treatment arm: each recognized query
    is looked up and the user reacts to the served (possibly corrected) text.
    """
    if config.augment_confusions:
        if lexicon is None:
            raise ConfigError("augment_confusions needs a pronouncing lexicon")
        confusions = augment_confusions(confusions, lexicon)

    vocabulary = confusions.true_phrases()
    if config.vocab_size > len(vocabulary):
        raise ConfigError(
            f"vocab_size={config.vocab_size} exceeds the {len(vocabulary)} confusable phrases available"
        )
    vocabulary = vocabulary[: config.vocab_size]
    corruptions: dict[NormalizedQuery, list[NormalizedQuery]] = {
        true: confusions.corruptions_of(true) for true in vocabulary
    }
    query_cdf = np.cumsum(zipf_weights(config.vocab_size, config.zipf_s))
    locale_names = list(config.locales)
    locale_cdf = np.cumsum(np.array([config.locales[name] for name in locale_names], dtype=np.float64))
    locale_cdf /= locale_cdf[-1]

    rng = np.random.default_rng(config.seed)
    user_locales = [locale_names[_pick(locale_cdf, u)] for u in rng.random(config.n_users).tolist()]
    user_offsets = rng.integers(0, config.session_gap_max, size=config.n_users).tolist()
    clocks = [config.start_time + offset for offset in user_offsets]
    draws = rng.random((config.n_sessions, _SLOTS))

    users = [f"u{index:06d}" for index in range(config.n_users)]
    records: list[QueryLogRecord] = []
    occurred: dict[str, str] = {}
    corrupted_sessions = 0
    triggered = 0
    gap_span = config.session_gap_max - config.session_gap_min + 1

    sessions = tqdm(draws.tolist(), desc="Simulating sessions", disable=not progress)
    for u in sessions:
        user = _scaled(u[_USER], config.n_users)
        true = vocabulary[_pick(query_cdf, u[_QUERY])]
        third_party = u[_PARTY] < config.p_3p
        party = AsrParty.THIRD_PARTY if third_party else AsrParty.FIRST_PARTY
        source = THIRD_PARTY_SOURCES[_scaled(u[_SOURCE], len(THIRD_PARTY_SOURCES))] if third_party else FIRST_PARTY_SOURCE
        locale = user_locales[user]

        heard = true
        options = corruptions[true]
        if options and u[_ERROR] < config.p_err(third_party):
            heard = options[_scaled(u[_CORRUPTION], len(options))]
            occurred[heard] = true
            corrupted_sessions += 1

        served = heard
        if rewrite_table is not None:
            entry = rewrite_table.get(normalize(heard))
            if entry is not None:
                served = entry.correction
                triggered += 1

        t = clocks[user] + config.session_gap_min + _scaled(u[_GAP], gap_span)
        p_click = config.p_click_true if served == true else config.p_click_corrupt
        clicked = u[_CLICK] < p_click
        clicks = 1 + _scaled(u[_CLICKS], config.max_clicks) if clicked else 0
        records.append(
            QueryLogRecord(
                user_id=users[user],
                timestamp=t,
                raw_text=heard,
                asr_source=source,
                asr_party=party,
                locale=locale,
                clicks=clicks,
                extended_interaction=clicked and u[_EXTENDED] < config.p_extended,
            )
        )

        if not clicked and served != true and u[_RETRY] < config.p_retry:
            t += 1 + _scaled(u[_RETRY_DT], config.retry_dt_max)
            retry_clicked = u[_RETRY_CLICK] < config.p_click_true
            records.append(
                QueryLogRecord(
                    user_id=users[user],
                    timestamp=t,
                    raw_text=true,
                    asr_source=source,
                    asr_party=party,
                    locale=locale,
                    clicks=1 + _scaled(u[_RETRY_CLICKS], config.max_clicks) if retry_clicked else 0,
                    extended_interaction=retry_clicked and u[_RETRY_EXTENDED] < config.p_extended,
                )
            )
        clocks[user] = t

    records.sort(key=lambda r: (r.user_id, r.timestamp))
    arm = "treatment" if rewrite_table is not None else "control"
    logger.info(
        f"Simulated {config.n_sessions} {arm} sessions: {len(records)} records, "
        f"{corrupted_sessions} corrupted, {len(occurred)} distinct corruptions"
    )
    return SimulationResult(
        records=records,
        truth=GroundTruth(mapping=dict(sorted(occurred.items()))),
        sessions=config.n_sessions,
        corrupted_sessions=corrupted_sessions,
        triggered=triggered,
    )
