"""Online-experiment style metrics over a log, overall and on the triggered subset."""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import groupby
from typing import Optional, Sequence

from ..errors import EvaluationError
from ..phonetics import PronouncingLexicon, query_phonetic_distance
from ..query_model import QueryLogRecord, sort_for_mining
from ..serving import CorrectionService
from ..trainer import RewriteTable
from ..utils import setup_logger

logger = setup_logger(__name__)

METRICS = ("ctr", "user_interaction_rate", "abandoned_pct", "refinement_pct", "trigger_rate_pct")


def detect_refinement(
    r1: QueryLogRecord,
    r2: QueryLogRecord,
    lexicon: PronouncingLexicon,
    threshold: int = 2,
    window: int = 60,
) -> bool:
    """True iff ``r2`` re-asks ``r1`` in a phonetically similar way strictly within ``window`` seconds."""
    if r1.user_id != r2.user_id:
        return False
    dt = r2.timestamp - r1.timestamp
    if not 0 < dt < window:
        return False
    q1, q2 = r1.query, r2.query
    if q1 == q2:
        return False
    return query_phonetic_distance(q1, q2, lexicon) <= threshold


@dataclass
class Tally:
    """Additive counts behind AbMetrics."""

    queries: int = 0
    clicks: int = 0
    extended: int = 0
    abandoned: int = 0
    refined: int = 0
    triggered: int = 0

    def add(self, record: QueryLogRecord, refined: bool, triggered: bool) -> None:
        self.queries += 1
        self.clicks += record.clicks
        self.extended += int(record.extended_interaction)
        self.refined += int(refined)
        self.abandoned += int(record.clicks == 0 and not refined)
        self.triggered += int(triggered)


@dataclass(frozen=True)
class AbMetrics:
    queries: int
    ctr: float
    user_interaction_rate: float
    abandoned_pct: float
    refinement_pct: float
    trigger_rate_pct: Optional[float]

    @classmethod
    def from_tally(cls, tally: Tally, with_table: bool) -> "AbMetrics":
        n = tally.queries
        if n == 0:
            return cls(0, 0.0, 0.0, 0.0, 0.0, None)
        return cls(
            queries=n,
            ctr=100.0 * tally.clicks / n,
            user_interaction_rate=tally.extended / n,
            abandoned_pct=100.0 * tally.abandoned / n,
            refinement_pct=100.0 * tally.refined / n,
            trigger_rate_pct=100.0 * tally.triggered / n if with_table else None,
        )

    def as_dict(self) -> dict:
        return {
            "queries": self.queries,
            "ctr": self.ctr,
            "user_interaction_rate": self.user_interaction_rate,
            "abandoned_pct": self.abandoned_pct,
            "refinement_pct": self.refinement_pct,
            "trigger_rate_pct": self.trigger_rate_pct,
        }


@dataclass(frozen=True)
class AbReport:
    """Metrics on all traffic and on the triggered subset, with per-party and per-locale breakdowns."""

    overall: AbMetrics
    triggered: Optional[AbMetrics]
    by_party: dict[str, AbMetrics] = field(default_factory=dict)
    by_locale: dict[str, AbMetrics] = field(default_factory=dict)
    triggered_by_party: dict[str, AbMetrics] = field(default_factory=dict)
    triggered_by_locale: dict[str, AbMetrics] = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {
            "overall": self.overall.as_dict(),
            "triggered": self.triggered.as_dict() if self.triggered else None,
            "by_party": {k: v.as_dict() for k, v in self.by_party.items()},
            "by_locale": {k: v.as_dict() for k, v in self.by_locale.items()},
            "triggered_by_party": {k: v.as_dict() for k, v in self.triggered_by_party.items()},
            "triggered_by_locale": {k: v.as_dict() for k, v in self.triggered_by_locale.items()},
        }


def _tallies(
    records: Sequence[QueryLogRecord],
    lexicon: PronouncingLexicon,
    service: Optional[CorrectionService],
    threshold: int,
    window: int,
) -> tuple[Tally, Tally, dict[str, Tally], dict[str, Tally], dict[str, Tally], dict[str, Tally]]:
    overall, triggered = Tally(), Tally()
    party: dict[str, Tally] = {}
    locale: dict[str, Tally] = {}
    triggered_party: dict[str, Tally] = {}
    triggered_locale: dict[str, Tally] = {}
    for _, group in groupby(records, key=lambda r: r.user_id):
        session = list(group)
        for i, record in enumerate(session):
            refined = i + 1 < len(session) and detect_refinement(
                record, session[i + 1], lexicon, threshold=threshold, window=window
            )
            hit = service is not None and service.correct(record.raw_text).triggered
            overall.add(record, refined, hit)
            party.setdefault(record.asr_party.value, Tally()).add(record, refined, hit)
            locale.setdefault(record.locale, Tally()).add(record, refined, hit)
            if hit:
                triggered.add(record, refined, hit)
                triggered_party.setdefault(record.asr_party.value, Tally()).add(record, refined, hit)
                triggered_locale.setdefault(record.locale, Tally()).add(record, refined, hit)
    return overall, triggered, party, locale, triggered_party, triggered_locale


def ab_metrics(
    records: Sequence[QueryLogRecord],
    lexicon: PronouncingLexicon,
    rewrite_table: Optional[RewriteTable] = None,
    threshold: int = 2,
    window: int = 60,
) -> AbReport:
    """CTR, user interaction, abandonment, refinement and trigger rate of one arm.

    The triggered subset is the queries the table rewrites; without a table it
    is empty and trigger rates are ``None``.
    """
    if not records:
        raise EvaluationError("A/B metrics need at least one record")
    service = CorrectionService(rewrite_table) if rewrite_table is not None else None
    ordered = sort_for_mining(records)
    overall, triggered, party, locale, t_party, t_locale = _tallies(ordered, lexicon, service, threshold, window)
    with_table = service is not None

    def metrics(tallies: dict[str, Tally]) -> dict[str, AbMetrics]:
        return {key: AbMetrics.from_tally(tallies[key], with_table) for key in sorted(tallies)}

    report = AbReport(
        overall=AbMetrics.from_tally(overall, with_table),
        triggered=AbMetrics.from_tally(triggered, with_table) if with_table else None,
        by_party=metrics(party),
        by_locale=metrics(locale),
        triggered_by_party=metrics(t_party),
        triggered_by_locale=metrics(t_locale),
    )
    if with_table:
        served_rate = service.trigger_rate()
        logger.info(f"A/B metrics over {len(ordered)} queries, serving trigger rate {served_rate:.2f}%")
    return report


def relative_change(control: Optional[float], treatment: Optional[float]) -> Optional[float]:
    """(treatment - control) / control x 100; ``None`` when undefined."""
    if control is None or treatment is None or control == 0:
        return None
    return 100.0 * (treatment - control) / control


def _compare(control: Optional[AbMetrics], treatment: Optional[AbMetrics]) -> dict[str, Optional[float]]:
    if control is None or treatment is None:
        return {name: None for name in METRICS}
    return {name: relative_change(getattr(control, name), getattr(treatment, name)) for name in METRICS}


def compare_arms(control: AbReport, treatment: AbReport) -> dict[str, dict[str, Optional[float]]]:
    """Relative change per metric for all traffic, the triggered subset and each breakdown key."""
    comparison = {
        "overall": _compare(control.overall, treatment.overall),
        "triggered": _compare(control.triggered, treatment.triggered),
    }
    for key in sorted(set(control.by_party) | set(treatment.by_party)):
        comparison[f"party:{key}"] = _compare(control.by_party.get(key), treatment.by_party.get(key))
    for key in sorted(set(control.by_locale) | set(treatment.by_locale)):
        comparison[f"locale:{key}"] = _compare(control.by_locale.get(key), treatment.by_locale.get(key))
    return comparison
