"""Held-out evaluation pairs, the complete/triggered BLEU protocol and the pairs file."""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Iterable, Optional, Sequence, Union

import numpy as np
from rouge_score import rouge_scorer

from ..errors import EvaluationError, InputFileError
from ..query_model import NormalizedQuery, QueryLogRecord, normalize, sort_for_mining
from ..serving import CorrectionService
from ..trainer import RewriteTable, TrainerConfig, mine_pairs
from ..utils import atomic_write, setup_logger
from .bleu import corpus_bleu

logger = setup_logger(__name__)


@dataclass(frozen=True)
class EvalPair:
    """A possibly corrupted input, the query that satisfied the user, and what the model served."""

    input_query: NormalizedQuery
    reference: NormalizedQuery
    model_output: Optional[NormalizedQuery] = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "input_query", normalize(self.input_query))
        object.__setattr__(self, "reference", normalize(self.reference))
        if self.model_output is not None:
            object.__setattr__(self, "model_output", normalize(self.model_output))

    @property
    def triggered(self) -> bool:
        return self.model_output is not None and self.model_output != self.input_query

    def candidate(self, use_model: bool = True) -> NormalizedQuery:
        if use_model and self.model_output is not None:
            return self.model_output
        return self.input_query


@dataclass(frozen=True)
class SetScores:
    """Corpus BLEU with and without corrections on the complete and triggered sets."""

    complete_no_correction: float
    complete_model: float
    triggered_no_correction: Optional[float]
    triggered_model: Optional[float]
    complete_size: int
    triggered_size: int
    trigger_rate: Optional[float]
    rouge_l: dict[str, Optional[float]] = field(default_factory=dict)
    pairs: tuple[EvalPair, ...] = ()

    def rows(self) -> list[tuple[str, Optional[float]]]:
        return [
            ("complete set, no correction", self.complete_no_correction),
            ("complete set, with correction", self.complete_model),
            ("triggered set, no correction", self.triggered_no_correction),
            ("triggered set, with correction", self.triggered_model),
        ]

    def as_dict(self) -> dict:
        return {
            "complete_no_correction": self.complete_no_correction,
            "complete_model": self.complete_model,
            "triggered_no_correction": self.triggered_no_correction,
            "triggered_model": self.triggered_model,
            "complete_size": self.complete_size,
            "triggered_size": self.triggered_size,
            "trigger_rate": self.trigger_rate,
            "rouge_l": dict(self.rouge_l),
        }


def rouge_l(pairs: Sequence[EvalPair], use_model: bool = True) -> Optional[float]:
    """Mean ROUGE-L F-measure of the candidates against their references."""
    if not pairs:
        return None
    scorer = rouge_scorer.RougeScorer(["rougeL"])
    scores = [scorer.score(p.reference, p.candidate(use_model))["rougeL"].fmeasure for p in pairs]
    return float(np.mean(scores))


def apply_table(pairs: Iterable[EvalPair], table: RewriteTable) -> tuple[list[EvalPair], CorrectionService]:
    """Fill every pair's model output with the serving lookup of its input."""
    service = CorrectionService(table)
    served = []
    for pair in pairs:
        response = service.correct(pair.input_query)
        output = response.corrected if response.triggered else response.normalized
        served.append(replace(pair, model_output=output))
    return served, service


def evaluate_sets(test_pairs: Sequence[EvalPair], rewrite_table: Optional[RewriteTable]) -> SetScores:
    """BLEU on the complete set and on the subset the table rewrites.

    Without a table, model outputs already present on the pairs are used and
    missing ones count as pass-through.
    """
    if not test_pairs:
        raise EvaluationError("no evaluation pairs")
    trigger_rate: Optional[float]
    if rewrite_table is not None:
        pairs, service = apply_table(test_pairs, rewrite_table)
        trigger_rate = service.trigger_rate()
    else:
        pairs = [p if p.model_output is not None else replace(p, model_output=p.input_query) for p in test_pairs]
        trigger_rate = 100.0 * sum(p.triggered for p in pairs) / len(pairs)

    triggered = [p for p in pairs if p.triggered]
    scores = SetScores(
        complete_no_correction=corpus_bleu(pairs, use_model=False),
        complete_model=corpus_bleu(pairs),
        triggered_no_correction=corpus_bleu(triggered, use_model=False) if triggered else None,
        triggered_model=corpus_bleu(triggered) if triggered else None,
        complete_size=len(pairs),
        triggered_size=len(triggered),
        trigger_rate=trigger_rate,
        rouge_l={
            "complete_no_correction": rouge_l(pairs, use_model=False),
            "complete_model": rouge_l(pairs),
            "triggered_no_correction": rouge_l(triggered, use_model=False),
            "triggered_model": rouge_l(triggered),
        },
        pairs=tuple(pairs),
    )
    logger.info(f"Evaluated {scores.complete_size} pairs, {scores.triggered_size} triggered")
    return scores


@dataclass(frozen=True)
class EvalSplit:
    train_records: list[QueryLogRecord]
    pairs: list[EvalPair]
    heldout_users: frozenset[str]


def build_eval_split(
    records: Sequence[QueryLogRecord],
    config: TrainerConfig,
    holdout: float = 0.1,
    seed: int = 0,
) -> EvalSplit:
    """Seeded user-level split; held-out users yield balanced corrected and identity pairs.

    Half of the pairs are mined abandoned -> successful corrections, the other
    half successful queries paired with themselves. Held-out users never reach
    the training records.
    """
    if not 0.0 < holdout < 1.0:
        raise EvaluationError(f"holdout must be in (0, 1), got {holdout}")
    ordered = sort_for_mining(records)
    users = sorted({r.user_id for r in ordered})
    rng = np.random.default_rng(seed)
    held_count = min(len(users), math.ceil(holdout * len(users))) if users else 0
    held = frozenset(users[i] for i in rng.permutation(len(users))[:held_count].tolist())

    train_records = [r for r in ordered if r.user_id not in held]
    held_records = [r for r in ordered if r.user_id in held]
    mined = mine_pairs(held_records, config)
    followups = {(p.user_id, p.timestamp + p.dt) for p in mined}
    successful = [
        r for r in held_records if r.successful and (r.user_id, r.timestamp) not in followups
    ]

    size = min(len(mined), len(successful))
    chosen_mined = sorted(rng.choice(len(mined), size=size, replace=False).tolist()) if size else []
    chosen_identity = sorted(rng.choice(len(successful), size=size, replace=False).tolist()) if size else []
    pairs = [EvalPair(mined[i].q1, mined[i].q2) for i in chosen_mined]
    pairs += [EvalPair(successful[i].query, successful[i].query) for i in chosen_identity]
    logger.info(
        f"Held out {len(held)} of {len(users)} users: {len(train_records)} training records, "
        f"{len(pairs)} evaluation pairs"
    )
    return EvalSplit(train_records=train_records, pairs=pairs, heldout_users=held)


def write_pairs(path: Union[str, Path], pairs: Iterable[EvalPair]) -> None:
    with atomic_write(path) as handle:
        for pair in pairs:
            fields = [pair.input_query, pair.reference]
            if pair.model_output is not None:
                fields.append(pair.model_output)
            handle.write("\t".join(fields) + "\n")


def read_pairs(path: Union[str, Path]) -> list[EvalPair]:
    """``input \\t reference [\\t model_output]`` per line."""
    path = Path(path)
    if not path.is_file():
        raise InputFileError(f"pairs file not found: {path}")
    pairs = []
    with path.open(encoding="utf-8") as handle:
        for line_number, line in enumerate(handle, start=1):
            text = line.rstrip("\n")
            if not text.strip():
                continue
            fields = text.split("\t")
            if len(fields) not in (2, 3):
                raise EvaluationError(f"{path}:{line_number}: expected 2 or 3 tab-separated fields")
            try:
                pairs.append(EvalPair(*fields))
            except ValueError as exc:
                raise EvaluationError(f"{path}:{line_number}: {exc}") from None
    return pairs
