"""BLEU for short queries.

Clipped n-gram precisions up to order ``min(4, candidate length)`` (the longest
candidate for a corpus), a uniform geometric mean and the usual brevity
penalty. Orders n >= 2 are smoothed by adding one to numerator and
denominator; no unigram match gives 0. Corpus scores pool n-gram statistics
and apply a single brevity penalty; a candidate shorter than n contributes a
zero numerator over a unit denominator at that order.
"""
from __future__ import annotations

from typing import TYPE_CHECKING, Iterable, Sequence, Union

from nltk.translate.bleu_score import SmoothingFunction
from nltk.translate.bleu_score import corpus_bleu as nltk_corpus_bleu

from ..errors import EvaluationError
from ..query_model import normalize

if TYPE_CHECKING:
    from .sets import EvalPair

MAX_ORDER = 4

_SMOOTHING = SmoothingFunction().method2

ScoredPair = tuple[str, str]


def _weights(order: int) -> tuple[float, ...]:
    return tuple(1.0 / order for _ in range(order))


def _bleu(pairs: Sequence[ScoredPair]) -> float:
    hypotheses = [normalize(candidate).words for candidate, _ in pairs]
    references = [[normalize(reference).words] for _, reference in pairs]
    order = min(MAX_ORDER, max(len(h) for h in hypotheses))
    return float(
        nltk_corpus_bleu(
            references,
            hypotheses,
            weights=_weights(order),
            smoothing_function=_SMOOTHING,
        )
    )


def sentence_bleu(candidate: str, reference: str) -> float:
    """BLEU of one candidate query against one reference, in [0, 1].

    >>> sentence_bleu("gaming chair", "gaming chair")
    1.0
    """
    return _bleu([(candidate, reference)])


def corpus_bleu(pairs: Iterable[Union[ScoredPair, "EvalPair"]], use_model: bool = True) -> float:
    """Pooled BLEU over ``(candidate, reference)`` tuples or ``EvalPair`` objects.

    For an ``EvalPair`` the candidate is its model output, or its input when
    ``use_model`` is false.
    """
    scored: list[ScoredPair] = []
    for pair in pairs:
        if isinstance(pair, tuple):
            scored.append(pair)
        else:
            scored.append((pair.candidate(use_model), pair.reference))
    if not scored:
        raise EvaluationError("corpus BLEU needs at least one pair")
    return _bleu(scored)

