"""Phonetic edit distance between phoneme sequences and between queries."""
from __future__ import annotations

from typing import Sequence

from rapidfuzz.distance import Levenshtein

from ..query_model import NormalizedQuery
from .g2p import g2p
from .lexicon import PronouncingLexicon


def phonetic_distance(a: Sequence[str], b: Sequence[str]) -> int:
    """Token-level Levenshtein distance, unit costs for insert, delete and substitute."""
    return Levenshtein.distance(a, b)


def normalized_phonetic_distance(a: Sequence[str], b: Sequence[str]) -> float:
    """Levenshtein distance divided by the longer length; 0.0 for two empty sequences."""
    return Levenshtein.normalized_distance(a, b)


def query_phonetic_distance(q1: NormalizedQuery, q2: NormalizedQuery, lexicon: PronouncingLexicon) -> int:
    if q1 == q2:
        return 0
    return phonetic_distance(g2p(q1, lexicon), g2p(q2, lexicon))


def query_normalized_distance(q1: NormalizedQuery, q2: NormalizedQuery, lexicon: PronouncingLexicon) -> float:
    if q1 == q2:
        return 0.0
    return normalized_phonetic_distance(g2p(q1, lexicon), g2p(q2, lexicon))


def within_threshold(
    q1: NormalizedQuery,
    q2: NormalizedQuery,
    lexicon: PronouncingLexicon,
    tau: int,
    normalized: bool = False,
    tau_ratio: float = 0.25,
) -> bool:
    """The phonetic-similarity predicate used by the candidate set and refinement detection."""
    if normalized:
        return query_normalized_distance(q1, q2, lexicon) <= tau_ratio
    a, b = g2p(q1, lexicon), g2p(q2, lexicon)
    if abs(len(a) - len(b)) > tau:
        return False
    return Levenshtein.distance(a, b, score_cutoff=tau) <= tau
