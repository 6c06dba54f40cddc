"""Corpus statistics: how short voice queries are."""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Union

from ..errors import EvaluationError, InputFileError
from ..query_model import FIELD_COUNT, QueryLogRecord, normalize, read_log
from ..utils import setup_logger

logger = setup_logger(__name__)


@dataclass(frozen=True)
class CorpusStats:
    avg_length_words: float
    query_count: int
    distinct_count: int
    party_share: dict[str, float] = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {
            "avg_length_words": self.avg_length_words,
            "query_count": self.query_count,
            "distinct_count": self.distinct_count,
            "party_share": dict(self.party_share),
        }


def corpus_stats(corpus: Iterable[Union[QueryLogRecord, str]]) -> CorpusStats:
    """Average whitespace-token count, total and distinct normalized queries.

    Accepts log records or plain query strings; blank strings are skipped.
    Party shares (percent) are reported when records are given.
    """
    words = 0
    queries: Counter = Counter()
    parties: Counter = Counter()
    for item in corpus:
        if isinstance(item, QueryLogRecord):
            text = item.raw_text
            parties[item.asr_party.value] += 1
        else:
            text = item
        if not text.strip():
            continue
        query = normalize(text)
        words += len(query.words)
        queries[query] += 1
    total = sum(queries.values())
    if total == 0:
        raise EvaluationError("corpus statistics need at least one query")
    share = {party: 100.0 * count / total for party, count in sorted(parties.items())}
    return CorpusStats(
        avg_length_words=words / total,
        query_count=total,
        distinct_count=len(queries),
        party_share=share,
    )


def _looks_like_log(path: Path) -> bool:
    with path.open(encoding="utf-8", newline="\n") as handle:
        for line in handle:
            if line.strip():
                return len(line.rstrip("\n").split("\t")) == FIELD_COUNT
    return False


def read_corpus(path: Union[str, Path]) -> Union[list[QueryLogRecord], list[str]]:
    """A query log, or a plain-text corpus with one query per line."""
    path = Path(path)
    if not path.is_file():
        raise InputFileError(f"corpus file not found: {path}")
    if _looks_like_log(path):
        return read_log(path)
    with path.open(encoding="utf-8") as handle:
        lines = [line.rstrip("\n") for line in handle]
    logger.info(f"Read {len(lines)} plain-text queries from {path}")
    return lines
