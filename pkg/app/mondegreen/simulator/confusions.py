"""Confusion lexicon: the ASR error channel of the simulator.

File format: UTF-8, a ``#max_distance=N`` header, then ``true \\t corrupted``
lines. Other ``#`` lines are comments. A corrupted phrase maps to exactly one
true phrase and is never itself a true phrase.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator, Optional, Union

from rapidfuzz import process
from rapidfuzz.distance import Levenshtein

from ..config import DATA_DIR, settings
from ..errors import ConfusionLexiconError, EmptyQueryError, InputFileError
from ..phonetics import PHONEMES, PronouncingLexicon, g2p, query_phonetic_distance
from ..query_model import NormalizedQuery, normalize
from ..utils import atomic_write, setup_logger

logger = setup_logger(__name__)

BUNDLED_CONFUSIONS = DATA_DIR / "confusions.tsv"
_HEADER = "#max_distance="

# One code point per phoneme so rapidfuzz can batch-score pronunciations as strings.
_PHONE_CHARS = {symbol: chr(0x100 + i) for i, symbol in enumerate(sorted(PHONEMES))}


@dataclass(frozen=True)
class ConfusionLexicon:
    entries: tuple[tuple[NormalizedQuery, NormalizedQuery], ...]
    max_distance: int

    def __post_init__(self) -> None:
        owner: dict[str, str] = {}
        trues = {true for true, _ in self.entries}
        for true, corrupted in self.entries:
            if true == corrupted:
                raise ConfusionLexiconError(f"corruption of {true!r} is identical to it")
            if corrupted in trues:
                raise ConfusionLexiconError(f"corrupted phrase {corrupted!r} is also a true phrase")
            if owner.setdefault(corrupted, true) != true:
                raise ConfusionLexiconError(
                    f"corrupted phrase {corrupted!r} maps to both {owner[corrupted]!r} and {true!r}"
                )

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self) -> Iterator[tuple[NormalizedQuery, NormalizedQuery]]:
        return iter(self.entries)

    def true_phrases(self) -> list[NormalizedQuery]:
        """Distinct true phrases in first-occurrence order."""
        return list(dict.fromkeys(true for true, _ in self.entries))

    def corruptions_of(self, true: str) -> list[NormalizedQuery]:
        return [corrupted for t, corrupted in self.entries if t == true]

    def extended_with(self, pairs: Iterable[tuple[str, str]]) -> "ConfusionLexicon":
        existing = set(self.entries)
        added = [(normalize(t), normalize(c)) for t, c in pairs]
        merged = list(self.entries) + [p for p in dict.fromkeys(added) if p not in existing]
        return ConfusionLexicon(entries=tuple(merged), max_distance=self.max_distance)

    @classmethod
    def from_lines(cls, lines: Iterable[str], source: str = "<lines>") -> "ConfusionLexicon":
        max_distance: Optional[int] = None
        entries: list[tuple[NormalizedQuery, NormalizedQuery]] = []
        for line_number, line in enumerate(lines, start=1):
            text = line.rstrip("\n")
            if text.startswith(_HEADER):
                try:
                    max_distance = int(text[len(_HEADER):])
                except ValueError:
                    raise ConfusionLexiconError(f"{source}:{line_number}: bad header {text!r}") from None
                continue
            if not text.strip() or text.startswith("#"):
                continue
            parts = text.split("\t")
            if len(parts) != 2:
                raise ConfusionLexiconError(f"{source}:{line_number}: expected 'true<TAB>corrupted'")
            try:
                entries.append((normalize(parts[0]), normalize(parts[1])))
            except EmptyQueryError:
                raise ConfusionLexiconError(f"{source}:{line_number}: empty phrase") from None
        if max_distance is None:
            raise ConfusionLexiconError(f"{source}: missing {_HEADER}N header")
        if max_distance < 0:
            raise ConfusionLexiconError(f"{source}: max_distance must be non-negative")
        return cls(entries=tuple(entries), max_distance=max_distance)

    @classmethod
    def from_file(cls, path: Union[str, Path]) -> "ConfusionLexicon":
        path = Path(path)
        if not path.is_file():
            raise InputFileError(f"confusion lexicon not found: {path}")
        with path.open(encoding="utf-8") as handle:
            return cls.from_lines(handle, source=str(path))

    def to_text(self) -> str:
        lines = [f"{_HEADER}{self.max_distance}"]
        lines.extend(f"{true}\t{corrupted}" for true, corrupted in self.entries)
        return "\n".join(lines) + "\n"


def load_confusions(path: Union[str, Path, None] = None) -> ConfusionLexicon:
    if path is None:
        path = settings.confusions_path or BUNDLED_CONFUSIONS
    return ConfusionLexicon.from_file(path)


@dataclass(frozen=True)
class ConfusionReport:
    checked: int
    bound: int
    violations: list[tuple[NormalizedQuery, NormalizedQuery, int]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def validate_confusions(
    confusions: ConfusionLexicon,
    lexicon: PronouncingLexicon,
    bound: Optional[int] = None,
) -> ConfusionReport:
    """Flag every pair whose phonetic distance exceeds ``bound`` (default: the file header)."""
    limit = confusions.max_distance if bound is None else bound
    violations = []
    for true, corrupted in confusions:
        distance = query_phonetic_distance(true, corrupted, lexicon)
        if distance > limit:
            violations.append((true, corrupted, distance))
    for true, corrupted, distance in violations:
        logger.warning(f"Confusion {true!r} -> {corrupted!r} has phonetic distance {distance} > {limit}")
    return ConfusionReport(checked=len(confusions), bound=limit, violations=violations)


def _phone_string(words: Iterable[str], lexicon: PronouncingLexicon) -> str:
    return "".join(_PHONE_CHARS[p] for p in g2p(" ".join(words), lexicon))


def mine_confusions(
    lexicon: PronouncingLexicon,
    words: Iterable[str],
    bound: int = 1,
    limit: int = 5,
) -> dict[str, list[tuple[str, int]]]:
    """Near-homophones of each word among the lexicon's other entries.

    Returns ``word -> [(neighbor, distance), ...]`` ordered by distance then
    spelling, at most ``limit`` neighbors per word.
    """
    vocabulary = lexicon.words()
    choices = [_phone_string([w], lexicon) for w in vocabulary]
    neighbors: dict[str, list[tuple[str, int]]] = {}
    for word in dict.fromkeys(words):
        target = _phone_string([word], lexicon)
        if not target:
            continue
        hits = process.extract(
            target,
            choices,
            scorer=Levenshtein.distance,
            score_cutoff=bound,
            limit=None,
        )
        found = sorted(
            (int(score), vocabulary[index])
            for _, score, index in hits
            if vocabulary[index] != word and choices[index] != target
        )
        neighbors[word] = [(other, score) for score, other in found[:limit]]
    return neighbors


def augment_confusions(
    confusions: ConfusionLexicon,
    lexicon: PronouncingLexicon,
    bound: int = 1,
) -> ConfusionLexicon:
    """Add one-word-substitution corruptions of every true phrase that stay within the file bound."""
    trues = confusions.true_phrases()
    vocabulary = {w for phrase in trues for w in phrase.words}
    neighbors = mine_confusions(lexicon, sorted(vocabulary), bound=bound)
    taken = {c for _, c in confusions} | set(trues)
    extra: list[tuple[str, str]] = []
    for true in trues:
        words = true.words
        for i, word in enumerate(words):
            for other, _ in neighbors.get(word, []):
                candidate = normalize(" ".join(words[:i] + [other] + words[i + 1:]))
                if candidate in taken:
                    continue
                if query_phonetic_distance(true, candidate, lexicon) <= confusions.max_distance:
                    extra.append((true, candidate))
                    taken.add(candidate)
    logger.info(f"Mined {len(extra)} additional confusions within distance {bound}")
    return confusions.extended_with(extra)


@dataclass(frozen=True)
class GroundTruth:
    """Corrupted -> true mappings that actually occurred in a simulated log."""

    mapping: dict[str, str]

    def __len__(self) -> int:
        return len(self.mapping)

    def __contains__(self, corrupted: object) -> bool:
        return corrupted in self.mapping

    def get(self, corrupted: str) -> Optional[str]:
        return self.mapping.get(corrupted)

    def pairs(self) -> list[tuple[str, str]]:
        return sorted(self.mapping.items())

    def write(self, path: Union[str, Path]) -> None:
        with atomic_write(path) as handle:
            for corrupted, true in self.pairs():
                handle.write(f"{corrupted}\t{true}\n")

    @classmethod
    def read(cls, path: Union[str, Path]) -> "GroundTruth":
        path = Path(path)
        if not path.is_file():
            raise InputFileError(f"ground truth file not found: {path}")
        mapping: dict[str, str] = {}
        with path.open(encoding="utf-8") as handle:
            for line_number, line in enumerate(handle, start=1):
                text = line.rstrip("\n")
                if not text:
                    continue
                parts = text.split("\t")
                if len(parts) != 2:
                    raise ConfusionLexiconError(f"{path}:{line_number}: expected 'corrupted<TAB>true'")
                mapping[parts[0]] = parts[1]
        return cls(mapping=mapping)
