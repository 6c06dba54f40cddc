"""Pronouncing lexicon: word -> phoneme sequence, one pronunciation per word.

Lexicon files are UTF-8 lines ``word \\t PH PH PH ...``; ``#`` starts a comment.
The bundled file is layered on top of the CMU pronouncing dictionary (via the
``cmudict`` package) when that is enabled, bundled entries taking precedence.
"""
from __future__ import annotations

import re
from pathlib import Path
from types import MappingProxyType
from typing import Iterable, Mapping, Optional, Union

from ..config import settings
from ..errors import InputFileError, LexiconError
from ..utils import setup_logger

logger = setup_logger(__name__)

# ARPAbet, stress markers stripped.
PHONEMES: frozenset[str] = frozenset(
    """
    AA AE AH AO AW AY EH ER EY IH IY OW OY UH UW
    B CH D DH F G HH JH K L M N NG P R S SH T TH V W Y Z ZH
    """.split()
)
assert len(PHONEMES) == 39

PhonemeSequence = tuple[str, ...]

_STRESS_RE = re.compile(r"[0-9]")


def strip_stress(symbol: str) -> str:
    return _STRESS_RE.sub("", symbol)


def validate_sequence(tokens: Iterable[str]) -> PhonemeSequence:
    sequence = tuple(tokens)
    unknown = [t for t in sequence if t not in PHONEMES]
    if unknown:
        raise LexiconError(f"unknown phoneme(s): {' '.join(unknown)}")
    return sequence


class PronouncingLexicon:
    """Immutable word -> PhonemeSequence map keyed on normalized single words."""

    def __init__(self, entries: Mapping[str, PhonemeSequence]) -> None:
        for word in entries:
            if not word or word != word.lower() or any(ch.isspace() for ch in word):
                raise LexiconError(f"lexicon key is not a normalized single word: {word!r}")
        self._entries: Mapping[str, PhonemeSequence] = MappingProxyType(dict(entries))

    def __contains__(self, word: object) -> bool:
        return word in self._entries

    def __len__(self) -> int:
        return len(self._entries)

    def __reduce__(self):
        return (PronouncingLexicon, (dict(self._entries),))

    def get(self, word: str) -> Optional[PhonemeSequence]:
        return self._entries.get(word)

    @property
    def entries(self) -> Mapping[str, PhonemeSequence]:
        return self._entries

    def words(self) -> list[str]:
        return sorted(self._entries)

    def merged_with(self, overrides: "PronouncingLexicon") -> "PronouncingLexicon":
        combined = dict(self._entries)
        combined.update(overrides.entries)
        return PronouncingLexicon(combined)

    @classmethod
    def from_lines(cls, lines: Iterable[str], source: str = "<lines>") -> "PronouncingLexicon":
        entries: dict[str, PhonemeSequence] = {}
        for line_number, raw in enumerate(lines, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            word, sep, phones = line.partition("\t")
            if not sep or not phones.strip():
                raise LexiconError(f"{source}:{line_number}: expected 'word<TAB>phonemes'")
            word = word.strip().lower()
            try:
                sequence = validate_sequence(strip_stress(p) for p in phones.split())
            except LexiconError as exc:
                raise LexiconError(f"{source}:{line_number}: {exc}") from None
            if word in entries:
                logger.debug(f"{source}:{line_number}: duplicate entry for {word!r}, keeping the first")
                continue
            entries[word] = sequence
        return cls(entries)

    @classmethod
    def from_file(cls, path: Union[str, Path]) -> "PronouncingLexicon":
        path = Path(path)
        if not path.exists():
            raise InputFileError(f"lexicon file not found: {path}")
        with path.open("r", encoding="utf-8") as handle:
            lexicon = cls.from_lines(handle, source=str(path))
        logger.info(f"Loaded {len(lexicon)} pronunciations from {path}")
        return lexicon

    @classmethod
    def from_cmudict(cls) -> "PronouncingLexicon":
        """First pronunciation of every single-word CMU dictionary entry, stress stripped."""
        import cmudict

        entries: dict[str, PhonemeSequence] = {}
        for word, pronunciations in cmudict.dict().items():
            if not pronunciations or any(ch.isspace() for ch in word):
                continue
            entries[word.lower()] = tuple(strip_stress(p) for p in pronunciations[0])
        logger.info(f"Loaded {len(entries)} pronunciations from the CMU pronouncing dictionary")
        return cls(entries)


def load_lexicon(
    path: Union[str, Path, None] = None,
    use_cmudict: Optional[bool] = None,
) -> PronouncingLexicon:
    """Bundled (or given) lexicon file, optionally layered over the CMU dictionary."""
    path = Path(path) if path is not None else settings.lexicon_path
    use_cmudict = settings.use_cmudict if use_cmudict is None else use_cmudict
    lexicon = PronouncingLexicon.from_file(path)
    if use_cmudict:
        try:
            lexicon = PronouncingLexicon.from_cmudict().merged_with(lexicon)
        except ImportError:
            logger.warning("cmudict is not installed; using the bundled lexicon only")
    return lexicon
