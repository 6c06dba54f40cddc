"""Grapheme-to-phoneme conversion for normalized queries."""
from __future__ import annotations

import weakref
from typing import Optional, Protocol

from ..query_model import NormalizedQuery
from .lexicon import PhonemeSequence, PronouncingLexicon

DIGIT_WORDS = ("zero", "one", "two", "three", "four", "five", "six", "seven", "eight", "nine")

# Greedy longest match, tried in order of decreasing grapheme length.
LETTER_RULES: dict[str, tuple[str, ...]] = {
    "tch": ("CH",),
    "igh": ("AY",),
    "ch": ("CH",),
    "sh": ("SH",),
    "th": ("TH",),
    "ph": ("F",),
    "wh": ("W",),
    "ng": ("NG",),
    "ck": ("K",),
    "qu": ("K", "W"),
    "kn": ("N",),
    "wr": ("R",),
    "gh": (),
    "ee": ("IY",),
    "ea": ("IY",),
    "oo": ("UW",),
    "ou": ("AW",),
    "ow": ("OW",),
    "oa": ("OW",),
    "ai": ("EY",),
    "ay": ("EY",),
    "ey": ("EY",),
    "oi": ("OY",),
    "oy": ("OY",),
    "au": ("AO",),
    "aw": ("AO",),
    "er": ("ER",),
    "ir": ("ER",),
    "ur": ("ER",),
    "ar": ("AA", "R"),
    "or": ("AO", "R"),
    "a": ("AE",),
    "b": ("B",),
    "c": ("K",),
    "d": ("D",),
    "e": ("EH",),
    "f": ("F",),
    "g": ("G",),
    "h": ("HH",),
    "i": ("IH",),
    "j": ("JH",),
    "k": ("K",),
    "l": ("L",),
    "m": ("M",),
    "n": ("N",),
    "o": ("AA",),
    "p": ("P",),
    "q": ("K",),
    "r": ("R",),
    "s": ("S",),
    "t": ("T",),
    "u": ("AH",),
    "v": ("V",),
    "w": ("W",),
    "x": ("K", "S"),
    "y": ("IY",),
    "z": ("Z",),
}
_MAX_GRAPHEME = max(len(g) for g in LETTER_RULES)
_VOWEL_LETTERS = frozenset("aeiouy")
_VOWEL_PHONES = frozenset("AA AE AH AO AW AY EH ER EY IH IY OW OY UH UW".split())


class PhoneticEncoder(Protocol):
    """Anything that maps a normalized query to a phoneme sequence."""

    def encode(self, query: NormalizedQuery) -> PhonemeSequence: ...


def letters_to_phonemes(word: str) -> PhonemeSequence:
    """Deterministic rule-based fallback for out-of-vocabulary words.

    Letters only: doubled consonants collapse, a silent final ``e`` is dropped,
    word-initial ``y`` is a glide, characters without a rule are skipped.
    """
    letters = "".join(ch for ch in word if ch in LETTER_RULES)
    if len(letters) > 2 and letters.endswith("e") and letters[-2] not in _VOWEL_LETTERS:
        letters = letters[:-1]

    phones: list[str] = []
    i = 0
    while i < len(letters):
        if i == 0 and letters[0] == "y" and len(letters) > 1:
            phones.append("Y")
            i += 1
            continue
        for size in range(min(_MAX_GRAPHEME, len(letters) - i), 0, -1):
            grapheme = letters[i:i + size]
            if grapheme in LETTER_RULES:
                for phone in LETTER_RULES[grapheme]:
                    if not (phones and phones[-1] == phone and phone not in _VOWEL_PHONES):
                        phones.append(phone)
                i += size
                break
    return tuple(phones)


class LexiconG2P:
    """Per-word lexicon lookup with letter-rule fallback; word sequences concatenate."""

    def __init__(self, lexicon: PronouncingLexicon, cache_size: Optional[int] = 1 << 20) -> None:
        self.lexicon = lexicon
        self._cache: dict[str, PhonemeSequence] = {}
        self._cache_size = cache_size

    def word(self, word: str) -> PhonemeSequence:
        entry = self.lexicon.get(word)
        if entry is not None:
            return entry
        stripped = "".join(ch for ch in word if ch.isalnum())
        if stripped != word:
            if not stripped:
                return ()
            entry = self.lexicon.get(stripped)
            if entry is not None:
                return entry
        return self._spell(stripped)

    def _spell(self, word: str) -> PhonemeSequence:
        phones: list[str] = []
        run = ""
        for ch in word:
            if ch.isdigit() and ch.isascii():
                if run:
                    phones.extend(letters_to_phonemes(run))
                    run = ""
                digit_word = DIGIT_WORDS[int(ch)]
                phones.extend(self.lexicon.get(digit_word) or letters_to_phonemes(digit_word))
            else:
                run += ch
        if run:
            phones.extend(letters_to_phonemes(run))
        return tuple(phones)

    def encode(self, query: NormalizedQuery) -> PhonemeSequence:
        cached = self._cache.get(query)
        if cached is not None:
            return cached
        phones: list[str] = []
        for word in query.split(" "):
            phones.extend(self.word(word))
        sequence = tuple(phones)
        if self._cache_size is None or len(self._cache) < self._cache_size:
            self._cache[query] = sequence
        return sequence


_ENCODERS: "weakref.WeakKeyDictionary[PronouncingLexicon, LexiconG2P]" = weakref.WeakKeyDictionary()


def encoder_for(lexicon: PronouncingLexicon) -> LexiconG2P:
    """Shared caching encoder per lexicon instance."""
    encoder = _ENCODERS.get(lexicon)
    if encoder is None:
        encoder = LexiconG2P(lexicon)
        _ENCODERS[lexicon] = encoder
    return encoder


def g2p(query: NormalizedQuery, lexicon: PronouncingLexicon) -> PhonemeSequence:
    """Phoneme sequence of a normalized query (no word-boundary token)."""
    return encoder_for(lexicon).encode(query)
