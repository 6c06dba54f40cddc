"""Grapheme-to-phoneme conversion and phonetic edit distance."""
from .distance import (
    normalized_phonetic_distance,
    phonetic_distance,
    query_normalized_distance,
    query_phonetic_distance,
    within_threshold,
)
from .g2p import LexiconG2P, PhoneticEncoder, encoder_for, g2p, letters_to_phonemes
from .lexicon import PHONEMES, PhonemeSequence, PronouncingLexicon, load_lexicon

__all__ = [
    "PHONEMES",
    "LexiconG2P",
    "PhonemeSequence",
    "PhoneticEncoder",
    "PronouncingLexicon",
    "encoder_for",
    "g2p",
    "letters_to_phonemes",
    "load_lexicon",
    "normalized_phonetic_distance",
    "phonetic_distance",
    "query_normalized_distance",
    "query_phonetic_distance",
    "within_threshold",
]
