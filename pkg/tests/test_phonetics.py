"""Tests for G2P, the pronouncing lexicon and phonetic edit distance."""
import pickle

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from app.mondegreen.errors import InputFileError, LexiconError
from app.mondegreen.phonetics import (
    PHONEMES,
    PronouncingLexicon,
    g2p,
    letters_to_phonemes,
    normalized_phonetic_distance,
    phonetic_distance,
    query_normalized_distance,
    query_phonetic_distance,
    within_threshold,
)
from app.mondegreen.query_model import normalize


def levenshtein_ref(a, b):
    """Textbook dynamic program over two sequences."""
    n, m = len(a), len(b)
    previous = list(range(m + 1))
    for i in range(1, n + 1):
        current = [i] + [0] * m
        for j in range(1, m + 1):
            change = previous[j - 1] + (a[i - 1] != b[j - 1])
            current[j] = min(previous[j] + 1, current[j - 1] + 1, change)
        previous = current
    return previous[m]


def q(text):
    return normalize(text)


def test_lexicon_word(lexicon):
    assert g2p(q("roxanne"), lexicon) == ("R", "AA", "K", "S", "AE", "N")


def test_multi_word_queries_concatenate(lexicon):
    assert g2p(q("rocks and"), lexicon) == ("R", "AA", "K", "S", "AE", "N", "D")


def test_punctuation_falls_back_to_bare_word(lexicon):
    assert g2p(q("roxanne!"), lexicon) == g2p(q("roxanne"), lexicon)


def test_digits_are_spelled_out(lexicon):
    assert g2p(q("b4"), lexicon) == ("B", "F", "AO", "R")


def test_letter_rules():
    assert letters_to_phonemes("zorb") == ("Z", "AO", "R", "B")
    assert letters_to_phonemes("yak") == ("Y", "AE", "K")
    assert letters_to_phonemes("ball") == ("B", "AE", "L")
    assert letters_to_phonemes("bike") == ("B", "IH", "K")


def test_letter_rules_drop_unknown_characters():
    assert letters_to_phonemes("ééé") == ()


def test_letter_rules_only_emit_known_phonemes():
    for word in ("quickly", "knight", "photograph", "thumbwrestling", "xylophone"):
        assert set(letters_to_phonemes(word)) <= PHONEMES


@pytest.mark.parametrize(
    "q1, q2, expected",
    [
        ("rocks and", "roxanne", 1),
        ("rocks ann", "roxanne", 0),
        ("look out music", "work out music", 2),
        ("how stores", "house tours", 1),
        ("roxanne", "roxanne", 0),
    ],
)
def test_query_distances(lexicon, q1, q2, expected):
    assert query_phonetic_distance(q(q1), q(q2), lexicon) == expected


def test_identical_queries_have_zero_distance_even_out_of_vocabulary(lexicon):
    assert query_phonetic_distance(q("qwzx vbnm"), q("qwzx vbnm"), lexicon) == 0


def test_normalized_distance(lexicon):
    assert query_normalized_distance(q("rocks and"), q("roxanne"), lexicon) == pytest.approx(1 / 7)
    assert normalized_phonetic_distance((), ()) == 0.0


def test_within_threshold(lexicon):
    assert within_threshold(q("look out music"), q("work out music"), lexicon, tau=2)
    assert not within_threshold(q("look out music"), q("work out music"), lexicon, tau=1)
    assert not within_threshold(q("roxanne"), q("best gaming mouse"), lexicon, tau=2)


def test_within_threshold_normalized(lexicon):
    assert within_threshold(q("rocks and"), q("roxanne"), lexicon, tau=0, normalized=True, tau_ratio=0.25)
    assert not within_threshold(q("rocks and"), q("roxanne"), lexicon, tau=0, normalized=True, tau_ratio=0.1)


def test_distance_matches_textbook_dynamic_program():
    a = ("K", "AE", "T")
    b = ("K", "AA", "T", "S")
    assert phonetic_distance(a, b) == levenshtein_ref(a, b) == 2


phoneme_sequences = st.lists(st.sampled_from(sorted(PHONEMES)), max_size=10).map(tuple)


@settings(max_examples=1000)
@given(phoneme_sequences, phoneme_sequences, phoneme_sequences)
def test_metric_axioms(a, b, c):
    ab, ba = phonetic_distance(a, b), phonetic_distance(b, a)
    assert ab >= 0
    assert (ab == 0) == (a == b)
    assert ab == ba
    assert phonetic_distance(a, c) <= ab + phonetic_distance(b, c)


@settings(max_examples=500)
@given(phoneme_sequences, phoneme_sequences)
def test_distance_matches_reference(a, b):
    assert phonetic_distance(a, b) == levenshtein_ref(a, b)


@pytest.mark.slow
def test_metric_axioms_on_ten_thousand_triples():
    rng = np.random.default_rng(5)
    symbols = sorted(PHONEMES)
    for _ in range(10_000):
        a, b, c = (tuple(rng.choice(symbols, size=rng.integers(0, 9)).tolist()) for _ in range(3))
        ab = phonetic_distance(a, b)
        assert ab >= 0
        assert (ab == 0) == (a == b)
        assert ab == phonetic_distance(b, a)
        assert phonetic_distance(a, c) <= ab + phonetic_distance(b, c)


def test_lexicon_from_lines_strips_stress_and_skips_comments():
    lexicon = PronouncingLexicon.from_lines(["# comment", "cat\tK AE1 T", "", "cat\tK AA T"])
    assert lexicon.get("cat") == ("K", "AE", "T")
    assert len(lexicon) == 1


def test_lexicon_rejects_unknown_phoneme():
    with pytest.raises(LexiconError):
        PronouncingLexicon.from_lines(["cat\tK QQ T"])


def test_lexicon_requires_tab():
    with pytest.raises(LexiconError):
        PronouncingLexicon.from_lines(["cat K AE T"])


def test_lexicon_keys_must_be_normalized_words():
    with pytest.raises(LexiconError):
        PronouncingLexicon({"two words": ("T", "UW")})


def test_lexicon_missing_file(tmp_path):
    with pytest.raises(InputFileError):
        PronouncingLexicon.from_file(tmp_path / "missing.tsv")


def test_lexicon_overrides_take_precedence():
    base = PronouncingLexicon({"tomato": ("T", "AH", "M", "EY", "T", "OW")})
    override = PronouncingLexicon({"tomato": ("T", "AH", "M", "AA", "T", "OW")})
    assert base.merged_with(override).get("tomato") == ("T", "AH", "M", "AA", "T", "OW")


def test_lexicon_pickles(lexicon):
    clone = pickle.loads(pickle.dumps(lexicon))
    assert clone.entries == lexicon.entries


def test_cmudict_lexicon():
    pytest.importorskip("cmudict")
    lexicon = PronouncingLexicon.from_cmudict()
    assert lexicon.get("cat") == ("K", "AE", "T")
    assert len(lexicon) > 100_000
