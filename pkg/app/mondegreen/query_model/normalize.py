"""Canonical query text.

Every count table and the rewrite snapshot are keyed on ``NormalizedQuery``:
Unicode-aware lowercase, trimmed, internal whitespace runs collapsed to one
space. Punctuation and diacritics are kept.
"""
from __future__ import annotations

from ..errors import EmptyQueryError


class NormalizedQuery(str):
    """A query string that already satisfies the canonical form.

    Constructing one from a non-canonical string raises ``ValueError``; use
    :func:`normalize` to canonicalize raw text.
    """

    __slots__ = ()

    def __new__(cls, text: str) -> "NormalizedQuery":
        if isinstance(text, NormalizedQuery):
            return text
        if not text or not text.strip():
            raise EmptyQueryError(text)
        if text != _canonical(text):
            raise ValueError(f"not a normalized query: {text!r}")
        return super().__new__(cls, text)

    @property
    def words(self) -> list[str]:
        return self.split(" ")

    def __repr__(self) -> str:
        return f"NormalizedQuery({str.__repr__(self)})"


def _canonical(raw: str) -> str:
    return " ".join(raw.lower().split())


def normalize(raw: str) -> NormalizedQuery:
    """Lowercase, trim and collapse whitespace.

    >>> normalize("Gaming  Chair ")
    NormalizedQuery('gaming chair')
    """
    if isinstance(raw, NormalizedQuery):
        return raw
    text = _canonical(raw)
    if not text:
        raise EmptyQueryError(raw)
    return str.__new__(NormalizedQuery, text)
