"""Lowercasing, tokenizing, and overlap helpers shared by retrieval, NLU, and ranking."""

from __future__ import annotations

import re
import unicodedata
from typing import Iterable

_APOSTROPHES = re.compile(r"[‘’'`]")
_NON_ALNUM = re.compile(r"[^a-z0-9]+")
_SENTENCE_END = re.compile(r"(?<=[.!?])\s+")

STOPWORDS = frozenset(
    """a an the and or but if then else when while of to in on at by for with
    about against between into through during before after above below from up
    down out off over under again once here there all any both each few more
    most other some such no nor not only own same so than too very can will
    just should now is are was were be been being do does did done have has
    had having i you he she it we they me him her us them my your his its our
    their this that these those what which who whom whose am as""".split()
)


def normalize(text: str) -> str:
    """Lowercase, strip accents and punctuation, collapse whitespace."""
    text = unicodedata.normalize("NFKD", text)
    text = "".join(ch for ch in text if not unicodedata.combining(ch))
    text = _APOSTROPHES.sub("", text.lower())
    return _NON_ALNUM.sub(" ", text).strip()


def tokens(text: str) -> list[str]:
    return normalize(text).split()


def token_set(text: str) -> frozenset[str]:
    return frozenset(tokens(text))


def content_tokens(text: str) -> frozenset[str]:
    """Tokens with stopwords removed; the words that carry meaning."""
    return frozenset(t for t in tokens(text) if t not in STOPWORDS)


def word_count(text: str) -> int:
    """Whitespace-token count of the raw text."""
    return len(text.split())


def contains_phrase(text: str, phrase: str) -> bool:
    """Word-bounded containment after normalization.

    Multi-word phrases match as a contiguous token run, so "sci-fi" in the
    query matches the stored alias "sci fi" and vice versa.
    """
    hay = f" {normalize(text)} "
    needle = f" {normalize(phrase)} "
    return needle.strip() != "" and needle in hay


def overlap_ratio(text: str, previous: Iterable[str]) -> float:
    """Share of this text's tokens already present in the previous texts."""
    own = token_set(text)
    if not own:
        return 0.0
    seen: set[str] = set()
    for prior in previous:
        seen.update(tokens(prior))
    return len(own & seen) / len(own)


def first_sentence(text: str) -> str:
    parts = _SENTENCE_END.split(text.strip(), maxsplit=1)
    return parts[0] if parts else text.strip()
