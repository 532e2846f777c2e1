"""Text primitives: tokenization, lexicon matching, mark counting, sentiment.

Tokenization is bare whitespace splitting plus lowercasing; tokens keep
their punctuation ("stupid!" != "stupid").  Lexicon lookups strip trailing
``.,!?;:`` from the token first, so "stupid!" still hits the bad-word list.
The emoticon set lives in ``data/emoticons.txt`` so tests and docs share
one source.
"""

from __future__ import annotations

import re
from pathlib import Path
from typing import Iterable

from .corpus import CommentRecord, Lexicon, Sentiment

# Multiset of lowercase tokens, produced by tokenize().
TokenBag = list[str]

_TRAILING_PUNCT = ".,!?;:"

_EMOTICON_FILE = Path(__file__).parent / "data" / "emoticons.txt"

EMOTICONS: tuple[str, ...] = tuple(
    line for line in _EMOTICON_FILE.read_text(encoding="utf-8").splitlines() if line
)

# Longest-first alternation so e.g. ":-)" is consumed before a shorter
# pattern could match inside it.
_EMOTICON_RE = re.compile(
    "|".join(re.escape(e) for e in sorted(EMOTICONS, key=len, reverse=True))
)

_HYPERLINK_RE = re.compile(r"https?://|www\.", re.IGNORECASE)


def tokenize(text: str) -> TokenBag:
    """Split on whitespace runs, lowercase, drop empty tokens."""
    return text.lower().split()


def lookup_token(token: str) -> str:
    """Canonical form used for lexicon membership tests."""
    return token.rstrip(_TRAILING_PUNCT)


def bad_word_count(bag: Iterable[str], lexicon: Lexicon) -> int:
    """Number of tokens (with multiplicity) found in the bad-word list."""
    return sum(1 for token in bag if lookup_token(token) in lexicon.bad_words)


def jaccard(a: Iterable[str], b: Iterable[str]) -> float:
    """Set Jaccard similarity of two token bags; 0.0 when both are empty."""
    set_a, set_b = set(a), set(b)
    union = set_a | set_b
    if not union:
        return 0.0
    return len(set_a & set_b) / len(union)


def count_marks(text: str) -> tuple[int, int, int]:
    """(question marks, hyperlinks, emoticons) found in ``text``.

    Hyperlinks are non-overlapping occurrences of ``http://``, ``https://``
    or ``www.`` (case-insensitive); emoticons come from EMOTICONS.
    """
    questions = text.count("?")
    hyperlinks = len(_HYPERLINK_RE.findall(text))
    emoticons = len(_EMOTICON_RE.findall(text))
    return questions, hyperlinks, emoticons


def sentiment(text: str, lexicon: Lexicon) -> Sentiment:
    """Polarity by lexicon hit counts: positive > negative wins, ties neutral."""
    positive = negative = 0
    for token in tokenize(text):
        canon = lookup_token(token)
        if canon in lexicon.positive_words:
            positive += 1
        elif canon in lexicon.negative_words:
            negative += 1
    if positive > negative:
        return Sentiment.POSITIVE
    if negative > positive:
        return Sentiment.NEGATIVE
    return Sentiment.NEUTRAL


def comment_sentiment(comment: CommentRecord, lexicon: Lexicon) -> Sentiment:
    """Comment polarity; a precomputed sentiment field overrides the lexicon."""
    if comment.sentiment is not None:
        return comment.sentiment
    return sentiment(comment.text, lexicon)
