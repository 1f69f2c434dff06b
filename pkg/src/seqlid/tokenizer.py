"""Whitespace word tokens and coarse word shape tokens.

Shape codes::

    A   uppercase letter
    a   lowercase letter with an ascender (b d f h k l t)
    g   lowercase letter with a descender (g j p q y)
    i   the letter i
    x   any other lowercase or caseless letter
    0   digit
    .   everything else

Accented letters are classified by their base letter after canonical
decomposition, so ``é`` codes as ``x`` and ``Ï`` as ``A``.
"""

from __future__ import annotations

import enum
import unicodedata
from functools import lru_cache

ASCENDERS = frozenset("bdfhklt")
DESCENDERS = frozenset("gjpqy")
SHAPE_ALPHABET = frozenset("Aaxgi0.")


class TokenizerMode(str, enum.Enum):
    WORD = "word"
    SHAPE = "shape"


def word_tokenize(text: str) -> list[str]:
    """Split on runs of Unicode whitespace. Case and punctuation are kept."""
    return text.split()


@lru_cache(maxsize=4096)
def shape_code(ch: str) -> str:
    """Shape class of a single character."""
    base = unicodedata.normalize("NFD", ch)[0]
    if base.isdigit():
        return "0"
    if not base.isalpha():
        return "."
    if base.isupper():
        return "A"
    if base == "i":
        return "i"
    if base in ASCENDERS:
        return "a"
    if base in DESCENDERS:
        return "g"
    return "x"


def shape_word(word: str) -> str:
    return "".join(shape_code(ch) for ch in word)


def shape_encode(text: str) -> list[str]:
    """One shape token per whitespace-delimited word, same length as the word."""
    return [shape_word(w) for w in word_tokenize(text)]


def tokenize(text: str, mode: TokenizerMode | str = TokenizerMode.WORD) -> list[str]:
    mode = TokenizerMode(mode)
    if mode is TokenizerMode.SHAPE:
        return shape_encode(text)
    return word_tokenize(text)
