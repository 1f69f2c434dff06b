"""Zipf-distributed synthetic corpora with a tunable shared vocabulary."""

from __future__ import annotations

import numpy as np

_CONSONANTS = "bcdfghjklmnprstvwz"
_VOWELS = "aeiou"
_SYLLABLES = [c + v for c in _CONSONANTS for v in _VOWELS]


def pseudo_word(index: int) -> str:
    """Pronounceable lowercase word, distinct for every non-negative index."""
    base = len(_SYLLABLES)
    parts = [_SYLLABLES[index % base]]
    index //= base
    while index:
        parts.append(_SYLLABLES[index % base])
        index //= base
    return "".join(reversed(parts))


def zipf_weights(vocab_size: int, exponent: float = 1.0) -> np.ndarray:
    ranks = np.arange(1, vocab_size + 1, dtype=float)
    w = ranks**-exponent
    return w / w.sum()


def generate_synthetic_corpora(
    n_categories: int,
    vocab_size: int,
    tokens_per_category: int,
    similarity: float,
    rng_seed: int = 0,
    zipf_exponent: float = 1.0,
) -> dict[str, list[str]]:
    """Draw one i.i.d. Zipf token stream per category.

    Every category ranks ``vocab_size`` words by the same Zipf law. A random
    ``similarity`` fraction of the ranks holds a word shared by all
    categories; the other ranks hold words private to each category. So
    ``similarity=1`` gives identical distributions and ``similarity=0``
    disjoint vocabularies.
    """
    if n_categories < 2:
        raise ValueError(f"n_categories must be >= 2, got {n_categories}")
    if vocab_size < 10:
        raise ValueError(f"vocab_size must be >= 10, got {vocab_size}")
    if tokens_per_category < 1:
        raise ValueError(f"tokens_per_category must be >= 1, got {tokens_per_category}")
    if not 0.0 <= similarity <= 1.0:
        raise ValueError(f"similarity must lie in [0, 1], got {similarity}")
    if not zipf_exponent >= 0:
        raise ValueError(f"zipf_exponent must be >= 0, got {zipf_exponent}")

    rng = np.random.default_rng(rng_seed)
    probs = zipf_weights(vocab_size, zipf_exponent)
    shared = np.zeros(vocab_size, dtype=bool)
    shared[rng.choice(vocab_size, size=round(similarity * vocab_size), replace=False)] = True

    width = len(str(n_categories - 1))
    corpora = {}
    for c in range(n_categories):
        ranks = rng.choice(vocab_size, size=tokens_per_category, p=probs)
        ids = np.where(shared[ranks], ranks, vocab_size * (c + 1) + ranks)
        corpora[f"cat{c:0{width}d}"] = [pseudo_word(int(i)) for i in ids]
    return corpora
