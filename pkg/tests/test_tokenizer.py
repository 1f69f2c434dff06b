import pytest
from hypothesis import given
from hypothesis import strategies as st

from seqlid.tokenizer import SHAPE_ALPHABET, TokenizerMode, shape_code, shape_encode, tokenize, word_tokenize


@pytest.mark.parametrize(
    "text, expected",
    [
        ("", []),
        ("The dog.", ["The", "dog."]),
        ("a  b\tc", ["a", "b", "c"]),
        ("  leading and trailing \n", ["leading", "and", "trailing"]),
        ("no break em", ["no", "break", "em"]),
    ],
)
def test_word_tokenize(text, expected):
    assert word_tokenize(text) == expected


@pytest.mark.parametrize(
    "text, expected",
    [
        ("The", ["Aax"]),
        ("dog", ["axg"]),
        ("A1 b!", ["A0", "a."]),
        ("", []),
        ("illicit", ["iaaixia"]),
    ],
)
def test_shape_encode(text, expected):
    assert shape_encode(text) == expected


@pytest.mark.parametrize(
    "ch, code",
    [
        ("É", "A"),
        ("é", "x"),
        ("ï", "i"),
        ("ç", "x"),
        ("ñ", "x"),
        ("ý", "g"),
        ("ł", "x"),  # no canonical decomposition
        ("Ω", "A"),
        ("ж", "x"),
        ("中", "x"),
        ("́", "."),  # bare combining accent
        ("٣", "0"),
        ("«", "."),
    ],
)
def test_shape_code_beyond_ascii(ch, code):
    assert shape_code(ch) == code


def test_tokenize_dispatches_on_mode():
    assert tokenize("Big dog", "word") == ["Big", "dog"]
    assert tokenize("Big dog", TokenizerMode.SHAPE) == ["Aig", "axg"]
    with pytest.raises(ValueError):
        tokenize("x", "lines")


@given(st.text())
def test_word_tokenize_idempotent(text):
    tokens = word_tokenize(text)
    assert word_tokenize(" ".join(tokens)) == tokens
    assert all(t and not any(c.isspace() for c in t) for t in tokens)


@given(st.text())
def test_shape_encode_preserves_count_length_alphabet(text):
    words = word_tokenize(text)
    shapes = shape_encode(text)
    assert len(shapes) == len(words)
    for w, s in zip(words, shapes):
        assert len(s) == len(w)
        assert set(s) <= SHAPE_ALPHABET
