import pytest
from hypothesis import given, strategies as st

from relorders.words import (
    IDENTITY,
    Ambient,
    FtaElement,
    ParseError,
    Word,
    abelianize,
    cyclic_decompose,
    format_element,
    format_word,
    parse_element,
    parse_word,
    power,
)

letters = st.lists(st.sampled_from([1, -1, 2, -2, 3, -3]), max_size=12)
words = letters.map(Word)


def test_reduction_cancels_adjacent_inverses():
    assert Word([1, 2, -2, -1, 1]).letters == (1,)
    assert Word([1, -1]) == IDENTITY


@pytest.mark.parametrize(
    "text, letters",
    [
        ("a b^-2 a", (1, -2, -2, 1)),
        ("1", ()),
        ("a^3", (1, 1, 1)),
        ("x1 x2^-1", (1, -2)),
        ("a a^-1 b", (2,)),
        ("  b ^ - 2 ", (-2, -2)),
    ],
)
def test_parse_word(text, letters):
    assert parse_word(text).letters == letters


@pytest.mark.parametrize("text, position", [("a $ b", 2), ("a^", 1), ("c", 0)])
def test_parse_word_errors_carry_position(text, position):
    with pytest.raises(ParseError) as info:
        parse_word(text, rank=2)
    assert info.value.position == position


def test_parse_element_with_vector():
    g = parse_element("a^2 | (3,-1)", Ambient(2, 2))
    assert g == FtaElement(Word([1, 1]), (3, -1))
    assert parse_element("b", Ambient(2, 1)).abelian_part == (0,)
    assert parse_element("1|(4)", Ambient(2, 1)) == FtaElement(IDENTITY, (4,))


def test_parse_element_rejects_wrong_length():
    with pytest.raises(ParseError):
        parse_element("a | (1,2)", Ambient(2, 1))


def test_format_roundtrip_examples():
    assert format_word(parse_word("a a b^-1 b^-1 a")) == "a^2 b^-2 a"
    assert format_element(FtaElement(IDENTITY, (4,))) == "1 | (4)"
    assert format_word(Word([30, -1]), rank=30) == "x30 x1^-1"


@given(words)
def test_format_parse_roundtrip(w):
    assert parse_word(format_word(w)) == w


@given(words, words, words)
def test_group_axioms(u, v, w):
    assert (u * v) * w == u * (v * w)
    assert u * ~u == IDENTITY
    assert ~(u * v) == ~v * ~u


@given(words, st.integers(-6, 6))
def test_power_matches_repeated_product(w, k):
    expected = IDENTITY
    base = w if k >= 0 else ~w
    for _ in range(abs(k)):
        expected = expected * base
    assert power(w, k) == expected


@given(words)
def test_cyclic_decompose(w):
    v, core = cyclic_decompose(w)
    assert ~v * core * v == w
    assert len(w) == 2 * len(v) + len(core)
    if len(core) > 1:
        assert core[0] != -core[-1]


@given(words, words)
def test_abelianize_is_a_homomorphism(u, v):
    a, b, c = abelianize(u, 3), abelianize(v, 3), abelianize(u * v, 3)
    assert c == tuple(x + y for x, y in zip(a, b))


def test_fta_element_arithmetic():
    g = FtaElement(Word([1]), (2,))
    assert g**2 == FtaElement(Word([1, 1]), (4,))
    assert g * ~g == FtaElement.identity(1)


def test_shortlex_order():
    ws = [parse_word(s) for s in ["b", "a^-1", "a", "1", "a b"]]
    assert [format_word(w) for w in sorted(ws)] == ["1", "a", "a^-1", "b", "a b"]
