from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from pascal_adic import oracles
from pascal_adic.blocks import (
    BlockId,
    CapExceeded,
    base_letter,
    count_a,
    count_a_prefix,
    generalized_letter_at,
    generalized_letter_length,
    generalized_materialize,
    height,
    height_nk,
    increment_at,
    letter_at,
    materialize,
)
from pascal_adic.exactnum import binomial


@st.composite
def blocks(draw, n_max=16):
    n = draw(st.integers(1, n_max))
    return BlockId(n, draw(st.integers(0, n)))


def test_golden_word():
    assert materialize(BlockId(6, 3)) == "aaabaababbaababbabbb"


def test_edges_are_single_letters():
    assert materialize(BlockId(7, 0)) == "a"
    assert materialize(BlockId(7, 7)) == "b"


def test_blockid_validates():
    with pytest.raises(ValueError):
        BlockId(0, 0)
    with pytest.raises(ValueError):
        BlockId(4, 5)


def test_cap():
    with pytest.raises(CapExceeded):
        materialize(BlockId(40, 20))
    # positional queries still work far beyond the cap
    assert letter_at(BlockId(200, 100), 1) == "a"


@given(blocks())
def test_materialize_matches_triangle_oracle(bid):
    assert materialize(bid) == oracles.word(bid.n, bid.k)


@given(blocks(), st.data())
def test_letter_at_matches_word(bid, data):
    ell = data.draw(st.integers(1, bid.length))
    w = oracles.word(bid.n, bid.k)
    assert letter_at(bid, ell) == w[ell - 1]
    assert increment_at(bid, ell) == (1 if w[ell - 1] == "a" else -1)
    assert count_a_prefix(bid, ell) == w[:ell].count("a")


@given(blocks(n_max=60))
def test_height_identity(bid):
    n, k = bid.n, bid.k
    assert count_a(bid) == binomial(n - 1, k)
    assert Fraction(height(bid)) == Fraction(n - 2 * k, n) * binomial(n, k)
    assert height_nk(n, k) == height(bid)


def test_height_outside_triangle():
    assert height_nk(5, 6) == 0


@given(st.integers(1, 4), st.data())
def test_generalized_words_match_concatenation(N0, data):
    n = data.draw(st.integers(N0, N0 + 7))
    k = data.draw(st.integers(0, n))
    ref = oracles.generalized_word(N0, n, k)
    assert generalized_materialize(N0, n, k) == ref
    assert generalized_letter_length(N0, n, k) == len(ref)
    ell = data.draw(st.integers(1, len(ref)))
    assert generalized_letter_at(N0, (n, k), ell) == ref[ell - 1]


def test_generalized_letter_counts_are_binomial():
    N0, n, k = 3, 11, 5
    word = generalized_materialize(N0, n, k)
    for j in range(N0 + 1):
        assert word.count(j) == binomial(n - N0, k - j)


def test_base_letters_on_edges():
    assert base_letter(3, 9, 0) == 0
    assert base_letter(3, 9, 9) == 3
