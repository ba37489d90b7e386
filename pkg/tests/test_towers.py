from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from pascal_adic import oracles
from pascal_adic.exactnum import binomial
from pascal_adic.towers import (
    CapExceeded,
    Extender,
    Point,
    UndefinedAtDepth,
    apply_T,
    apply_T_search,
    base_point,
    build_towers,
    find_subsequence,
    k_n,
    mu_p_interval,
    orbit,
    orbit_curve,
    orbit_letters,
    rung_digits,
    rung_index,
    rung_lookup,
    sample_mu_p,
)
from pascal_adic.dyadicg import ab_indicator
from pascal_adic.curves import phi_g
from pascal_adic.blocks import BlockId

points = st.integers(1, 12).flatmap(lambda d: st.integers(0, (1 << d) - 1).map(lambda j: Point.from_index(j, d)))


def test_small_towers():
    assert [t.rungs for t in build_towers(2)] == [(0,), (1, 2), (3,)]
    with pytest.raises(CapExceeded):
        build_towers(30)


def test_towers_partition_and_heights():
    for n in range(1, 9):
        towers = build_towers(n)
        assert sorted(j for t in towers for j in t.rungs) == list(range(1 << n))
        assert [t.height for t in towers] == list(oracles.pascal_row(n))


@given(points)
def test_digit_rule_matches_search(x):
    for n in range(1, x.depth + 1):
        assert rung_lookup(n)[x.index(n)] == (k_n(x, n), rung_index(x, n))


@given(points)
def test_T_digit_rule_equals_stacking(x):
    try:
        y = apply_T(x)
    except UndefinedAtDepth:
        with pytest.raises(UndefinedAtDepth):
            apply_T_search(x)
        return
    assert apply_T_search(x) == y


@given(st.integers(1, 12), st.data())
def test_rung_digits_inverse(n, data):
    k = data.draw(st.integers(0, n))
    r = data.draw(st.integers(0, binomial(n, k) - 1))
    x = Point(rung_digits(n, k, r))
    assert (k_n(x, n), rung_index(x, n)) == (k, r)


def test_half_is_undefined_at_every_depth():
    for depth in (1, 5, 40):
        with pytest.raises(UndefinedAtDepth):
            apply_T(Point.from_rational(Fraction(1, 2), depth))


def test_point_parsing():
    x = Point.from_bits("0.0110")
    assert x.digits == (0, 1, 1, 0)
    assert x.value() == Fraction(3, 8)
    with pytest.raises(ValueError):
        Point.from_rational(Fraction(1, 3), 8)


def test_orbit_spells_blocks():
    for n in range(1, 10):
        for k in range(n + 1):
            assert orbit_letters(base_point(n, k), binomial(n, k)) == oracles.word(n, k)


def test_orbit_curve_equals_phi_g():
    g = ab_indicator()
    bid = BlockId(9, 4)
    curve = orbit_curve(g, base_point(9, 4), bid.length)
    assert list(curve.values) == [phi_g(g, bid, t) for t in curve.ts]


def test_extender_deepens_top_points():
    # 1100 followed by zeros stays on a top rung forever
    x = Point.from_bits("1100")
    with pytest.raises(UndefinedAtDepth):
        orbit(x, 3)
    with pytest.raises(UndefinedAtDepth):
        orbit(x, 3, Extender("zeros"), max_depth=64)
    pts = orbit(x, 5, Extender("bernoulli", seed=3))
    assert pts == orbit(x, 5, Extender("bernoulli", seed=3))


def test_sampling_is_seeded():
    assert sample_mu_p(Fraction(1, 3), 50, seed=7) == sample_mu_p(Fraction(1, 3), 50, seed=7)
    assert mu_p_interval(Fraction(1, 3), (1, 0, 0)) == Fraction(4, 27)


def test_find_subsequence():
    half = Point.from_rational(Fraction(1, 2), 64)
    # level 1 always qualifies: the rung index there is 0
    assert find_subsequence(half, 1, 64) == 1
    # 1/2 sits on the top rung at every level
    assert find_subsequence(half, 2, 64, n_min=2) is None
    x = sample_mu_p(Fraction(1, 2), 200, seed=1)
    n = find_subsequence(x, 5, 200, n_min=40)
    assert n is not None and 5 * rung_index(x, n) < binomial(n, k_n(x, n))
    with pytest.raises(ValueError):
        find_subsequence(x, 5, 400)
