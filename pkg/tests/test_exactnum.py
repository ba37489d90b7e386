import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from pascal_adic import oracles
from pascal_adic.exactnum import (
    BinomialTable,
    PolynomialP,
    as_fraction,
    binomial,
    falling,
    fmt12,
    frac_str,
    poly_sign_at,
)

small_fracs = st.fractions(min_value=-5, max_value=5, max_denominator=12)
polys = st.lists(small_fracs, max_size=6).map(PolynomialP)


def test_binomial_matches_oracle_rows():
    for n in range(40):
        assert [binomial(n, k) for k in range(n + 1)] == list(oracles.pascal_row(n))


def test_binomial_outside_range_is_zero():
    assert binomial(5, -1) == 0
    assert binomial(5, 6) == 0
    with pytest.raises(ValueError):
        binomial(-1, 0)


def test_table_beyond_cache_uses_comb():
    t = BinomialTable(n_max=10)
    assert t(30, 12) == math.comb(30, 12)
    assert t.cached_rows() == 1


def test_check_pascal_detects_corruption():
    t = BinomialTable(n_max=64)
    t(20, 3)
    assert t.check_pascal() is None
    t._rows[12][5] += 1
    assert t.check_pascal() in {(12, 5), (13, 5), (13, 6)}


def test_as_fraction_float_goes_through_repr():
    assert as_fraction(0.4) == Fraction(2, 5)
    assert as_fraction("3/7") == Fraction(3, 7)


@given(polys, polys, small_fracs)
def test_ring_ops_commute_with_evaluation(P, Q, p):
    assert (P + Q)(p) == P(p) + Q(p)
    assert (P * Q)(p) == P(p) * Q(p)
    assert (P - Q)(p) == P(p) - Q(p)


@given(polys, small_fracs)
def test_divmod_linear_is_remainder_theorem(P, r):
    q, rem = P.divmod_linear(r)
    assert rem == P(r)
    assert q * (PolynomialP.p() - r) + rem == P


@given(st.integers(0, 6), st.integers(0, 4))
def test_root_multiplicity_of_constructed_poly(a, b):
    p = PolynomialP.p()
    P = (1 - 2 * p) ** a * (p + 3) ** b * 7
    assert P.root_multiplicity(Fraction(1, 2)) == a


def test_sign_and_format():
    p = PolynomialP.p()
    assert poly_sign_at(1 - 2 * p, Fraction(1, 3)) == 1
    assert poly_sign_at(1 - 2 * p, Fraction(1, 2)) == 0
    assert frac_str(Fraction(-3, 4)) == "-3/4"
    assert fmt12(Fraction(1, 3)) == "0.333333333333"
    assert falling(5, 3) == 60
