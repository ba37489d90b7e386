import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from pascal_adic.blocks import BlockId
from pascal_adic.curves import eval_Fg
from pascal_adic.dyadicg import (
    DyadicFunction,
    NotCohomologous,
    S_ratio,
    ab_indicator,
    coboundary_example,
    cohomology_test,
    covariance_Pg,
    gamma_decay_profile,
    is_cohomologous_to_constant,
    lifted_sum,
    pg_sign,
    polynomial_Pg,
    tower_sums,
    transition_family,
    transition_h,
    transition_numerator,
    transition_pg_closed_form,
)
from pascal_adic.exactnum import PolynomialP, binomial
from pascal_adic.towers import Point, UndefinedAtDepth, apply_T

rationals = st.fractions(min_value=-4, max_value=4, max_denominator=6)


@st.composite
def observables(draw, max_level=5):
    N0 = draw(st.integers(1, max_level))
    return DyadicFunction(N0, tuple(draw(st.lists(rationals, min_size=1 << N0, max_size=1 << N0))))


@given(observables())
def test_pg_two_routes_agree(g):
    assert polynomial_Pg(g) == covariance_Pg(g)


@given(observables(max_level=4))
def test_pg_invariant_under_lifting(g):
    assert polynomial_Pg(g.lift()) == polynomial_Pg(g)
    assert tower_sums(g.lift()).lifted(g.level + 3, 2) == tower_sums(g).lifted(g.level + 3, 2)


@given(observables(max_level=4), rationals)
def test_pg_ignores_constants(g, c):
    assert polynomial_Pg(g + c) == polynomial_Pg(g)


def test_ab_indicator_polynomial():
    p = PolynomialP.p()
    assert polynomial_Pg(ab_indicator()) == 2 * p * (1 - p)
    assert pg_sign(ab_indicator(), Fraction(1, 3)) == 1


@pytest.mark.parametrize("N0", range(1, 8))
def test_transition_family_closed_form_and_multiplicity(N0):
    P = polynomial_Pg(transition_family(N0))
    assert P == transition_pg_closed_form(N0)
    assert P.root_multiplicity(Fraction(1, 2)) == N0 - 1


@pytest.mark.parametrize("N0", range(2, 8))
def test_transition_family_ratio_recurrence(N0):
    # P_N = N/(N-1) (1 - 2p) P_{N-1}; both sides vanish at p = 0
    p = PolynomialP.p()
    lhs = polynomial_Pg(transition_family(N0))
    rhs = polynomial_Pg(transition_family(N0 - 1)) * (1 - 2 * p) * Fraction(N0, N0 - 1)
    assert lhs == rhs


@given(st.integers(1, 5), st.integers(0, 12), st.data())
def test_S_recurrence_matches_closed_form(N0, extra, data):
    n = N0 + extra
    k = data.draw(st.integers(0, n))
    assert S_ratio(N0, n, k) * binomial(n, k) == transition_h(N0, n, k)
    h = tower_sums(transition_family(N0)).h
    assert lifted_sum(h, N0, n, k) == transition_h(N0, n, k)


def test_S1_base():
    assert S_ratio(1, 10, 3) == Fraction(10 - 6, 10)


def test_transition_numerators_leading_terms():
    k = 1500
    c = binomial(2 * k, k)
    for i in (2, 3, 5):
        v2 = transition_numerator(2, k, i) * 2 ** i * 4 * k * k / (c * i * (i - 1))
        assert abs(v2 - 1) < Fraction(1, 50)
        v4 = transition_numerator(4, k, i) * 2 ** i * 4 * k ** 3 / (c * (-3) * i * (i - 1))
        assert abs(v4 - 1) < Fraction(1, 20)


def test_coboundary_cohomology_and_bounded_sums():
    g = coboundary_example()
    res = cohomology_test(g)
    assert res.constant == 0
    for j in range(1 << 6):
        x = Point.from_index(j, 6)
        try:
            y = apply_T(x)
        except UndefinedAtDepth:
            continue
        assert res.transfer(x) - res.transfer(y) == g(x)
    bid = BlockId(12, 5)
    assert max(abs(eval_Fg(g, bid, ell)) for ell in range(bid.length + 1)) <= 1


def test_constant_plus_coboundary_detected():
    g = coboundary_example() + Fraction(3, 2)
    assert cohomology_test(g).constant == Fraction(3, 2)
    with pytest.raises(NotCohomologous):
        cohomology_test(ab_indicator())
    assert not is_cohomologous_to_constant(transition_family(3))


def test_json_roundtrip(tmp_path):
    g = DyadicFunction(2, (Fraction(1, 2), -1, 0, Fraction(7, 3)))
    path = tmp_path / "g.json"
    g.save(path)
    assert DyadicFunction.load(path) == g
    assert g.to_json()["values"] == ["1/2", "-1", "0", "7/3"]


def test_observable_validation_and_evaluation():
    with pytest.raises(ValueError):
        DyadicFunction(2, (1, 2, 3))
    g = DyadicFunction.indicator(2, Fraction(1, 4), Fraction(3, 4))
    assert g(Fraction(1, 2)) == 1 and g(Fraction(0)) == 0
    assert g(Point.from_bits("011")) == 1


def test_decay_profile():
    prof = gamma_decay_profile(ab_indicator(), 120, 60, i_max=20, fit_range=(5, 20))
    assert prof.max_at(5) > 10 * prof.max_at(20)
    assert 0 < prof.rho < 1
    with pytest.raises(ValueError):
        gamma_decay_profile(coboundary_example(), 120, 60)
    with pytest.raises(ValueError):
        gamma_decay_profile(ab_indicator(), 120, 5)


def test_random_observables_reproducible():
    rng = random.Random(5)
    vals = [Fraction(rng.randint(-3, 3)) for _ in range(8)]
    g = DyadicFunction(3, tuple(vals))
    assert polynomial_Pg(g) == covariance_Pg(g)
