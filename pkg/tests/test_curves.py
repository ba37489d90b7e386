from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from pascal_adic import oracles
from pascal_adic.blocks import BlockId
from pascal_adic.curves import (
    DegenerateDenominator,
    F_at,
    Fg_total,
    block_array,
    eval_F,
    eval_Fg,
    g_array,
    iter_g_steps,
    phi,
    phi_denominator,
    phi_g,
    r_scaling,
    renorm_Rg,
    sup_distance_to_Mp,
)
from pascal_adic.dyadicg import DyadicFunction, ab_indicator, transition_family
from pascal_adic.exactnum import binomial
from pascal_adic.selfaffine import compatible, eval_polyline


@st.composite
def interior_blocks(draw, n_max=14):
    n = draw(st.integers(2, n_max))
    return BlockId(n, draw(st.integers(1, n - 1)))


g_values = st.lists(st.integers(-3, 3), min_size=4, max_size=4).map(lambda v: DyadicFunction(2, tuple(v)))


@given(interior_blocks())
def test_F_matches_walk_oracle(bid):
    ref = oracles.walk(oracles.word(bid.n, bid.k))
    assert [eval_F(bid, ell) for ell in range(bid.length + 1)] == ref


def test_F_interpolates_linearly():
    bid = BlockId(6, 3)
    assert F_at(bid, Fraction(5, 2)) == Fraction(5, 2)
    assert F_at(bid, Fraction(7, 2)) == Fraction(5, 2)


@given(interior_blocks(n_max=40))
def test_phi_denominator_closed_form(bid):
    n, k = bid.n, bid.k
    want = binomial(n - 1, k - 1) * Fraction(2 * (n - k), n * (n - 1))
    assert phi_denominator(bid) == want
    assert phi(bid, Fraction(binomial(n - 1, k - 1), bid.length)) == 1


def test_phi_endpoints_and_edges():
    bid = BlockId(10, 4)
    assert phi(bid, 0) == 0 and phi(bid, 1) == 0
    with pytest.raises(DegenerateDenominator):
        phi(BlockId(5, 0), Fraction(1, 2))
    with pytest.raises(ValueError):
        phi(bid, Fraction(3, 2))


@given(interior_blocks(n_max=12))
def test_ab_indicator_reproduces_classical_sums(bid):
    g = ab_indicator()
    for ell in range(0, bid.length + 1, max(1, bid.length // 7)):
        assert eval_Fg(g, bid, ell) == eval_F(bid, ell)


@given(g_values, st.integers(2, 10), st.data())
def test_Fg_descent_matches_step_scan(g, n, data):
    k = data.draw(st.integers(0, n))
    bid = BlockId(n, k)
    steps = list(iter_g_steps(g, bid))
    assert len(steps) == sum(1 for _ in steps)
    acc = Fraction(0)
    for ell, v in enumerate(steps, start=1):
        acc += v
        assert eval_Fg(g, bid, ell) == acc
    assert acc == Fg_total(g, bid)


@given(g_values, st.integers(3, 11), st.data())
def test_renorm_dp_equals_scan(g, n, data):
    k = data.draw(st.integers(0, n))
    bid = BlockId(n, k)
    assert renorm_Rg(g, bid, mode="exact-dp").value == renorm_Rg(g, bid, mode="exact-scan").value


def test_renorm_modes():
    g = ab_indicator()
    bid = BlockId(60, 30)
    exact = renorm_Rg(g, bid).value
    approx = renorm_Rg(g, bid, mode="array-approx", m=20)
    assert approx.mode == "array-approx"
    assert approx.value <= exact
    with pytest.raises(ValueError):
        renorm_Rg(g, BlockId(40, 20), mode="exact-scan", cap=1000)
    with pytest.raises(ValueError):
        renorm_Rg(g, bid, mode="bogus")


def test_phi_g_sup_is_one():
    g = transition_family(2)
    bid = BlockId(12, 5)
    vals = [abs(phi_g(g, bid, Fraction(j, bid.length))) for j in range(bid.length + 1)]
    assert max(vals) == 1


@given(interior_blocks(n_max=12), st.integers(0, 4))
def test_block_array_is_compatible_with_phi(bid, m):
    m = min(m, bid.n - 1)
    A = block_array(bid, m)
    assert compatible(lambda t: phi(bid, t), A)


def test_g_array_compatible_with_phi_g():
    g = transition_family(3)
    bid = BlockId(11, 5)
    A = g_array(g, bid, 4)
    assert compatible(lambda t: phi_g(g, bid, t), A)
    assert eval_polyline(A, A.lines[1][0][0]) == phi_g(g, bid, A.lines[1][0][0])


def test_theorem1_distances_shrink():
    p = Fraction(1, 2)
    d = [sup_distance_to_Mp(BlockId(n, n // 2), p, grid_bits=7) for n in (20, 40, 80)]
    assert d[0] > d[1] > d[2]


def test_r_scaling_stable():
    vals = [r_scaling(ab_indicator(), n, Fraction(1, 2)) for n in (50, 100)]
    assert 0.5 < vals[1] / vals[0] < 2
