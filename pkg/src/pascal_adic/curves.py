"""Ergodic-sum curves of blocks and their renormalizations.

F_{n,k} is the +-1 walk read along B_{n,k}; phi_{n,k} removes the chord and
scales so the end of the left child B_{n-1,k-1} sits at height 1.  For a
dyadic observable g, F^g_{n,k} substitutes each letter a_j by the partial
sums of g up tau_{N0,j}, and phi^g_{n,k} is normalized by the sup R^g.

All evaluations are exact (Fractions) and cost O(n) per abscissa.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterator, Sequence

import numpy as np

from .blocks import BlockId, base_letter, count_a_prefix, height, height_nk
from .dyadicg import DyadicFunction, lifted_sum, rung_prefix_sums, tower_sums
from .exactnum import as_fraction, binomial
from .selfaffine import CurveSamples, TriangularArray, eval_Mp

DEFAULT_SCAN_CAP = 1 << 24
DEFAULT_APPROX_DEPTH = 40


class DegenerateDenominator(ZeroDivisionError):
    pass


def _bid(n, k=None) -> BlockId:
    return n if isinstance(n, BlockId) else BlockId(n, k)


# --- classical curve ----------------------------------------------------------


def eval_F(bid: BlockId, ell: int) -> int:
    return 2 * count_a_prefix(bid, ell) - ell


def _interp(f, length: int, x: Fraction) -> Fraction:
    j = math.floor(x)
    frac = x - j
    if frac == 0:
        return Fraction(f(j))
    a = f(j)
    return a + frac * (f(j + 1) - a)


def F_at(bid: BlockId, x) -> Fraction:
    """F_{n,k} at a real abscissa in [0, C(n,k)], linearly interpolated."""
    return _interp(lambda j: eval_F(bid, j), bid.length, as_fraction(x))


def phi_denominator(bid: BlockId) -> Fraction:
    """F(C(n-1,k-1)) - (C(n-1,k-1)/C(n,k)) F(C(n,k))."""
    n, k = bid.n, bid.k
    if n < 2:
        raise DegenerateDenominator("phi needs n >= 2")
    left = binomial(n - 1, k - 1)
    den = height_nk(n - 1, k - 1) - Fraction(left, bid.length) * height(bid)
    if den == 0:
        raise DegenerateDenominator(f"renormalizing denominator vanishes for ({n},{k})")
    return den


def phi(bid: BlockId, t) -> Fraction:
    t = as_fraction(t)
    if not 0 <= t <= 1:
        raise ValueError("t must lie in [0,1]")
    den = phi_denominator(bid)
    C = bid.length
    return (F_at(bid, t * C) - t * height(bid)) / den


# --- general observable --------------------------------------------------------


def _check_g_block(g: DyadicFunction, bid: BlockId) -> None:
    if bid.n < g.level:
        raise ValueError(f"block line {bid.n} below the observable's level {g.level}")


def eval_Fg(g: DyadicFunction, bid: BlockId, ell: int) -> Fraction:
    """F^g_{n,k}(ell) = sum of g over the first ``ell`` orbit steps from the tower base."""
    _check_g_block(g, bid)
    N0 = g.level
    n, k = bid.n, bid.k
    if not 0 <= ell <= bid.length:
        raise IndexError(f"position {ell} outside [0, {bid.length}]")
    h = tower_sums(g).h
    total = Fraction(0)
    while n > N0 and 0 < k < n:
        left = binomial(n - 1, k - 1)
        if ell <= left:
            k -= 1
        else:
            total += lifted_sum(h, N0, n - 1, k - 1)
            ell -= left
        n -= 1
    return total + rung_prefix_sums(g)[base_letter(N0, n, k)][ell]


def Fg_at(g: DyadicFunction, bid: BlockId, x) -> Fraction:
    return _interp(lambda j: eval_Fg(g, bid, j), bid.length, as_fraction(x))


def Fg_total(g: DyadicFunction, bid: BlockId) -> Fraction:
    _check_g_block(g, bid)
    return lifted_sum(tower_sums(g).h, g.level, bid.n, bid.k)


def iter_g_steps(g: DyadicFunction, bid: BlockId) -> Iterator[Fraction]:
    """g along the orbit of the base of tau_{n,k}, one value per T-step."""
    _check_g_block(g, bid)
    from .towers import build_towers

    base = build_towers(g.level, cap=max(g.level, 22))
    N0 = g.level
    stack = [(bid.n, bid.k)]
    while stack:
        n, k = stack.pop()
        if n == N0 or k == 0 or k == n:
            for j in base[base_letter(N0, n, k)].rungs:
                yield g.values[j]
        else:
            stack.append((n - 1, k))
            stack.append((n - 1, k - 1))


@dataclass(frozen=True)
class RenormConstant:
    value: Fraction
    mode: str
    error_bound: Fraction | float = Fraction(0)

    def __post_init__(self):
        if self.value <= 0:
            raise ValueError("renormalization constant must be positive")
        if self.mode in ("exact-scan", "exact-dp") and self.error_bound != 0:
            raise ValueError("exact modes carry no error bound")


def _integer_scale(g: DyadicFunction) -> tuple[list[int], int]:
    den = 1
    for v in g.values:
        den = den * v.denominator // math.gcd(den, v.denominator)
    return [int(v * den) for v in g.values], den


def _dp_extrema(g: DyadicFunction, n: int, k: int, floor_line: int | None = None):
    """Max and min over u of W(u) = C F^g(u) - u H on the block (n, k).

    W is tracked exactly in integers (g scaled by the lcm of its
    denominators).  Cells on ``floor_line`` that could still split are
    treated as straight segments, which gives the max over the breakpoints
    of the depth (n - floor_line) array instead of over every integer.
    """
    from .towers import build_towers

    N0 = g.level
    ints, den = _integer_scale(g)
    base = build_towers(N0, cap=max(N0, 22))
    h_int = [sum(ints[j] for j in tw.rungs) for tw in base]
    Ctot = binomial(n, k)
    H = _lifted_int(h_int, N0, n, k)

    letters = []
    for tw in base:
        acc = 0
        mx = mn = 0
        for r, j in enumerate(tw.rungs, start=1):
            acc += ints[j]
            w = Ctot * acc - r * H
            mx = max(mx, w)
            mn = min(mn, w)
        letters.append((mx, mn, Ctot * acc - len(tw.rungs) * H))

    lo_line = N0 if floor_line is None else max(N0, floor_line)
    prev: dict[int, tuple[int, int, int]] = {}
    for line in range(lo_line, n + 1):
        cur = {}
        for kk in range(max(0, k - (n - line)), min(line, k) + 1):
            if line == N0 or kk == 0 or kk == line:
                cur[kk] = letters[base_letter(N0, line, kk)]
            elif line == lo_line:
                end = Ctot * _lifted_int(h_int, N0, line, kk) - binomial(line, kk) * H
                cur[kk] = (max(0, end), min(0, end), end)
            else:
                lmx, lmn, lend = prev[kk - 1]
                rmx, rmn, rend = prev[kk]
                cur[kk] = (max(lmx, lend + rmx), min(lmn, lend + rmn), lend + rend)
        prev = cur
    mx, mn, _ = prev[k]
    return mx, mn, Ctot, den


def _lifted_int(h: Sequence[int], N0: int, n: int, k: int) -> int:
    if k < 0 or k > n:
        return 0
    m = n - N0
    return sum(h[j] * binomial(m, k - j) for j in range(max(0, k - m), min(N0, k) + 1))


def _scan_max(g: DyadicFunction, bid: BlockId) -> Fraction:
    C = bid.length
    H = Fg_total(g, bid)
    acc = Fraction(0)
    best = Fraction(0)
    for j, v in enumerate(iter_g_steps(g, bid), start=1):
        acc += v
        best = max(best, abs(acc - Fraction(j, C) * H))
    return best


def renorm_Rg(g: DyadicFunction, bid: BlockId, cap: int = DEFAULT_SCAN_CAP,
              mode: str = "auto", m: int = DEFAULT_APPROX_DEPTH) -> RenormConstant:
    """R^g_{n,k} = max_t |F^g(tC) - t F^g(C)|, or 1 when that max is 0.

    Modes: ``exact-scan`` walks all C(n,k) steps (refused above ``cap``),
    ``exact-dp`` is exact at any size, ``array-approx`` takes the max over
    the depth-m array breakpoints and reports a tail estimate.  ``auto``
    picks exact-dp.
    """
    _check_g_block(g, bid)
    if mode == "auto":
        mode = "exact-dp"
    if mode == "exact-scan":
        if bid.length > cap:
            raise ValueError(f"C({bid.n},{bid.k}) = {bid.length} exceeds scan cap {cap}")
        best = _scan_max(g, bid)
        return RenormConstant(best if best else Fraction(1), "exact-scan")
    if mode == "exact-dp":
        mx, mn, Ctot, den = _dp_extrema(g, bid.n, bid.k)
        best = Fraction(max(mx, -mn), Ctot * den)
        return RenormConstant(best if best else Fraction(1), "exact-dp")
    if mode == "array-approx":
        depth = min(m, bid.n - g.level)
        mx, mn, Ctot, den = _dp_extrema(g, bid.n, bid.k, floor_line=bid.n - depth)
        best = Fraction(max(mx, -mn), Ctot * den)
        tail = _tail_estimate(g, bid, depth)
        return RenormConstant(best if best else Fraction(1), "array-approx", tail)
    raise ValueError(f"unknown mode {mode!r}")


def _tail_estimate(g: DyadicFunction, bid: BlockId, depth: int) -> float:
    """Geometric-tail guess for the mass beyond line ``depth`` (not certified)."""
    if depth < 3:
        return float("inf")
    mags = [float(x) for x in g_line_magnitudes(g, bid, depth)]
    last = mags[-4:]
    ratios = [b / a for a, b in zip(last, last[1:]) if a > 0]
    if not ratios:
        return 0.0
    rho = max(ratios)
    if rho >= 1:
        return float("inf")
    return mags[-1] * rho / (1 - rho)


def g_line_magnitudes(g: DyadicFunction, bid: BlockId, depth: int) -> list[Fraction]:
    """max_j |F^g displacement - chord| on each array line, unrenormalized."""
    h = tower_sums(g).h
    N0 = g.level
    n, k = bid.n, bid.k
    C = bid.length
    H = lifted_sum(h, N0, n, k)
    out = []
    for i in range(depth + 1):
        best = Fraction(0)
        for j in range(i + 1):
            kk = k - i + j
            x = Fraction(binomial(n - i, kk), C)
            best = max(best, abs(lifted_sum(h, N0, n - i, kk) - x * H))
        out.append(best)
    return out


@lru_cache(maxsize=1024)
def _cached_R(g: DyadicFunction, n: int, k: int) -> Fraction:
    return renorm_Rg(g, BlockId(n, k)).value


def phi_g(g: DyadicFunction, bid: BlockId, t, R: Fraction | None = None) -> Fraction:
    t = as_fraction(t)
    if not 0 <= t <= 1:
        raise ValueError("t must lie in [0,1]")
    R = _cached_R(g, bid.n, bid.k) if R is None else R
    C = bid.length
    return (Fg_at(g, bid, t * C) - t * Fg_total(g, bid)) / R


# --- arrays attached to blocks ---------------------------------------------------


def block_array(bid: BlockId, m: int) -> TriangularArray:
    """Array A^m_{n,k} from x_{i,0} = C(n-i,k-i)/C(n,k) and the renormalized heights."""
    n, k = bid.n, bid.k
    if not 0 < k < n:
        raise DegenerateDenominator(f"edge block ({n},{k}) has no renormalized array")
    if not 0 <= m < n:
        raise ValueError(f"need 0 <= m < n, got m={m}, n={n}")
    C = bid.length
    H = height(bid)
    x1 = Fraction(binomial(n - 1, k - 1), C)
    den = height_nk(n - 1, k - 1) - x1 * H
    side = []
    for i in range(m + 1):
        x = Fraction(binomial(n - i, k - i), C)
        side.append((x, (height_nk(n - i, k - i) - x * H) / den))
    return TriangularArray.from_side(side)


def g_side_numerators(g: DyadicFunction, bid: BlockId, m: int) -> list[Fraction]:
    """y_{i,0} R^g = h^g_{n-i,k-i} - x_{i,0} h^g_{n,k}, i = 0..m."""
    h = tower_sums(g).h
    N0 = g.level
    n, k = bid.n, bid.k
    C = bid.length
    H = lifted_sum(h, N0, n, k)
    return [lifted_sum(h, N0, n - i, k - i) - Fraction(binomial(n - i, k - i), C) * H for i in range(m + 1)]


def g_array(g: DyadicFunction, bid: BlockId, m: int, R: Fraction | None = None) -> TriangularArray:
    """Array of phi^g_{n,k} on the depth-m sub-block boundaries, from its side."""
    _check_g_block(g, bid)
    if not 0 <= m <= bid.n - g.level:
        raise ValueError(f"need 0 <= m <= n - N0 = {bid.n - g.level}")
    R = _cached_R(g, bid.n, bid.k) if R is None else R
    n, k = bid.n, bid.k
    C = bid.length
    nums = g_side_numerators(g, bid, m)
    return TriangularArray.from_side([(Fraction(binomial(n - i, k - i), C), nums[i] / R) for i in range(m + 1)])


# --- sampling and distances ------------------------------------------------------


def phi_samples(bid: BlockId, ts: Sequence) -> CurveSamples:
    ts = tuple(as_fraction(t) for t in ts)
    return CurveSamples(ts, tuple(phi(bid, t) for t in ts))


def phi_g_samples(g: DyadicFunction, bid: BlockId, ts: Sequence) -> CurveSamples:
    ts = tuple(as_fraction(t) for t in ts)
    R = _cached_R(g, bid.n, bid.k)
    return CurveSamples(ts, tuple(phi_g(g, bid, t, R) for t in ts))


def breakpoints(bid: BlockId) -> list[Fraction]:
    C = bid.length
    return [Fraction(j, C) for j in range(C + 1)]


def sup_distance_to_Mp(bid: BlockId, p, grid_bits: int = 9, g: DyadicFunction | None = None,
                       target_scale: float = 1.0, include_breakpoints_cap: int = 1 << 12,
                       eps: float = 1e-12) -> float:
    """sup over a dyadic grid (plus all breakpoints for short blocks) of |phi - s M_p|."""
    size = 1 << grid_bits
    ts = {Fraction(i, size) for i in range(size + 1)}
    if bid.length <= include_breakpoints_cap:
        ts.update(breakpoints(bid))
    ts = sorted(ts)
    if g is None:
        vals = [phi(bid, t) for t in ts]
    else:
        R = _cached_R(g, bid.n, bid.k)
        vals = [phi_g(g, bid, t, R) for t in ts]
    return max(abs(float(v) - target_scale * eval_Mp(p, t, eps)) for t, v in zip(ts, vals))


def r_scaling(g: DyadicFunction, n: int, p) -> float:
    """n R^g_{n,floor(pn)} / C(n, floor(pn))."""
    k = math.floor(as_fraction(p) * n)
    R = _cached_R(g, n, k)
    return float(n * R / binomial(n, k))
