"""Observables measurable w.r.t. the level-N0 dyadic partition.

A :class:`DyadicFunction` stores one exact value per interval
[j 2^-N0, (j+1) 2^-N0), indexed by j (equivalently by its digit word in
lexicographic order).  Its tower sums h_l drive everything else: the
polynomial P^g, the cohomology test, and the generalized block sums.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from pathlib import Path
from typing import Sequence

from .exactnum import PolynomialP, as_fraction, binomial, frac_str
from .towers import build_towers


@dataclass(frozen=True)
class DyadicFunction:
    level: int
    values: tuple[Fraction, ...]

    def __post_init__(self):
        if self.level < 1:
            raise ValueError("level N0 must be >= 1")
        if len(self.values) != 1 << self.level:
            raise ValueError(f"level {self.level} needs {1 << self.level} values, got {len(self.values)}")
        object.__setattr__(self, "values", tuple(as_fraction(v) for v in self.values))

    @classmethod
    def from_values(cls, values: Sequence, level: int | None = None) -> "DyadicFunction":
        values = list(values)
        if level is None:
            level = max(1, (len(values) - 1).bit_length())
        return cls(level, tuple(values))

    @classmethod
    def constant(cls, c, level: int = 1) -> "DyadicFunction":
        return cls(level, (as_fraction(c),) * (1 << level))

    @classmethod
    def indicator(cls, level: int, lo, hi, weight=1) -> "DyadicFunction":
        """weight * 1_[lo, hi) for dyadic endpoints at ``level``."""
        lo, hi = as_fraction(lo), as_fraction(hi)
        size = 1 << level
        vals = []
        for j in range(size):
            a = Fraction(j, size)
            vals.append(as_fraction(weight) if lo <= a < hi else Fraction(0))
        return cls(level, tuple(vals))

    def __add__(self, other):
        if isinstance(other, DyadicFunction):
            a, b = self, other
            lvl = max(a.level, b.level)
            a, b = a.lift_to(lvl), b.lift_to(lvl)
            return DyadicFunction(lvl, tuple(x + y for x, y in zip(a.values, b.values)))
        c = as_fraction(other)
        return DyadicFunction(self.level, tuple(v + c for v in self.values))

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, DyadicFunction):
            return self + other.scale(-1)
        return self + (-as_fraction(other))

    def scale(self, c) -> "DyadicFunction":
        c = as_fraction(c)
        return DyadicFunction(self.level, tuple(c * v for v in self.values))

    def lift(self) -> "DyadicFunction":
        """Same function seen at level N0 + 1."""
        return DyadicFunction(self.level + 1, tuple(v for v in self.values for _ in (0, 1)))

    def lift_to(self, level: int) -> "DyadicFunction":
        g = self
        while g.level < level:
            g = g.lift()
        return g

    def at_index(self, j: int) -> Fraction:
        return self.values[j]

    def __call__(self, x) -> Fraction:
        """Value at a Point (uses its first N0 digits) or at a real in [0,1)."""
        digits = getattr(x, "digits", None)
        if digits is not None:
            if len(digits) < self.level:
                raise ValueError(f"point depth {len(digits)} below level {self.level}")
            j = 0
            for d in digits[: self.level]:
                j = 2 * j + d
            return self.values[j]
        x = as_fraction(x)
        if not 0 <= x < 1:
            raise ValueError("argument outside [0,1)")
        return self.values[int(x * (1 << self.level))]

    def is_constant(self) -> bool:
        return len(set(self.values)) == 1

    # file format

    def to_json(self) -> dict:
        return {"level": self.level, "values": [frac_str(v) for v in self.values]}

    @classmethod
    def from_json(cls, data: dict) -> "DyadicFunction":
        return cls(int(data["level"]), tuple(as_fraction(v) for v in data["values"]))

    @classmethod
    def load(cls, path) -> "DyadicFunction":
        return cls.from_json(json.loads(Path(path).read_text()))

    def save(self, path) -> None:
        Path(path).write_text(json.dumps(self.to_json(), indent=1) + "\n")


def ab_indicator() -> DyadicFunction:
    """1_[0,1/2) - 1_[1/2,1): the observable whose orbit spells B_{n,k}."""
    return DyadicFunction(1, (Fraction(1), Fraction(-1)))


def coboundary_example() -> DyadicFunction:
    """1_[1/4,1/2) - 1_[1/2,3/4)."""
    return DyadicFunction(2, (Fraction(0), Fraction(1), Fraction(-1), Fraction(0)))


@dataclass(frozen=True)
class TowerSums:
    level: int
    h: tuple[Fraction, ...]

    def __getitem__(self, ell: int) -> Fraction:
        return self.h[ell]

    def lifted(self, n: int, k: int) -> Fraction:
        """h^g_{n,k} for n >= N0: each letter a_j occurs C(n-N0, k-j) times."""
        return lifted_sum(self.h, self.level, n, k)


def lifted_sum(h: Sequence[Fraction], N0: int, n: int, k: int) -> Fraction:
    if n < N0:
        raise ValueError(f"n={n} below level {N0}")
    if k < 0 or k > n:
        return Fraction(0)
    m = n - N0
    total = Fraction(0)
    for j in range(max(0, k - m), min(N0, k) + 1):
        total += h[j] * binomial(m, k - j)
    return total


@lru_cache(maxsize=256)
def tower_sums(g: DyadicFunction) -> TowerSums:
    """h_l = sum of g over the rungs of tau_{N0,l}."""
    towers = build_towers(g.level, cap=max(g.level, 22))
    return TowerSums(g.level, tuple(sum((g.values[j] for j in tw.rungs), Fraction(0)) for tw in towers))


@lru_cache(maxsize=256)
def rung_prefix_sums(g: DyadicFunction) -> tuple[tuple[Fraction, ...], ...]:
    """For each base tower l, partial sums of g over its first r rungs, r = 0..height."""
    out = []
    for tw in build_towers(g.level, cap=max(g.level, 22)):
        acc = [Fraction(0)]
        for j in tw.rungs:
            acc.append(acc[-1] + g.values[j])
        out.append(tuple(acc))
    return tuple(out)


def _bernstein(N0: int, ell: int) -> PolynomialP:
    p = PolynomialP.p()
    return p ** ell * (1 - p) ** (N0 - ell)


def polynomial_Pg(g: DyadicFunction) -> PolynomialP:
    """sum_l h_l p^l (1-p)^(N0-l) (N0 p - l), expanded."""
    N0 = g.level
    h = tower_sums(g).h
    p = PolynomialP.p()
    total = PolynomialP()
    for ell in range(N0 + 1):
        if h[ell] == 0:
            continue
        total = total + h[ell] * _bernstein(N0, ell) * (N0 * p - ell)
    return total


def covariance_Pg(g: DyadicFunction) -> PolynomialP:
    """-cov_{mu_p}(g, X_1 + ... + X_N0) as a polynomial in p.

    Computed interval by interval from the digit weights, without tower sums.
    """
    N0 = g.level
    p = PolynomialP.p()
    e_g = PolynomialP()
    e_gs = PolynomialP()
    for j, v in enumerate(g.values):
        if v == 0:
            continue
        s = bin(j).count("1")
        w = _bernstein(N0, s)
        e_g = e_g + v * w
        e_gs = e_gs + (v * s) * w
    e_s = N0 * p
    return -(e_gs - e_g * e_s)


def pg_sign(g: DyadicFunction, p) -> int:
    v = polynomial_Pg(g)(as_fraction(p))
    return (v > 0) - (v < 0)


class NotCohomologous(Exception):
    pass


@dataclass(frozen=True)
class Cohomology:
    constant: Fraction
    transfer: DyadicFunction


def cohomology_test(g: DyadicFunction) -> Cohomology:
    """Return (C, f) with g = C + f - f∘T, or raise NotCohomologous.

    g is cohomologous to a constant iff its tower sums are proportional to
    C(N0, l); f is then built rung by rung so each tower's partial sums of
    g - C telescope.
    """
    N0 = g.level
    h = tower_sums(g).h
    c = h[0]  # C(N0, 0) = 1
    for ell in range(N0 + 1):
        if h[ell] != c * binomial(N0, ell):
            raise NotCohomologous(f"tower sums {[frac_str(x) for x in h]} not proportional to binomials")
    f = [Fraction(0)] * (1 << N0)
    for tw in build_towers(N0, cap=max(N0, 22)):
        acc = Fraction(0)
        for j in tw.rungs:
            f[j] = -acc
            acc += g.values[j] - c
    return Cohomology(c, DyadicFunction(N0, tuple(f)))


def is_cohomologous_to_constant(g: DyadicFunction) -> bool:
    try:
        cohomology_test(g)
    except NotCohomologous:
        return False
    return True


# --- transition family ------------------------------------------------------


def transition_family(N0: int) -> DyadicFunction:
    """g_{N0}(x) = (-1)^(X_1 + ... + X_N0): tower sums (-1)^l C(N0, l)."""
    if N0 < 1:
        raise ValueError("N0 must be >= 1")
    return DyadicFunction(N0, tuple(Fraction(-1 if bin(j).count("1") % 2 else 1) for j in range(1 << N0)))


def transition_pg_closed_form(N0: int) -> PolynomialP:
    """2 N0 p (1-p) (1-2p)^(N0-1)."""
    p = PolynomialP.p()
    return 2 * N0 * p * (1 - p) * (1 - 2 * p) ** (N0 - 1)


@lru_cache(maxsize=None)
def S_ratio(N0: int, n: int, k: int) -> Fraction:
    """h^{g_N0}_{n,k} / C(n,k) by the recurrence in N0.

    Base N0 = 0 is the constant function 1 (S = 1); it reproduces
    S_1(n,k) = (n - 2k)/n.
    """
    if N0 == 0:
        return Fraction(1) if 0 <= k <= n else Fraction(0)
    if n < N0:
        raise ValueError(f"n={n} below N0={N0}")
    if k < 0 or k > n:
        return Fraction(0)
    return Fraction(n - k, n) * S_ratio(N0 - 1, n - 1, k) - Fraction(k, n) * S_ratio(N0 - 1, n - 1, k - 1)


def transition_h(N0: int, n: int, k: int) -> int:
    """h^{g_N0}_{n,k} from the closed form sum_j (-1)^j C(N0,j) C(n-N0,k-j)."""
    m = n - N0
    return sum((-1) ** j * binomial(N0, j) * binomial(m, k - j) for j in range(N0 + 1))


def transition_numerator(N0: int, k: int, i: int) -> Fraction:
    """Unrenormalized y at (i, 0) along (2k, k): h_{2k-i,k-i} - x_{i,0} h_{2k,k}."""
    n = 2 * k
    x = Fraction(binomial(n - i, k - i), binomial(n, k))
    return transition_h(N0, n - i, k - i) - x * transition_h(N0, n, k)


@dataclass(frozen=True)
class DecayProfile:
    lines: tuple[tuple[int, Fraction], ...]
    rho: float

    def max_at(self, i: int) -> Fraction:
        return dict(self.lines)[i]


def gamma_decay_profile(g: DyadicFunction, n_bar: int, k_bar: int, delta: float = 0.1,
                        i_max: int = 25, fit_range: tuple[int, int] = (5, 25)) -> DecayProfile:
    """Line-wise max |y_{i,j}| of the g-array at (n_bar, k_bar) and a fitted geometric ratio."""
    import numpy as np

    from .blocks import BlockId
    from .curves import g_array

    if is_cohomologous_to_constant(g):
        raise ValueError("g is cohomologous to a constant; the renormalized array is degenerate")
    if not 0 < delta < 0.25:
        raise ValueError("delta must lie in (0, 1/4)")
    if not 2 * delta * n_bar <= k_bar <= (1 - 2 * delta) * n_bar:
        raise ValueError(f"k_bar={k_bar} outside [2 delta n_bar, (1 - 2 delta) n_bar]")
    A = g_array(g, BlockId(n_bar, k_bar), min(i_max, n_bar - g.level))
    mags = A.line_max_abs_y()
    lines = tuple((i, v) for i, v in enumerate(mags))
    lo, hi = fit_range
    hi = min(hi, A.m)
    pts = [(i, float(v)) for i, v in lines if lo <= i <= hi and v > 0]
    if len(pts) < 2:
        return DecayProfile(lines, float("nan"))
    slope = np.polyfit([i for i, _ in pts], np.log([v for _, v in pts]), 1)[0]
    return DecayProfile(lines, float(np.exp(slope)))
