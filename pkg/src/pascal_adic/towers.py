"""Cutting-and-stacking simulator for the Pascal-adic transformation.

A point is a finite binary expansion; digit ``d_i`` is the i-th binary digit,
so the point is the left end of the dyadic interval of width 2^-depth.  At
level n the towers tau_{n,0..n} partition the 2^n intervals of width 2^-n;
rung r of tau_{n,k} is sent by T onto rung r+1.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterator, Optional, Sequence

from .exactnum import as_fraction, binomial

DEFAULT_TOWER_CAP = 22


class UndefinedAtDepth(ArithmeticError):
    """The point sits on a tower top at every level up to its depth."""

    def __init__(self, point: "Point", depth: int):
        self.point = point
        self.depth = depth
        super().__init__(f"T undefined within depth {depth}: point is a top rung at every level")


class CapExceeded(ValueError):
    pass


@dataclass(frozen=True)
class Point:
    digits: tuple[int, ...]

    def __post_init__(self):
        if len(self.digits) < 1:
            raise ValueError("a point needs at least one digit")
        if any(d not in (0, 1) for d in self.digits):
            raise ValueError("digits must be 0 or 1")

    @classmethod
    def from_bits(cls, bits: str) -> "Point":
        """``"0110"`` or ``"0.0110"`` (binary expansion after the point)."""
        bits = bits.strip()
        if bits.startswith("0.") or bits.startswith("."):
            bits = bits.split(".", 1)[1]
        return cls(tuple(int(b) for b in bits))

    @classmethod
    def from_rational(cls, x, depth: int) -> "Point":
        x = as_fraction(x)
        if not 0 <= x < 1:
            raise ValueError("point must lie in [0,1)")
        scaled = x * (1 << depth)
        if scaled.denominator != 1:
            raise ValueError(f"{x} is not a multiple of 2^-{depth}")
        j = scaled.numerator
        return cls(tuple((j >> (depth - 1 - i)) & 1 for i in range(depth)))

    @classmethod
    def from_index(cls, j: int, depth: int) -> "Point":
        return cls(tuple((j >> (depth - 1 - i)) & 1 for i in range(depth)))

    @property
    def depth(self) -> int:
        return len(self.digits)

    def value(self) -> Fraction:
        return Fraction(self.index(self.depth), 1 << self.depth)

    def index(self, n: int) -> int:
        """Index of the width-2^-n interval containing the point."""
        j = 0
        for d in self.digits[:n]:
            j = 2 * j + d
        return j

    def extended(self, more: Sequence[int]) -> "Point":
        return Point(self.digits + tuple(more))

    def bits(self) -> str:
        return "".join(map(str, self.digits))


# --- towers -----------------------------------------------------------------


@dataclass(frozen=True)
class Tower:
    n: int
    k: int
    rungs: tuple[int, ...]

    @property
    def height(self) -> int:
        return len(self.rungs)

    def interval(self, r: int) -> tuple[Fraction, Fraction]:
        j = self.rungs[r]
        w = Fraction(1, 1 << self.n)
        return (j * w, (j + 1) * w)


@lru_cache(maxsize=32)
def _towers(n: int) -> tuple[Tower, ...]:
    if n == 1:
        return (Tower(1, 0, (0,)), Tower(1, 1, (1,)))
    prev = _towers(n - 1)
    out = []
    for k in range(n + 1):
        # bottom: right halves of tau_{n-1,k-1}; top: left halves of tau_{n-1,k}
        lower = tuple(2 * j + 1 for j in prev[k - 1].rungs) if k >= 1 else ()
        upper = tuple(2 * j for j in prev[k].rungs) if k <= n - 1 else ()
        out.append(Tower(n, k, lower + upper))
    return tuple(out)


def build_towers(n: int, cap: int = DEFAULT_TOWER_CAP) -> tuple[Tower, ...]:
    if n < 1:
        raise ValueError("tower level must be >= 1")
    if n > cap:
        raise CapExceeded(f"level {n} exceeds tower cap {cap} (2^{n} rungs)")
    return _towers(n)


@lru_cache(maxsize=32)
def rung_lookup(n: int) -> dict[int, tuple[int, int]]:
    """interval index -> (k, rung) at level n, by direct search of the tower lists."""
    table = {}
    for tw in build_towers(n, cap=max(n, DEFAULT_TOWER_CAP)):
        for r, j in enumerate(tw.rungs):
            table[j] = (tw.k, r)
    return table


# --- digit rules ------------------------------------------------------------


def k_n(x: Point, n: int) -> int:
    if n > x.depth:
        raise ValueError(f"level {n} exceeds point depth {x.depth}")
    return sum(x.digits[:n])


def rung_index(x: Point, n: int) -> int:
    """Height of x inside tau_{n, k_n(x)}, from the digit recursion."""
    if n > x.depth:
        raise ValueError(f"level {n} exceeds point depth {x.depth}")
    d = x.digits
    k = d[0]
    r = 0
    for m in range(1, n):
        if d[m] == 1:
            k += 1
        else:
            r += binomial(m, k - 1)
    return r


def rung_profile(x: Point, n_max: int) -> Iterator[tuple[int, int, int]]:
    """(n, k_n, rung) for n = 1..n_max in one pass."""
    d = x.digits
    k = d[0]
    r = 0
    yield 1, k, 0
    for m in range(1, n_max):
        if d[m] == 1:
            k += 1
        else:
            r += binomial(m, k - 1)
        yield m + 1, k, r


def rung_digits(n: int, k: int, r: int) -> tuple[int, ...]:
    """First n digits of the points on rung r of tau_{n,k} (inverse of rung_index)."""
    if not 0 <= r < binomial(n, k):
        raise IndexError(f"rung {r} outside tower ({n},{k})")
    out = []
    while n > 1:
        low = binomial(n - 1, k - 1)
        if r < low:
            out.append(1)
            k -= 1
        else:
            out.append(0)
            r -= low
        n -= 1
    out.append(k)
    return tuple(reversed(out))


def apply_T(x: Point) -> Point:
    """One step of T via the digit rule (fast path).

    The first level where x is below the top of its tower decides the move;
    digits past that level are unchanged.
    """
    d = x.digits
    k = d[0]
    r = 0
    n = 1
    while True:
        if r < binomial(n, k) - 1:
            return Point(rung_digits(n, k, r + 1) + d[n:])
        if n == len(d):
            raise UndefinedAtDepth(x, n)
        if d[n] == 1:
            k += 1
        else:
            r += binomial(n, k - 1)
        n += 1


def apply_T_search(x: Point, cap: int = DEFAULT_TOWER_CAP) -> Point:
    """T as defined by the stacking: look the rung up in explicit tower lists."""
    for n in range(1, min(x.depth, cap) + 1):
        k, r = rung_lookup(n)[x.index(n)]
        tower = build_towers(n, cap)[k]
        if r < tower.height - 1:
            nxt = tower.rungs[r + 1]
            head = tuple((nxt >> (n - 1 - i)) & 1 for i in range(n))
            return Point(head + x.digits[n:])
    raise UndefinedAtDepth(x, x.depth)


# --- measures ---------------------------------------------------------------


def sample_mu_p(p, depth: int, seed: int | None = None, rng: random.Random | None = None) -> Point:
    """Digits i.i.d. with P(1) = p (image of Bernoulli(1-p, p))."""
    p = float(as_fraction(p))
    rng = rng or random.Random(seed)
    return Point(tuple(1 if rng.random() < p else 0 for _ in range(depth)))


def mu_p_interval(p, digits: Sequence[int]) -> Fraction:
    p = as_fraction(p)
    ones = sum(digits)
    return p ** ones * (1 - p) ** (len(digits) - ones)


# --- digit extension policies -----------------------------------------------


@dataclass
class Extender:
    """Supplies extra digits when an orbit needs more depth."""

    mode: str = "zeros"
    p: Fraction = Fraction(1, 2)
    seed: int = 0
    _rng: random.Random = field(init=False, repr=False)

    def __post_init__(self):
        if self.mode not in ("zeros", "bernoulli"):
            raise ValueError(f"unknown extension mode {self.mode!r}")
        self._rng = random.Random(self.seed)

    def more(self, count: int) -> tuple[int, ...]:
        if self.mode == "zeros":
            return (0,) * count
        p = float(self.p)
        return tuple(1 if self._rng.random() < p else 0 for _ in range(count))


def apply_T_deepening(x: Point, extender: Optional[Extender], max_depth: int = 4096, step: int = 16) -> Point:
    """apply_T, appending digits from ``extender`` while x stays on top rungs."""
    while True:
        try:
            return apply_T(x)
        except UndefinedAtDepth:
            if extender is None or x.depth >= max_depth:
                raise
            x = x.extended(extender.more(min(step, max_depth - x.depth)))


def orbit(x: Point, steps: int, extender: Optional[Extender] = None, max_depth: int = 4096) -> list[Point]:
    """x, Tx, ..., T^{steps-1}x."""
    pts = [x]
    for _ in range(steps - 1):
        x = apply_T_deepening(x, extender, max_depth)
        pts.append(x)
    return pts


def base_point(n: int, k: int, depth: int | None = None) -> Point:
    """Left end of the base rung of tau_{n,k}, padded with zeros to ``depth``."""
    head = rung_digits(n, k, 0)
    depth = n if depth is None else depth
    return Point(head + (0,) * (depth - n))


def find_subsequence(x: Point, s: int, n_max: int, n_min: int = 1) -> Optional[int]:
    """Smallest n in [n_min, n_max] with s * rung_index(x, n) < C(n, k_n(x))."""
    if x.depth < n_max:
        raise ValueError(f"point depth {x.depth} below n_max={n_max}")
    if s < 1:
        raise ValueError("s must be >= 1")
    for n, k, r in rung_profile(x, n_max):
        if n >= n_min and s * r < binomial(n, k):
            return n
    return None


def orbit_curve(g, x: Point, ell: int, extender: Optional[Extender] = None, max_depth: int = 4096):
    """phi^g_{x,ell} sampled at j/ell, j = 0..ell, normalized by the sup R^g_{x,ell}."""
    from .selfaffine import CurveSamples

    if ell < 1:
        raise ValueError("orbit length must be >= 1")
    if x.depth < g.level:
        if extender is None:
            raise ValueError(f"point depth {x.depth} below observable level {g.level}")
        x = x.extended(extender.more(g.level - x.depth))
    F = [Fraction(0)]
    for pt in orbit(x, ell, extender, max_depth):
        F.append(F[-1] + g(pt))
    total = F[-1]
    dev = [F[j] - Fraction(j, ell) * total for j in range(ell + 1)]
    R = max(abs(v) for v in dev) or Fraction(1)
    return CurveSamples(tuple(Fraction(j, ell) for j in range(ell + 1)), tuple(v / R for v in dev))


def orbit_letters(x: Point, ell: int) -> str:
    """a/b coding of x, Tx, ... by the partition {[0,1/2), [1/2,1)}."""
    return "".join("a" if pt.digits[0] == 0 else "b" for pt in orbit(x, ell))
