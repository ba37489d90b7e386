"""Self-affine curves M_p, triangular arrays and their polygonal curves.

An ascending triangular array has lines 0..m; line i holds i+1 displacement
pairs (x, y) and each pair is the sum of the two pairs above it.  The
polygon phi_A is obtained by cumulating the pairs of the top line in the
order given by the subdivision: the r-th of the 2^m intervals uses entry
popcount(r).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from .exactnum import as_fraction, falling

Pair = tuple[Fraction, Fraction]


@dataclass(frozen=True)
class CurveSamples:
    ts: tuple
    values: tuple
    exact: bool = True

    def __post_init__(self):
        if len(self.ts) != len(self.values):
            raise ValueError("ts and values differ in length")
        if len(self.ts) < 2:
            raise ValueError("need at least two samples")

    def __call__(self, t):
        """Piecewise-linear interpolation."""
        ts = self.ts
        if t < ts[0] or t > ts[-1]:
            raise ValueError(f"t={t} outside [{ts[0]}, {ts[-1]}]")
        lo, hi = 0, len(ts) - 1
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if ts[mid] <= t:
                lo = mid
            else:
                hi = mid
        t0, t1 = ts[lo], ts[hi]
        if t == t0:
            return self.values[lo]
        if t == t1:
            return self.values[hi]
        w = (t - t0) / (t1 - t0)
        return self.values[lo] + w * (self.values[hi] - self.values[lo])

    def as_arrays(self) -> tuple[np.ndarray, np.ndarray]:
        return np.array([float(t) for t in self.ts]), np.array([float(v) for v in self.values])


# --- triangular arrays -------------------------------------------------------


class TriangularArray:
    """Ascending array stored densely, ``lines[i][j] = (x, y)``.

    The paper-style definition asks for x > 0; arrays built from blocks near
    the triangle's edge carry zero-width entries, so only x >= 0 is enforced
    (``strict`` reports whether every x is positive).
    """

    __slots__ = ("lines",)

    def __init__(self, lines: Sequence[Sequence[Pair]]):
        self.lines = tuple(tuple((as_fraction(x), as_fraction(y)) for x, y in line) for line in lines)
        for i, line in enumerate(self.lines):
            if len(line) != i + 1:
                raise ValueError(f"line {i} has {len(line)} entries, expected {i + 1}")
            if any(x < 0 for x, _ in line):
                raise ValueError(f"negative width on line {i}")
        bad = self.additivity_violation()
        if bad is not None:
            raise ValueError(f"additive property fails at {bad}")

    @property
    def m(self) -> int:
        return len(self.lines) - 1

    @property
    def strict(self) -> bool:
        return all(x > 0 for line in self.lines for x, _ in line)

    def __eq__(self, other):
        return isinstance(other, TriangularArray) and self.lines == other.lines

    def __repr__(self):
        return f"TriangularArray(m={self.m}, side={self.side()})"

    def additivity_violation(self):
        L = self.lines
        for i in range(len(L) - 1):
            for j in range(i + 1):
                x, y = L[i][j]
                x1, y1 = L[i + 1][j]
                x2, y2 = L[i + 1][j + 1]
                if x != x1 + x2 or y != y1 + y2:
                    return (i, j)
        return None

    def side(self) -> list[Pair]:
        return [line[0] for line in self.lines]

    def right_side(self) -> list[Pair]:
        return [line[-1] for line in self.lines]

    @classmethod
    def from_side(cls, side: Sequence[Pair]) -> "TriangularArray":
        """Rebuild every line from the lower-left entries (x_{i,0}, y_{i,0})."""
        side = [(as_fraction(x), as_fraction(y)) for x, y in side]
        lines = [[side[0]]]
        for i in range(1, len(side)):
            line = [side[i]]
            for j in range(i):
                px, py = lines[i - 1][j]
                x, y = line[j]
                line.append((px - x, py - y))
            lines.append(line)
        return cls(lines)

    @classmethod
    def from_right_side(cls, side: Sequence[Pair]) -> "TriangularArray":
        """Rebuild from the lower-right entries (x_{i,i}, y_{i,i})."""
        side = [(as_fraction(x), as_fraction(y)) for x, y in side]
        lines = [[side[0]]]
        for i in range(1, len(side)):
            line = [None] * (i + 1)
            line[i] = side[i]
            for j in range(i - 1, -1, -1):
                px, py = lines[i - 1][j]
                x, y = line[j + 1]
                line[j] = (px - x, py - y)
            lines.append(line)
        return cls(lines)

    def truncated(self, m: int) -> "TriangularArray":
        return TriangularArray(self.lines[: m + 1])

    def line_max_abs_y(self) -> list[Fraction]:
        return [max(abs(y) for _, y in line) for line in self.lines]

    def to_json(self, exact: bool = False) -> dict:
        from .exactnum import fmt12, frac_str

        conv = frac_str if exact else fmt12
        return {"m": self.m, "lines": [[[conv(x), conv(y)] for x, y in line] for line in self.lines]}


def _popcounts(m: int) -> np.ndarray:
    r = np.arange(1 << m, dtype=np.int64)
    counts = np.zeros_like(r)
    while r.any():
        counts += r & 1
        r >>= 1
    return counts


def array_to_polyline(A: TriangularArray, exact: bool = True) -> CurveSamples:
    """Breakpoints of phi_A: 2^m + 1 points from (0, 0) to (x00, y00)."""
    top = A.lines[-1]
    m = A.m
    if exact:
        if m > 18:
            raise ValueError("exact polyline beyond m=18 is too large; pass exact=False")
        ts = [Fraction(0)]
        vs = [Fraction(0)]
        for r in range(1 << m):
            x, y = top[bin(r).count("1")]
            ts.append(ts[-1] + x)
            vs.append(vs[-1] + y)
        return CurveSamples(tuple(ts), tuple(vs), exact=True)
    idx = _popcounts(m)
    xs = np.array([float(x) for x, _ in top])[idx]
    ys = np.array([float(y) for _, y in top])[idx]
    ts = np.concatenate([[0.0], np.cumsum(xs)])
    vs = np.concatenate([[0.0], np.cumsum(ys)])
    return CurveSamples(tuple(ts.tolist()), tuple(vs.tolist()), exact=False)


def polyline_arrays(A: TriangularArray) -> tuple[np.ndarray, np.ndarray]:
    """Float breakpoints of phi_A as numpy arrays."""
    idx = _popcounts(A.m)
    top = A.lines[-1]
    xs = np.array([float(x) for x, _ in top])[idx]
    ys = np.array([float(y) for _, y in top])[idx]
    return np.concatenate([[0.0], np.cumsum(xs)]), np.concatenate([[0.0], np.cumsum(ys)])


def eval_polyline(A: TriangularArray, t) -> Fraction:
    """phi_A(t) exactly, by descending the subdivision (O(m))."""
    t = as_fraction(t)
    x00, y00 = A.lines[0][0]
    if not 0 <= t <= x00:
        raise ValueError(f"t={t} outside [0, {x00}]")
    base = Fraction(0)
    j = 0
    for i in range(A.m):
        xl, yl = A.lines[i + 1][j]
        if t <= xl:
            continue
        t -= xl
        base += yl
        j += 1
    x, y = A.lines[A.m][j]
    if x == 0:
        return base
    return base + y * t / x


def split_array(A: TriangularArray) -> tuple[TriangularArray, TriangularArray]:
    if A.m < 1:
        raise ValueError("need at least two lines to split")
    left = TriangularArray([A.lines[i + 1][: i + 1] for i in range(A.m)])
    right = TriangularArray([A.lines[i + 1][1:] for i in range(A.m)])
    return left, right


# --- the affinities ---------------------------------------------------------


@dataclass(frozen=True)
class AffineMap2:
    a: Fraction
    b: Fraction
    c: Fraction
    d: Fraction
    e: Fraction = Fraction(0)
    f: Fraction = Fraction(0)

    def __call__(self, pt):
        x, y = pt
        return (self.a * x + self.b * y + self.e, self.c * x + self.d * y + self.f)

    def linear(self, pt):
        x, y = pt
        return (self.a * x + self.b * y, self.c * x + self.d * y)


def alpha(side: str, p) -> AffineMap2:
    p = as_fraction(p)
    if not 0 < p < 1:
        raise ValueError("p must lie in (0,1)")
    if side == "L":
        return AffineMap2(p, Fraction(0), Fraction(1), p)
    if side == "R":
        return AffineMap2(1 - p, Fraction(0), Fraction(-1), 1 - p, p, Fraction(1))
    raise ValueError("side must be 'L' or 'R'")


def apply_alpha(side: str, p, pt) -> Pair:
    return alpha(side, p)((as_fraction(pt[0]), as_fraction(pt[1])))


def canonical_array(p, m: int) -> TriangularArray:
    """A_p^m: side x_{i,0} = p^i, y_{i,0} = i p^(i-1)."""
    p = as_fraction(p)
    if not 0 < p < 1:
        raise ValueError("p must lie in (0,1)")
    return TriangularArray.from_side([(p ** i, i * p ** (i - 1) if i else Fraction(0)) for i in range(m + 1)])


def transition_array(m: int) -> TriangularArray:
    """A'_{1/2}: side x = 2^-i, y = i (i-1) (1/2)^(i-2)."""
    half = Fraction(1, 2)
    return TriangularArray.from_side([(half ** i, i * (i - 1) * half ** (i - 2)) for i in range(m + 1)])


def family_array(p, s: int, m: int) -> TriangularArray:
    """Side x = p^i, y = i (i-1) ... (i-s) p^(i-s-1)."""
    p = as_fraction(p)
    if not 0 < p < 1 or s < 1:
        raise ValueError("need 0 < p < 1 and s >= 1")
    return TriangularArray.from_side([(p ** i, falling(i, s + 1) * p ** (i - s - 1)) for i in range(m + 1)])


def renormalize_side(side: Sequence[Pair], convention: str = "sup", builder=None) -> list[Pair]:
    """Rescale a side so x totals 1 and the curve vanishes at both ends.

    ``convention="sup"`` divides y by the sup of |phi| over the array
    breakpoints; ``"point"`` makes the first interior breakpoint equal 1.
    """
    x0, y0 = side[0]
    detrended = [(x / x0, y - (x / x0) * y0) for x, y in side]
    if convention == "point":
        scale = detrended[1][1]
    elif convention == "sup":
        A = (builder or TriangularArray.from_side)(detrended)
        _, vs = polyline_arrays(A)
        imax = int(np.argmax(np.abs(vs)))
        scale = Fraction(eval_polyline(A, _breakpoint(A, imax)))
    else:
        raise ValueError(f"unknown convention {convention!r}")
    if scale == 0:
        return detrended
    return [(x, y / scale) for x, y in detrended]


def _breakpoint(A: TriangularArray, r: int) -> Fraction:
    """Abscissa of the r-th breakpoint, exactly."""
    top = A.lines[-1]
    t = Fraction(0)
    for q in range(r):
        t += top[bin(q).count("1")][0]
    return t


def renormalized_tail_array(A: TriangularArray, i0: int, m: int | None = None,
                            side: str = "left", convention: str = "sup") -> TriangularArray:
    """Subarray of A starting at (i0, 0) (or (i0, i0) for the right side), renormalized.

    The source array must have at least i0 + m lines; for closed-form
    families pass a long enough array.
    """
    if i0 < 0:
        raise ValueError("i0 must be >= 0")
    m = A.m - i0 if m is None else m
    if i0 + m > A.m:
        raise ValueError(f"array has {A.m + 1} lines, need {i0 + m + 1}")
    if side == "left":
        sub = [A.lines[i + i0][0] for i in range(m + 1)]
        return TriangularArray.from_side(renormalize_side(sub, convention))
    if side == "right":
        sub = [A.lines[i + i0][-1] for i in range(m + 1)]
        return TriangularArray.from_right_side(
            renormalize_side(sub, convention, builder=TriangularArray.from_right_side))
    raise ValueError("side must be 'left' or 'right'")


def transition_tail_array(i0: int, m: int, side: str = "left", convention: str = "sup") -> TriangularArray:
    """Tail of A'_{1/2} without building its first i0 lines' full triangle."""
    half = Fraction(1, 2)
    if side == "left":
        sub = [(half ** (i + i0), (i + i0) * (i + i0 - 1) * half ** (i + i0 - 2)) for i in range(m + 1)]
        return TriangularArray.from_side(renormalize_side(sub, convention))
    return renormalized_tail_array(transition_array(i0 + m), i0, m, side=side, convention=convention)


# --- M_p --------------------------------------------------------------------


def mp_sup_bound(p) -> float:
    """|M_p| <= 1 / (1 - max(p, 1-p))."""
    q = max(float(p), 1 - float(p))
    return 1.0 / (1.0 - q)


def mp_sup_norm(p, m: int = 16) -> float:
    """max |M_p| over the stage-m breakpoints (a lower bound, exact in the limit)."""
    _, vs = polyline_arrays(canonical_array(p, m))
    return float(np.max(np.abs(vs)))


def mp_depth(p, eps: float, margin: int = 2) -> int:
    q = max(float(p), 1 - float(p))
    need = math.log(eps * (1 - q)) / math.log(q)
    return max(0, math.ceil(need)) + margin


def eval_Mp(p, t, eps: float = 1e-12) -> float:
    """M_p(t) within ``eps``.

    Descends the IFS: M(s) = p M(s/p) + s/p on [0,p] and
    M(s) = (1-p) M(u) - u + 1 with u = (s-p)/(1-p) on [p,1].  After m levels
    the unresolved term is scale * M(u) with scale <= max(p,1-p)^m.
    """
    p = as_fraction(p)
    s = as_fraction(t)
    if not 0 < p < 1:
        raise ValueError("p must lie in (0,1)")
    if not 0 <= s <= 1:
        raise ValueError("t must lie in [0,1]")
    return _mp_descent(p, s, mp_depth(p, eps))


def _mp_descent(p: Fraction, s: Fraction, depth: int) -> float:
    # s = N/D must stay exact (each step expands its error by 1/p or 1/(1-p));
    # it is kept unreduced, which is much cheaper than Fraction's gcds.
    # offset and scale only shrink, so floats are safe there.
    a, b = p.numerator, p.denominator
    N, D = s.numerator, s.denominator
    offset = 0.0
    scale = 1.0
    pf, qf = a / b, (b - a) / b
    for _ in range(depth):
        if N == 0 or N == D:
            return offset
        if N * b <= a * D:
            N, D = N * b, D * a
            offset += scale * (N / D)
            scale *= pf
        else:
            N, D = N * b - a * D, D * (b - a)
            offset += scale * ((D - N) / D)
            scale *= qf
    # level-0 approximant is the zero function
    return offset


def eval_Mp_many(p, ts, eps: float = 1e-12) -> np.ndarray:
    return np.array([eval_Mp(p, t, eps) for t in ts])


def mp_polyline(p, m: int) -> CurveSamples:
    """Stage-m approximant of M_p (Fig. 4 style), exact."""
    return array_to_polyline(canonical_array(p, m))


def compatible(curve, A: TriangularArray, tol: float = 0.0) -> bool:
    """True iff ``curve`` agrees with phi_A within ``tol`` at every array breakpoint.

    ``curve`` is CurveSamples or any callable on the breakpoint abscissae.
    """
    samples = array_to_polyline(A, exact=True)
    for t, v in zip(samples.ts, samples.values):
        if abs(curve(t) - v) > tol:
            return False
    return True


def sup_distance(f: Callable, g: Callable, ts) -> float:
    return max(abs(float(f(t)) - float(g(t))) for t in ts)


def dyadic_grid(bits: int) -> list[Fraction]:
    size = 1 << bits
    return [Fraction(i, size) for i in range(size + 1)]
