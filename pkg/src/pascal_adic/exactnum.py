"""Exact arithmetic substrate.

Integers are Python ints and rationals are :class:`fractions.Fraction`, which
already reduce to lowest terms with a positive denominator.  This module adds
a memoized binomial table and a small polynomial type in one variable ``p``.
"""
from __future__ import annotations

import math
import threading
from fractions import Fraction
from typing import Iterable, Sequence, Union

Rational = Fraction
Number = Union[int, Fraction]

__all__ = [
    "Rational",
    "BinomialTable",
    "binomial",
    "default_table",
    "PolynomialP",
    "poly_eval",
    "poly_sign_at",
    "as_fraction",
]


def as_fraction(value) -> Fraction:
    """Convert ints, Fractions, decimal strings or ``"a/b"`` strings exactly.

    Floats are converted through their shortest repr so that ``0.4`` means
    2/5 rather than the nearest binary double.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        return Fraction(repr(value))
    return Fraction(str(value).strip())


class BinomialTable:
    """Row-by-row Pascal cache up to ``n_max``; ``math.comb`` beyond.

    Rows are filled lazily, so asking for C(300, k) builds rows 0..300 once
    and nothing more.
    """

    def __init__(self, n_max: int = 512):
        self.n_max = n_max
        self._rows: list[list[int]] = [[1]]
        self._lock = threading.Lock()

    def _fill_to(self, n: int) -> None:
        with self._lock:
            rows = self._rows
            while len(rows) <= n:
                prev = rows[-1]
                row = [1]
                row.extend(prev[j - 1] + prev[j] for j in range(1, len(prev)))
                row.append(1)
                rows.append(row)

    def __call__(self, n: int, k: int) -> int:
        if n < 0:
            raise ValueError(f"binomial row must be nonnegative, got n={n}")
        if k < 0 or k > n:
            return 0
        if n > self.n_max:
            return math.comb(n, k)
        if n >= len(self._rows):
            self._fill_to(n)
        return self._rows[n][k]

    def cached_rows(self) -> int:
        return len(self._rows)

    def row(self, n: int) -> list[int]:
        if n > self.n_max:
            return [math.comb(n, k) for k in range(n + 1)]
        self(n, 0)
        return list(self._rows[n])

    def check_pascal(self) -> tuple[int, int] | None:
        """First cached entry violating Pascal's rule, or None."""
        rows = self._rows
        for n in range(1, len(rows)):
            if rows[n][0] != 1 or rows[n][n] != 1:
                return (n, 0 if rows[n][0] != 1 else n)
            for k in range(1, n):
                if rows[n][k] != rows[n - 1][k - 1] + rows[n - 1][k]:
                    return (n, k)
        return None


default_table = BinomialTable()


def binomial(n: int, k: int) -> int:
    """C(n, k), zero outside 0 <= k <= n."""
    return default_table(n, k)


class PolynomialP:
    """Polynomial in ``p`` with exact rational coefficients.

    ``coeffs[i]`` is the coefficient of ``p**i``; trailing zeros are dropped
    so the zero polynomial has an empty coefficient tuple.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[Number] = ()):
        cs = [as_fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs: tuple[Fraction, ...] = tuple(cs)

    @classmethod
    def constant(cls, c: Number) -> "PolynomialP":
        return cls([c])

    @classmethod
    def p(cls) -> "PolynomialP":
        return cls([0, 1])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = PolynomialP([other])
        if not isinstance(other, PolynomialP):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __repr__(self) -> str:
        if not self.coeffs:
            return "PolynomialP(0)"
        terms = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            terms.append(f"{c}" if i == 0 else f"{c}*p^{i}")
        return "PolynomialP(" + " + ".join(terms) + ")"

    def _coerce(self, other) -> "PolynomialP":
        if isinstance(other, PolynomialP):
            return other
        return PolynomialP([other])

    def __add__(self, other):
        other = self._coerce(other)
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (Fraction(0),) * (n - len(self.coeffs))
        b = other.coeffs + (Fraction(0),) * (n - len(other.coeffs))
        return PolynomialP(x + y for x, y in zip(a, b))

    __radd__ = __add__

    def __neg__(self):
        return PolynomialP(-c for c in self.coeffs)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        if self.is_zero() or other.is_zero():
            return PolynomialP()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return PolynomialP(out)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        result = PolynomialP([1])
        for _ in range(e):
            result = result * self
        return result

    def __call__(self, p: Number) -> Fraction:
        return poly_eval(self, p)

    def divmod_linear(self, root: Number) -> tuple["PolynomialP", Fraction]:
        """Synthetic division by (p - root): quotient and remainder."""
        root = as_fraction(root)
        if self.is_zero():
            return PolynomialP(), Fraction(0)
        cs = self.coeffs
        q = [Fraction(0)] * (len(cs) - 1)
        acc = Fraction(0)
        for i in range(len(cs) - 1, -1, -1):
            acc = acc * root + cs[i]
            if i > 0:
                q[i - 1] = acc
        return PolynomialP(q), acc

    def root_multiplicity(self, root: Number) -> int:
        """Multiplicity of ``root`` as a zero; raises for the zero polynomial."""
        if self.is_zero():
            raise ValueError("zero polynomial has every root with infinite multiplicity")
        mult = 0
        poly = self
        while True:
            q, r = poly.divmod_linear(root)
            if r != 0:
                return mult
            mult += 1
            poly = q

    def to_strings(self) -> list[str]:
        return [str(c) for c in self.coeffs]


def poly_eval(P: PolynomialP, p: Number) -> Fraction:
    """Horner evaluation, exact."""
    p = as_fraction(p)
    acc = Fraction(0)
    for c in reversed(P.coeffs):
        acc = acc * p + c
    return acc


def poly_sign_at(P: PolynomialP, p: Number) -> int:
    v = poly_eval(P, p)
    return (v > 0) - (v < 0)


def falling(i: int, count: int) -> int:
    """i (i-1) ... (i-count+1); 1 when count == 0."""
    out = 1
    for r in range(count):
        out *= i - r
    return out


def frac_str(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}" if x.denominator != 1 else str(x.numerator)


def fmt12(x) -> str:
    """Decimal with 12 significant digits, the CLI's fixed output format."""
    return format(float(x), ".12g")


def fractions_from(values: Sequence) -> list[Fraction]:
    return [as_fraction(v) for v in values]
