"""Brute-force references kept apart from the fast paths they check.

Nothing here imports the descent code in blocks/curves/towers; each oracle
recomputes from first principles (explicit enumeration, series, tables).
"""
from __future__ import annotations

from functools import lru_cache


@lru_cache(maxsize=None)
def pascal_row(n: int) -> tuple[int, ...]:
    row = (1,)
    for _ in range(n):
        row = tuple(a + b for a, b in zip((0,) + row, row + (0,)))
    return row


def pascal(n: int, k: int) -> int:
    if k < 0 or k > n:
        return 0
    return pascal_row(n)[k]


@lru_cache(maxsize=None)
def word_triangle(n_max: int) -> tuple[tuple[str, ...], ...]:
    """All words B_{n,k}, n = 1..n_max, built line by line (index [n-1][k])."""
    lines = [("a", "b")]
    for n in range(2, n_max + 1):
        prev = lines[-1]
        line = ["a"] + [prev[k - 1] + prev[k] for k in range(1, n)] + ["b"]
        lines.append(tuple(line))
    return tuple(lines)


def word(n: int, k: int) -> str:
    return word_triangle(n)[n - 1][k]


def walk(word: str) -> list[int]:
    """F(0..len) for the +-1 walk of a word."""
    out = [0]
    for ch in word:
        out.append(out[-1] + (1 if ch == "a" else -1))
    return out


def takagi_doubled(t, terms: int = 60) -> float:
    """2 * sum_{n=0}^{terms} 2^-n dist(2^n t, Z).

    Float arithmetic: a rounding error e in t moves each term by at most e,
    and for 12-bit dyadic t every term is exact.
    """
    t = float(t)
    s = 0.0
    scale = 1.0
    for _ in range(terms + 1):
        d = t % 1.0
        s += min(d, 1.0 - d) * scale
        t *= 2.0
        scale *= 0.5
    return 2.0 * s


def generalized_word(N0: int, n: int, k: int) -> list[int]:
    """B^{N0}_{n,k} as letter indices, by explicit concatenation."""
    lines = {N0: [[j] for j in range(N0 + 1)]}
    for m in range(N0 + 1, n + 1):
        prev = lines[m - 1]
        lines[m] = [[0]] + [prev[j - 1] + prev[j] for j in range(1, m)] + [[N0]]
    return lines[n][k]


def orbit_sums_by_search(g_values, N0: int, towers_n0, word_letters):
    """g along the orbit: substitute each letter a_j by g over tau_{N0,j}'s rungs."""
    seq = []
    for j in word_letters:
        seq.extend(g_values[r] for r in towers_n0[j].rungs)
    return seq
