"""Conway's recursive sequence and its link with the word triangle."""
from __future__ import annotations

from array import array
from typing import Iterator

from .blocks import A, B, DEFAULT_CAP, BlockId, CapExceeded, materialize


class ConwaySeq:
    """C(1) = C(2) = 1, C(j) = C(C(j-1)) + C(j - C(j-1)), filled on demand."""

    def __init__(self):
        # index 0 unused
        self._c = array("q", [0, 1, 1])

    def fill(self, j: int) -> None:
        c = self._c
        for i in range(len(c), j + 1):
            prev = c[i - 1]
            c.append(c[prev] + c[i - prev])

    def __call__(self, j: int) -> int:
        if j < 1:
            raise ValueError("Conway sequence starts at j = 1")
        if j >= len(self._c):
            self.fill(j)
        return self._c[j]

    def values(self, j_max: int) -> list[int]:
        self.fill(j_max)
        return list(self._c[1 : j_max + 1])


_shared = ConwaySeq()


def conway(j: int) -> int:
    return _shared(j)


def d_sequence(j_max: int) -> list[int]:
    """D(j) = 2 (C(j) - C(j-1)) - 1 for j = 3..j_max."""
    if j_max < 3:
        raise ValueError("j_max must be >= 3")
    c = _shared.values(j_max)
    return [2 * (c[j - 1] - c[j - 2]) - 1 for j in range(3, j_max + 1)]


def triangle_increments(lines: int) -> Iterator[tuple[int, int, list[int]]]:
    """(n, k, +-1 steps of B_{n,k}) for n = 1..lines in reading order."""
    for n in range(1, lines + 1):
        for k in range(n + 1):
            word = materialize(BlockId(n, k))
            yield n, k, [1 if ch == A else -1 for ch in word]


def verify_concatenation(lines: int) -> tuple[bool, int | None]:
    """Check (D(j))_{j>=3} = B_{1,0} B_{1,1} B_{2,0} ...; return (ok, first bad j)."""
    total = (1 << (lines + 1)) - 2
    d = d_sequence(total + 2)
    pos = 0
    for _, _, steps in triangle_increments(lines):
        for s in steps:
            if d[pos] != s:
                return False, pos + 3
            pos += 1
    return True, None


def _cut_after(word: str, letter: str) -> list[str]:
    pieces = []
    start = 0
    for i, ch in enumerate(word):
        if ch == letter:
            pieces.append(word[start : i + 1])
            start = i + 1
    pieces.append(word[start:])
    return pieces


def interleave(n: int, k: int, cap: int = DEFAULT_CAP) -> str:
    """B_{n,k} rebuilt from B_{n-1,k-1} cut after each a and B_{n-1,k} cut after each b.

    Pieces alternate left, right, left, ... starting from the left word.
    """
    if not 0 < k < n:
        raise ValueError("interleave needs 0 < k < n")
    bid = BlockId(n, k)
    if bid.length > cap:
        raise CapExceeded(f"B_{{{n},{k}}} has {bid.length} letters, above the cap of {cap}")
    left = _cut_after(materialize(BlockId(n - 1, k - 1), cap), A)
    right = _cut_after(materialize(BlockId(n - 1, k), cap), B)
    out = []
    for i in range(max(len(left), len(right))):
        if i < len(left):
            out.append(left[i])
        if i < len(right):
            out.append(right[i])
    return "".join(out)
