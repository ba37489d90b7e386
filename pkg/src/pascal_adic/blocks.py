"""The word triangle B_{n,k} and its generalized N0-letter version.

Words have binomial length, so everything here is a positional query that
descends the concatenation B_{n,k} = B_{n-1,k-1} B_{n-1,k} without building
the word.  :func:`materialize` exists for small blocks only.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .exactnum import binomial

DEFAULT_CAP = 1 << 20

A, B = "a", "b"


class CapExceeded(ValueError):
    """The requested word is longer than the caller's cap; use the query API."""


@dataclass(frozen=True)
class BlockId:
    n: int
    k: int

    def __post_init__(self):
        if self.n < 1 or not 0 <= self.k <= self.n:
            raise ValueError(f"invalid block ({self.n},{self.k}): need n >= 1 and 0 <= k <= n")

    @property
    def length(self) -> int:
        return binomial(self.n, self.k)


def _bid(n, k=None) -> BlockId:
    if isinstance(n, BlockId):
        return n
    return BlockId(n, k)


def block_length(n, k=None) -> int:
    return _bid(n, k).length


def _check_pos(length: int, ell: int, lo: int = 1) -> None:
    if not lo <= ell <= length:
        raise IndexError(f"position {ell} outside [{lo}, {length}]")


def letter_at(bid: BlockId, ell: int) -> str:
    """The ``ell``-th letter (1-based) of B_{n,k}."""
    n, k = bid.n, bid.k
    _check_pos(binomial(n, k), ell)
    while 0 < k < n:
        left = binomial(n - 1, k - 1)
        if ell <= left:
            k -= 1
        else:
            ell -= left
        n -= 1
    return A if k == 0 else B


def increment_at(bid: BlockId, ell: int) -> int:
    """Letter as a step: a -> +1, b -> -1."""
    return 1 if letter_at(bid, ell) == A else -1


@lru_cache(maxsize=4096)
def _word(n: int, k: int) -> str:
    if k == 0:
        return A
    if k == n:
        return B
    return _word(n - 1, k - 1) + _word(n - 1, k)


def materialize(bid: BlockId, cap: int = DEFAULT_CAP) -> str:
    length = bid.length
    if length > cap:
        raise CapExceeded(
            f"B_{{{bid.n},{bid.k}}} has {length} letters, above the cap of {cap}; "
            "use positional queries instead"
        )
    return _word(bid.n, bid.k)


def count_a(bid: BlockId) -> int:
    """Number of a's in the whole block, C(n-1, k)."""
    return binomial(bid.n - 1, bid.k)


def count_a_prefix(bid: BlockId, ell: int) -> int:
    n, k = bid.n, bid.k
    _check_pos(binomial(n, k), ell, lo=0)
    total = 0
    while ell and 0 < k < n:
        left = binomial(n - 1, k - 1)
        if ell <= left:
            k -= 1
        else:
            # whole left child B_{n-1,k-1} contributes C(n-2, k-1) a's
            total += binomial(n - 2, k - 1)
            ell -= left
        n -= 1
    if ell and k == 0:
        total += 1
    return total


def height(bid: BlockId) -> int:
    """#a - #b in B_{n,k}, i.e. ((n-2k)/n) C(n,k)."""
    return 2 * binomial(bid.n - 1, bid.k) - binomial(bid.n, bid.k)


def height_nk(n: int, k: int) -> int:
    """Height extended by zero outside the triangle (k < 0 or k > n)."""
    if k < 0 or k > n:
        return 0
    return 2 * binomial(n - 1, k) - binomial(n, k)


# Generalized blocks B^{N0}_{n,k} over letters a_0..a_{N0}.


@lru_cache(maxsize=None)
def generalized_letter_length(N0: int, n: int, k: int) -> int:
    """Number of letters of B^{N0}_{n,k}; unit on the base line and the edges."""
    if n < N0 or not 0 <= k <= n:
        raise ValueError(f"invalid generalized block ({n},{k}) for N0={N0}")
    if n == N0 or k == 0 or k == n:
        return 1
    return generalized_letter_length(N0, n - 1, k - 1) + generalized_letter_length(N0, n - 1, k)


def base_letter(N0: int, n: int, k: int) -> int:
    """Letter index of a block that does not split further."""
    if k == 0:
        return 0
    if k == n:
        return N0
    return k


def _check_generalized(N0: int, n: int, k: int) -> None:
    if N0 < 1:
        raise ValueError("alphabet level N0 must be >= 1")
    if n < N0 or not 0 <= k <= n:
        raise ValueError(f"invalid generalized block ({n},{k}) for N0={N0}")


def generalized_letter_at(N0: int, bid: BlockId | tuple, ell: int) -> int:
    """Index j of the ``ell``-th letter a_j of B^{N0}_{n,k}."""
    n, k = (bid.n, bid.k) if isinstance(bid, BlockId) else bid
    _check_generalized(N0, n, k)
    _check_pos(generalized_letter_length(N0, n, k), ell)
    while n > N0 and 0 < k < n:
        left = generalized_letter_length(N0, n - 1, k - 1)
        if ell <= left:
            k -= 1
        else:
            ell -= left
        n -= 1
    return base_letter(N0, n, k)


def generalized_materialize(N0: int, n: int, k: int, cap: int = DEFAULT_CAP) -> list[int]:
    _check_generalized(N0, n, k)
    length = generalized_letter_length(N0, n, k)
    if length > cap:
        raise CapExceeded(f"B^{N0}_{{{n},{k}}} has {length} letters, above the cap of {cap}")
    out: list[int] = []

    def rec(n: int, k: int) -> None:
        if n == N0 or k == 0 or k == n:
            out.append(base_letter(N0, n, k))
            return
        rec(n - 1, k - 1)
        rec(n - 1, k)

    rec(n, k)
    return out


def letter_name(N0: int, j: int) -> str:
    if N0 == 1:
        return A if j == 0 else B
    return f"a{j}"
