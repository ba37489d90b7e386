"""Leading constants of the transition numerators along (2k, k).

For g_N0 the numerator of y_{i,0} is (1/2)^i C(2k,k) c_N0 q(i) k^-e + o(k^-e),
with q(i) = i(i-1) for even N0, q(i) = i for odd N0, and e = floor(N0 / 2) + 1.
The printed estimate of c_N0 is numerator * 2^i k^e / (C(2k,k) q(i)) at
the largest k, with a Richardson step over k and 2k to remove the 1/k term.

    python3 scripts/transition_constants.py --k 2000
"""
import argparse
from dataclasses import dataclass
from fractions import Fraction

from pascal_adic.dyadicg import transition_numerator
from pascal_adic.exactnum import binomial


@dataclass
class TransitionConfig:
    n0s: tuple = (2, 3, 4, 5, 6, 7)
    k: int = 2000
    i_values: tuple = (2, 3, 4, 5, 6)


def exponent(N0: int) -> int:
    return N0 // 2 + 1


def shape(N0: int, i: int) -> int:
    return i * (i - 1) if N0 % 2 == 0 else i


def estimate(N0: int, k: int, i: int) -> Fraction:
    e = exponent(N0)
    return transition_numerator(N0, k, i) * 2 ** i * k ** e / (binomial(2 * k, k) * shape(N0, i))


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--k", type=int, default=2000)
    a = ap.parse_args(argv)
    cfg = TransitionConfig(k=a.k)
    print("N0,i,estimate_k,richardson")
    for N0 in cfg.n0s:
        for i in cfg.i_values:
            c1 = estimate(N0, cfg.k, i)
            c2 = estimate(N0, 2 * cfg.k, i)
            print(f"{N0},{i},{float(c1):.6f},{float(2 * c2 - c1):.6f}")


if __name__ == "__main__":
    main()
