"""Sup-distance tables for the block curves against M_p, plus the n R / C column.

    python3 scripts/converge.py --p 1/2 --n-list 40,80,160,320,640
"""
import argparse
import sys
from dataclasses import dataclass, field
from fractions import Fraction

from pascal_adic.cli import converge_rows, render_table
from pascal_adic.dyadicg import DyadicFunction


@dataclass
class ConvergeConfig:
    ps: tuple = (Fraction(1, 2), Fraction(4, 5))
    ns: tuple = (40, 80, 160, 320)
    grid_bits: int = 9
    g_path: str | None = None
    extra: dict = field(default_factory=dict)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--p", action="append", help="repeatable; default 1/2 and 4/5")
    ap.add_argument("--n-list", default="40,80,160,320")
    ap.add_argument("--grid-bits", type=int, default=9)
    ap.add_argument("--g", default=None)
    a = ap.parse_args(argv)
    cfg = ConvergeConfig(ns=tuple(int(v) for v in a.n_list.split(",")), grid_bits=a.grid_bits, g_path=a.g)
    if a.p:
        cfg.ps = tuple(Fraction(v) for v in a.p)
    g = DyadicFunction.load(cfg.g_path) if cfg.g_path else None
    for p in cfg.ps:
        rows, sign = converge_rows(p, cfg.ns, g, cfg.grid_bits)
        print(f"# p = {p}" + ("" if sign is None else f", sign P^g(p) = {sign}"))
        if sign == 0:
            print("# P^g(p)=0: transition regime", file=sys.stderr)
        sys.stdout.write(render_table(["n", "k", "sup_distance", "nR_over_C"], rows, "csv", False))


if __name__ == "__main__":
    main()
