"""Write the data files behind every figure into one directory.

    python3 scripts/figures.py --out figures/
"""
import argparse
from pathlib import Path

from pascal_adic.cli import FIGURES, figure_files


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default="figures")
    ap.add_argument("names", nargs="*", default=list(FIGURES))
    a = ap.parse_args(argv)
    out = Path(a.out)
    out.mkdir(parents=True, exist_ok=True)
    for name in a.names:
        for fname, text in figure_files(name).items():
            (out / fname).write_text(text)
            print(out / fname)


if __name__ == "__main__":
    main()
