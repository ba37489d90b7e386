"""Command-line front end.  Emits data (CSV/JSON), never images.

Exit codes: 0 ok, 2 validation error, 3 check failure.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from .exactnum import as_fraction, fmt12, frac_str

EXIT_OK, EXIT_VALIDATION, EXIT_CHECK = 0, 2, 3


class ValidationError(ValueError):
    pass


@dataclass
class ReportSpec:
    """What a report command computes and where it goes."""

    experiment: str
    params: dict = field(default_factory=dict)
    out: str | None = None
    fmt: str = "csv"
    exact: bool = False
    tolerances: dict = field(default_factory=dict)


# --- output -----------------------------------------------------------------


def _cell(v, exact: bool) -> str:
    if isinstance(v, bool) or isinstance(v, (int, str)):
        return str(v)
    if isinstance(v, Fraction):
        return frac_str(v) if exact else fmt12(v)
    if v is None:
        return ""
    return fmt12(v)


def render_table(header, rows, fmt: str, exact: bool) -> str:
    if fmt == "json":
        recs = [{h: _cell(v, exact) for h, v in zip(header, row)} for row in rows]
        return json.dumps(recs, indent=1) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_cell(v, exact) for v in row])
    return buf.getvalue()


def _emit(args, text: str) -> None:
    if args.out_path:
        Path(args.out_path).write_text(text)
    else:
        sys.stdout.write(text)


def _table(args, header, rows) -> None:
    _emit(args, render_table(header, rows, args.format, args.exact))


def _json(args, obj) -> None:
    _emit(args, json.dumps(obj, indent=1) + "\n")


# --- parameter helpers ----------------------------------------------------------


def _p(value: str) -> Fraction:
    try:
        p = as_fraction(Fraction(value) if "/" in value else float(value))
    except (ValueError, ZeroDivisionError):
        raise ValidationError(f"cannot parse p={value!r}")
    if not 0 < p < 1:
        raise ValidationError(f"p must lie in (0,1), got {value}")
    return p


def _load_g(path):
    from .dyadicg import DyadicFunction

    if path is None:
        return None
    try:
        return DyadicFunction.load(path)
    except (OSError, KeyError, json.JSONDecodeError) as exc:
        raise ValidationError(f"cannot read observable {path}: {exc}")


def _bid(n, k):
    from .blocks import BlockId

    try:
        return BlockId(n, k)
    except ValueError as exc:
        raise ValidationError(str(exc))


def _n_list(text: str) -> list[int]:
    try:
        ns = [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise ValidationError(f"bad n list {text!r}")
    if not ns or min(ns) < 2:
        raise ValidationError("n list needs integers >= 2")
    return ns


# --- commands ------------------------------------------------------------------


def cmd_word(args) -> int:
    from .blocks import CapExceeded, generalized_materialize, letter_name, materialize

    try:
        if args.alphabet is None:
            word = materialize(_bid(args.n, args.k), cap=args.cap)
        else:
            if args.alphabet < 1 or not args.alphabet <= args.n:
                raise ValidationError("need 1 <= N0 <= n")
            letters = generalized_materialize(args.alphabet, args.n, args.k, cap=args.cap)
            word = " ".join(letter_name(args.alphabet, j) for j in letters)
    except CapExceeded as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_VALIDATION
    _emit(args, word + "\n")
    return EXIT_OK


def cmd_curve(args) -> int:
    from .curves import _cached_R, breakpoints, phi, phi_g

    bid = _bid(args.n, args.k)
    g = _load_g(args.g)
    if args.samples is not None:
        if args.samples < 1:
            raise ValidationError("samples must be >= 1")
        ts = [Fraction(j, args.samples) for j in range(args.samples + 1)]
    elif bid.length <= 4096:
        ts = breakpoints(bid)
    else:
        ts = [Fraction(j, 1024) for j in range(1025)]
    if g is None:
        if not 0 < bid.k < bid.n:
            raise ValidationError("the classical curve needs 0 < k < n")
        rows = [(t, phi(bid, t)) for t in ts]
    else:
        if g.level > bid.n:
            raise ValidationError(f"observable level {g.level} exceeds n={bid.n}")
        R = _cached_R(g, bid.n, bid.k)
        rows = [(t, phi_g(g, bid, t, R)) for t in ts]
    _table(args, ["t", "value"], rows)
    return EXIT_OK


def cmd_blancmange(args) -> int:
    from .selfaffine import eval_Mp

    p = _p(args.p)
    if args.samples < 1:
        raise ValidationError("samples must be >= 1")
    if not 0 < args.eps < 1:
        raise ValidationError("eps must lie in (0,1)")
    rows = [(Fraction(i, args.samples), eval_Mp(p, Fraction(i, args.samples), args.eps))
            for i in range(args.samples + 1)]
    _table(args, ["t", "value"], rows)
    return EXIT_OK


def _build_array(kind: str, p, m: int, s: int):
    from .selfaffine import canonical_array, family_array, transition_array

    if m < 0:
        raise ValidationError("m must be >= 0")
    if kind == "canonical":
        return canonical_array(p, m)
    if kind == "transition":
        return transition_array(m)
    return family_array(p, s, m)


def cmd_array(args) -> int:
    from .selfaffine import array_to_polyline

    p = _p(args.p) if args.kind != "transition" else Fraction(1, 2)
    A = _build_array(args.kind, p, args.m, args.s)
    if args.format == "json":
        _json(args, A.to_json(exact=args.exact))
    else:
        poly = array_to_polyline(A, exact=args.m <= 18)
        _table(args, ["t", "value"], list(zip(poly.ts, poly.values)))
    return EXIT_OK


def cmd_orbit(args) -> int:
    from .dyadicg import ab_indicator
    from .towers import Extender, Point, UndefinedAtDepth, orbit

    try:
        x = Point.from_bits(args.x)
    except ValueError as exc:
        raise ValidationError(f"bad point {args.x!r}: {exc}")
    if args.steps < 1:
        raise ValidationError("steps must be >= 1")
    g = _load_g(args.g) or ab_indicator()
    ext = None if args.extend == "none" else Extender(args.extend, _p(args.extend_p), args.seed)
    if x.depth < g.level:
        if ext is None:
            raise ValidationError(f"point depth {x.depth} below observable level {g.level}")
        x = x.extended(ext.more(g.level - x.depth))
    try:
        pts = orbit(x, args.steps, ext)
    except UndefinedAtDepth as exc:
        print(f"{exc}; pass --extend zeros|bernoulli to deepen the point", file=sys.stderr)
        return EXIT_VALIDATION
    rows = []
    F = Fraction(0)
    for j, pt in enumerate(pts):
        v = g(pt)
        F += v
        rows.append((j, pt.bits(), v, F))
    _table(args, ["step", "x", "g", "F"], rows)
    return EXIT_OK


def cmd_towers(args) -> int:
    from .towers import CapExceeded, build_towers

    if args.n < 1:
        raise ValidationError("n must be >= 1")
    try:
        towers = build_towers(args.n)
    except CapExceeded as exc:
        raise ValidationError(str(exc))
    if args.format == "json":
        _json(args, {"n": args.n, "towers": [{"k": t.k, "rungs": list(t.rungs)} for t in towers]})
    else:
        rows = [(t.k, r, j) for t in towers for r, j in enumerate(t.rungs)]
        _table(args, ["k", "rung", "interval"], rows)
    return EXIT_OK


def cmd_poly(args) -> int:
    from .dyadicg import pg_sign, polynomial_Pg

    g = _load_g(args.g)
    if g is None:
        raise ValidationError("poly needs --g FILE")
    P = polynomial_Pg(g)
    conv = frac_str if args.exact else fmt12
    obj = {"level": g.level, "coefficients": [conv(c) for c in P.coeffs],
           "degree": P.degree,
           "root_multiplicity_at_half": None if P.is_zero() else P.root_multiplicity(Fraction(1, 2)),
           "sign_at_half": pg_sign(g, Fraction(1, 2))}
    if args.format == "json":
        _json(args, obj)
    else:
        _table(args, ["power", "coefficient"], [(i, c) for i, c in enumerate(P.coeffs)])
    return EXIT_OK


def cmd_cohomology(args) -> int:
    from .dyadicg import NotCohomologous, cohomology_test

    g = _load_g(args.g)
    if g is None:
        raise ValidationError("cohomology needs --g FILE")
    try:
        res = cohomology_test(g)
    except NotCohomologous as exc:
        _emit(args, f"verdict: not cohomologous to a constant\nreason: {exc}\n")
        return EXIT_OK
    f = " ".join(frac_str(v) for v in res.transfer.values)
    _emit(args, f"verdict: cohomologous to a constant\nC: {frac_str(res.constant)}\nf: {f}\n")
    return EXIT_OK


def cmd_conway(args) -> int:
    from .conway import ConwaySeq, verify_concatenation

    if args.verify_concat:
        if args.lines < 1:
            raise ValidationError("lines must be >= 1")
        ok, bad = verify_concatenation(args.lines)
        _emit(args, "PASS\n" if ok else f"FAIL first mismatch at j={bad}\n")
        return EXIT_OK if ok else EXIT_CHECK
    if args.max is None or args.max < 1:
        raise ValidationError("conway needs --max J >= 1 or --verify-concat")
    c = ConwaySeq().values(args.max)
    rows = [(j, c[j - 1], 2 * (c[j - 1] - c[j - 2]) - 1 if j >= 3 else None) for j in range(1, args.max + 1)]
    _table(args, ["j", "C", "D"], rows)
    return EXIT_OK


def converge_rows(p: Fraction, ns, g=None, grid_bits: int = 9):
    """(n, k, sup distance to the target, n R / C) rows, plus the sign of P^g(p)."""
    from .blocks import BlockId
    from .curves import r_scaling, sup_distance_to_Mp
    from .dyadicg import ab_indicator, pg_sign
    from .selfaffine import mp_sup_norm

    sign = None
    scale = 1.0
    if g is not None:
        sign = pg_sign(g, p)
        scale = sign / mp_sup_norm(p)
    rows = []
    for n in ns:
        k = math.floor(p * n)
        if not 0 < k < n:
            raise ValidationError(f"floor(p n) = {k} is not interior at n={n}")
        if g is not None and g.level > n:
            raise ValidationError(f"observable level {g.level} exceeds n={n}")
        d = sup_distance_to_Mp(BlockId(n, k), p, grid_bits=grid_bits, g=g, target_scale=scale)
        rows.append((n, k, d, r_scaling(g or ab_indicator(), n, p)))
    return rows, sign


def cmd_converge(args) -> int:
    p = _p(args.p)
    g = _load_g(args.g)
    rows, sign = converge_rows(p, _n_list(args.n_list), g, args.grid_bits)
    if sign == 0:
        print("warning: P^g(p)=0: transition regime; distances are to the zero curve", file=sys.stderr)
    _table(args, ["n", "k", "sup_distance", "nR_over_C"], rows)
    return EXIT_OK


FIGURES = ("fig2", "fig3", "fig4", "fig5", "fig6")


def figure_files(name: str) -> dict[str, str]:
    """File name -> contents for one figure's data."""
    from .blocks import BlockId
    from .curves import eval_F, phi
    from .selfaffine import array_to_polyline, canonical_array, eval_Mp, mp_polyline, transition_array

    files = {}
    if name == "fig2":
        bid = BlockId(6, 3)
        files["fig2_F63.csv"] = render_table(["ell", "F"], [(l, eval_F(bid, l)) for l in range(bid.length + 1)],
                                             "csv", True)
    elif name == "fig3":
        for p, n in ((Fraction(1, 2), 200), (Fraction(4, 5), 200)):
            bid = BlockId(n, math.floor(p * n))
            ts = [Fraction(i, 1024) for i in range(1025)]
            rows = [(t, phi(bid, t), eval_Mp(p, t)) for t in ts]
            files[f"fig3_p{float(p)}_n{n}.csv"] = render_table(["t", "phi", "M_p"], rows, "csv", False)
    elif name == "fig4":
        rows = []
        for m in range(1, 5):
            poly = mp_polyline(Fraction(2, 5), m)
            rows.extend((m, t, v) for t, v in zip(poly.ts, poly.values))
        files["fig4_stages_p0.4.csv"] = render_table(["stage", "t", "value"], rows, "csv", False)
    elif name == "fig5":
        A = canonical_array(Fraction(1, 2), 3)
        files["fig5_array.json"] = json.dumps(A.to_json(exact=True), indent=1) + "\n"
        poly = array_to_polyline(A)
        files["fig5_polyline.csv"] = render_table(["t", "value"], list(zip(poly.ts, poly.values)), "csv", True)
    elif name == "fig6":
        # the depth-14 truncation has the same values at its breakpoints as the depth-24 polyline
        A = transition_array(24)
        poly = array_to_polyline(A.truncated(14), exact=True)
        files["fig6_transition_m24.csv"] = render_table(["t", "value"], list(zip(poly.ts, poly.values)),
                                                        "csv", False)
        files["fig6_side.json"] = json.dumps({"m": A.m, "side": [[frac_str(x), frac_str(y)] for x, y in A.side()]},
                                             indent=1) + "\n"
    else:
        raise ValidationError(f"unknown figure {name!r}; choose from {', '.join(FIGURES)}")
    return files


def cmd_figure(args) -> int:
    files = figure_files(args.name)
    outdir = Path(args.out_path or "figures")
    outdir.mkdir(parents=True, exist_ok=True)
    for fname, text in files.items():
        (outdir / fname).write_text(text)
        print(outdir / fname)
    return EXIT_OK


def cmd_selftest(args) -> int:
    from .checks import report, run_all

    if args.inject_fault == "binomial-cache":
        from .exactnum import default_table

        default_table(40, 20)
        default_table._rows[37][11] += 1
    keys = set(args.only.split(",")) if args.only else None
    results = run_all(args.seed, keys)
    _emit(args, report(results))
    return EXIT_OK if all(r.ok for r in results) else EXIT_CHECK


# --- parser --------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="RNG seed (unsigned 64-bit)")
    common.add_argument("--out", default=None,
                        help="output path; the values csv/json select the format and write to stdout")
    common.add_argument("--format", choices=("csv", "json"), default=None)
    common.add_argument("--exact", action="store_true", help="rationals as num/den instead of 12-digit decimals")

    ap = argparse.ArgumentParser(prog="pascal-adic", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    s = sub.add_parser("word", parents=[common], help="basic block B_{n,k}")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--alphabet", type=int, default=None, metavar="N0")
    s.add_argument("--cap", type=int, default=1 << 20)
    s.set_defaults(func=cmd_word)

    s = sub.add_parser("curve", parents=[common], help="renormalized ergodic-sum curve")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--g", default=None, metavar="FILE")
    s.add_argument("--samples", type=int, default=None)
    s.set_defaults(func=cmd_curve)

    s = sub.add_parser("blancmange", parents=[common], help="sample M_p")
    s.add_argument("--p", required=True)
    s.add_argument("--samples", type=int, default=4096)
    s.add_argument("--eps", type=float, default=1e-9)
    s.set_defaults(func=cmd_blancmange)

    s = sub.add_parser("array", parents=[common], help="triangular arrays")
    s.add_argument("--kind", choices=("canonical", "transition", "family"), required=True)
    s.add_argument("--p", default="1/2")
    s.add_argument("--m", type=int, required=True)
    s.add_argument("--s", type=int, default=1, help="order for --kind family")
    s.set_defaults(func=cmd_array, default_format="json")

    s = sub.add_parser("orbit", parents=[common], help="orbit of a point under T")
    s.add_argument("--x", required=True, help="binary digits, e.g. 0.0110")
    s.add_argument("--steps", type=int, default=64)
    s.add_argument("--g", default=None, metavar="FILE")
    s.add_argument("--extend", choices=("none", "zeros", "bernoulli"), default="bernoulli",
                   help="digit policy when the point sits on top rungs (bernoulli is seeded by --seed)")
    s.add_argument("--extend-p", default="1/2")
    s.set_defaults(func=cmd_orbit)

    s = sub.add_parser("towers", parents=[common], help="rung lists of the level-n towers")
    s.add_argument("--n", type=int, required=True)
    s.set_defaults(func=cmd_towers, default_format="json")

    s = sub.add_parser("poly", parents=[common], help="coefficients of P^g")
    s.add_argument("--g", required=True, metavar="FILE")
    s.set_defaults(func=cmd_poly, default_format="json")

    s = sub.add_parser("cohomology", parents=[common], help="is g cohomologous to a constant?")
    s.add_argument("--g", required=True, metavar="FILE")
    s.set_defaults(func=cmd_cohomology)

    s = sub.add_parser("conway", parents=[common], help="Conway sequence and the word triangle")
    s.add_argument("--max", type=int, default=None)
    s.add_argument("--verify-concat", action="store_true")
    s.add_argument("--lines", type=int, default=14)
    s.set_defaults(func=cmd_conway)

    s = sub.add_parser("converge", parents=[common], help="sup distances to the limiting curve")
    s.add_argument("--p", required=True)
    s.add_argument("--n-list", default="40,80,160,320")
    s.add_argument("--g", default=None, metavar="FILE")
    s.add_argument("--grid-bits", type=int, default=9)
    s.set_defaults(func=cmd_converge)

    s = sub.add_parser("figure", parents=[common], help="data files for a figure")
    s.add_argument("name", help="|".join(FIGURES))
    s.set_defaults(func=cmd_figure)

    s = sub.add_parser("selftest", parents=[common], help="run the acceptance checks")
    s.add_argument("--only", default=None, help="comma-separated check keys")
    s.add_argument("--inject-fault", choices=("binomial-cache",), default=None,
                   help="corrupt a cached binomial row first (to test the harness)")
    s.set_defaults(func=cmd_selftest)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    args.out_path = args.out
    if args.out in ("csv", "json"):
        args.format = args.format or args.out
        args.out_path = None
    if args.format is None:
        args.format = getattr(args, "default_format", "csv")
    if args.seed < 0 or args.seed >= 1 << 64:
        print("error: --seed must be an unsigned 64-bit integer", file=sys.stderr)
        return EXIT_VALIDATION
    try:
        return args.func(args)
    except (ValidationError, ValueError, IndexError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
