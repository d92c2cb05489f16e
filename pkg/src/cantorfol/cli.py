"""Command-line front end.

Exit codes: 0 success, 1 verification failure, 2 usage, domain or numeric error.
"""
from __future__ import annotations

import argparse
import io
import sys
from dataclasses import dataclass

import numpy as np

from . import __version__
from .cantor_core import EvalConfig, cantor_function, classify
from .errors import ConvergenceError, DomainError
from .foliation import LeafSpec, check_t, f_t, g_t, leaf_sample, vector_field
from .generator import check_order, g, g_inverse, h
from .staircase import psi
from .verifier import DEFAULT_T_GRID, SUITES, ode_funnel, run_all, sqrt_demo

FUNCTIONS = ("h", "g", "ginv", "psi", "ft", "gt", "X", "classify", "c")
DEFAULT_STEP = {"euler": 1e-3, "rk4": 1e-2}


def fmt(v: float) -> str:
    """17 significant digits: enough to round-trip any double."""
    return "%.17g" % v


def float_list(text: str) -> list[float]:
    text = text.strip()
    if not text:
        return []
    try:
        return [float(p) for p in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


@dataclass(frozen=True)
class CliConfig:
    r: int
    eval: EvalConfig
    seed: int

    @classmethod
    def from_args(cls, args) -> "CliConfig":
        if not 0 <= args.seed < 2**64:
            raise DomainError(f"seed must be a 64-bit unsigned integer, got {args.seed}")
        return cls(check_order(args.r), EvalConfig(args.depth, args.tol), args.seed)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--r", type=int, default=1, help="smoothness order, 1..6 (default 1)")
    common.add_argument("--depth", type=int, default=34, help="ternary classification depth (default 34)")
    common.add_argument("--tol", type=float, default=1e-14, help="bisection tolerance (default 1e-14)")
    common.add_argument("--seed", type=int, default=0, help="master seed (default 0)")

    p = argparse.ArgumentParser(prog="cantorfol", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"cantorfol {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    e = sub.add_parser("eval", parents=[common], help="evaluate one function at a point")
    e.add_argument("--fn", required=True, choices=FUNCTIONS)
    e.add_argument("--x", type=float, help="abscissa for h, g, gt, classify, c")
    e.add_argument("--y", type=float, help="ordinate for ginv, psi, ft, X")
    e.add_argument("--t", type=float, default=0.0, help="foliation parameter for ft, gt")

    lv = sub.add_parser("leaves", parents=[common], help="sample leaves to CSV (and SVG)")
    lv.add_argument("--t", type=float_list, default=[0.0], help="comma-separated t values")
    lv.add_argument("--c", type=float_list, default=[0.0], help="comma-separated translates")
    lv.add_argument("--xmin", type=float, default=-0.5)
    lv.add_argument("--xmax", type=float, default=1.5)
    lv.add_argument("--samples", type=int, default=201, help="points per leaf")
    lv.add_argument("--out", help="CSV path (default: standard output)")
    lv.add_argument("--svg", help="optional SVG path")

    v = sub.add_parser("verify", parents=[common], help="run verification suites")
    v.add_argument("--suite", default="all", choices=("all",) + SUITES)
    v.add_argument("--t", type=float_list, default=list(DEFAULT_T_GRID), help="comma-separated t grid")
    v.add_argument("--samples", type=int, default=10_000, help="samples per invariant")
    v.add_argument("--out", help="path for the JSON report")

    o = sub.add_parser("ode", parents=[common], help="integrate the field from the origin")
    o.add_argument("--method", default="both", choices=("euler", "rk4", "both"))
    o.add_argument("--step", type=float, help="step size (default 1e-3 Euler, 1e-2 RK4)")
    o.add_argument("--x-end", type=float, default=2.0, dest="x_end")
    o.add_argument("--t", type=float_list, default=list(DEFAULT_T_GRID), help="leaves checked for residual")
    o.add_argument("--demo", choices=("sqrt",), help="show the textbook y' = sqrt|y| example instead")
    return p


def _need(args, name):
    val = getattr(args, name)
    if val is None:
        raise DomainError(f"--fn {args.fn} needs --{name}")
    return val


def cmd_eval(args, cfg: CliConfig, out) -> int:
    r, ec, fn = cfg.r, cfg.eval, args.fn
    if fn in ("ft", "gt"):
        check_t(args.t)
    if fn == "h":
        val = h(_need(args, "x"), r, ec)
    elif fn == "g":
        val = g(_need(args, "x"), r, ec)
    elif fn == "c":
        val = cantor_function(_need(args, "x"), ec)
    elif fn == "ginv":
        val = g_inverse(_need(args, "y"), r, ec)
    elif fn == "psi":
        val = psi(_need(args, "y"), r, ec)
    elif fn == "ft":
        val = f_t(_need(args, "y"), args.t, r, ec)
    elif fn == "gt":
        val = g_t(_need(args, "x"), args.t, r, ec)
    elif fn == "X":
        vec = vector_field(0.0, _need(args, "y"), r, ec)
        print(f"{fmt(vec.dx)},{fmt(vec.dy)}", file=out)
        return 0
    else:
        print(classify(_need(args, "x"), ec), file=out)
        return 0
    print(fmt(val), file=out)
    return 0


def leaves_csv(rows) -> str:
    buf = io.StringIO(newline="")
    buf.write("t,c,x,y\n")
    for t, c, pts in rows:
        for x, y in pts:
            buf.write(f"{fmt(t)},{fmt(c)},{fmt(x)},{fmt(y)}\n")
    return buf.getvalue()


def leaves_svg(rows, width: int = 800, height: int = 500) -> str:
    """One polyline per leaf, axes scaled independently to fill the canvas."""
    pts = [p for _, _, ps in rows for p in ps]
    head = f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}">\n'
    if not pts:
        return head + "</svg>\n"
    arr = np.asarray(pts)
    lo, hi = arr.min(axis=0), arr.max(axis=0)
    span = np.where(hi > lo, hi - lo, 1.0)
    pad = 10.0
    body = []
    for t, c, ps in rows:
        a = np.asarray(ps)
        sx = pad + (a[:, 0] - lo[0]) / span[0] * (width - 2 * pad)
        sy = height - pad - (a[:, 1] - lo[1]) / span[1] * (height - 2 * pad)
        coords = " ".join(f"{x:.2f},{y:.2f}" for x, y in zip(sx, sy))
        body.append(f'  <polyline fill="none" stroke="black" stroke-width="1" '
                    f'data-t="{fmt(t)}" data-c="{fmt(c)}" points="{coords}"/>\n')
    return head + "".join(body) + "</svg>\n"


def cmd_leaves(args, cfg: CliConfig, out) -> int:
    for t in args.t:
        check_t(t)
    rows = []
    for t in sorted(args.t):
        for c in sorted(args.c):
            pts = leaf_sample(LeafSpec(t, c), args.xmin, args.xmax, args.samples, cfg.r, cfg.eval)
            rows.append((t, c, pts.tolist()))
    text = leaves_csv(rows)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        out.write(text)
    if args.svg:
        with open(args.svg, "w", encoding="utf-8", newline="") as fh:
            fh.write(leaves_svg(rows))
    return 0


def cmd_verify(args, cfg: CliConfig, out) -> int:
    suites = SUITES if args.suite == "all" else (args.suite,)
    if args.samples < 1000:
        raise DomainError(f"--samples must be at least 1000, got {args.samples}")
    for t in args.t:
        check_t(t)
    report = run_all(cfg.r, cfg.eval, cfg.seed, suites, args.samples, tuple(args.t))
    print(report.summary(), file=out)
    for s in report.suites:
        if s.name == "distinctness" and "witness" in s.measured:
            print(f"distinctness witness: {fmt(s.measured['witness'])}", file=out)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(report.to_json())
    return 0 if report.passed else 1


def cmd_ode(args, cfg: CliConfig, out) -> int:
    if args.demo == "sqrt":
        res = sqrt_demo(args.x_end, args.step or 1e-3)
        print(f"y' = sqrt|y|, y(0) = 0, x_end = {fmt(args.x_end)}", file=out)
        print(f"exact solutions: y = 0 -> {fmt(res['exact'][0])}; y = x^2/4 -> {fmt(res['exact'][1])}", file=out)
        print(f"euler landing: {fmt(res['euler'])}", file=out)
        print(f"rk4 landing: {fmt(res['rk4'])}", file=out)
        return 0
    methods = ("euler", "rk4") if args.method == "both" else (args.method,)
    for t in args.t:
        check_t(t)
    band_printed = False
    for m in methods:
        step = args.step if args.step is not None else DEFAULT_STEP[m]
        rep = ode_funnel(cfg.r, m, step, args.x_end, args.t if not band_printed else (), cfg.eval)
        if not band_printed:
            print(f"band: [{fmt(rep.exact_band[0])}, {fmt(rep.exact_band[1])}]", file=out)
            for t, res in rep.residual_max.items():
                print(f"leaf t={fmt(t)} residual: {fmt(res)}", file=out)
            band_printed = True
        for key, val in rep.numeric_landings.items():
            where = "inside" if rep.inside[key] else "outside"
            print(f"{key} landing: {fmt(val)} ({where} band +- {fmt(rep.slack[key])})", file=out)
    return 0


COMMANDS = {"eval": cmd_eval, "leaves": cmd_leaves, "verify": cmd_verify, "ode": cmd_ode}


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        cfg = CliConfig.from_args(args)
        return COMMANDS[args.command](args, cfg, out)
    except (DomainError, ConvergenceError, ArithmeticError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
    return 2


if __name__ == "__main__":
    sys.exit(main())
