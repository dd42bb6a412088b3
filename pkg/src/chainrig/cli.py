"""Command line front end.

Exit status: 0 success or inequality holds, 1 inequality violated or oracle
mismatch, 2 input error.  Negative rationals need the ``--opt=-1/2`` form.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from pathlib import Path

from . import __version__
from .chainrule import evaluate, expand, min_surviving_order, truncate_for_degree, DerivativeTensors
from .curves import curve_through_points
from .exactpoly import format_rational, oracle_derivative
from .formats import FormatError, load_curve, load_points, load_polynomial
from .multiindex import eta
from .rigidity import (
    CurveOutsideBallError,
    certify_curve_rigidity_instance,
    certify_main_inequality,
    curve_rigidity_certificate,
    decimal12,
    interval_schedule,
    one_dim_certificate,
)

MAX_N = 4
MAX_ORDER = 8

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    pass


def _rational(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None


def _rational_list(text: str) -> list[Fraction]:
    return [_rational(part) for part in text.split(",") if part.strip()]


def _check_envelope(n: int, d: int, allow_large: bool) -> None:
    if n < 1 or d < 0:
        raise InputError("need n >= 1 and d >= 0")
    if not allow_large and (n > MAX_N or d + 1 > MAX_ORDER):
        raise InputError(
            f"n={n}, d+1={d + 1} is outside the default envelope "
            f"(n <= {MAX_N}, d+1 <= {MAX_ORDER}); pass --allow-large to proceed"
        )


def _header(command: str, **params) -> str:
    fields = " ".join(f"{k}={v}" for k, v in params.items())
    return f"# chainrig {__version__} {command} {fields}\n"


def _curve_from_args(args):
    if getattr(args, "curve", None):
        return load_curve(args.curve)
    if getattr(args, "points", None):
        points, params = load_points(args.points)
        return curve_through_points(points, params)
    raise InputError("a curve is required: pass --curve or --points")


def cmd_expand(args) -> tuple[str, int]:
    _check_envelope(args.n, args.d, args.allow_large)
    e = expand(args.n, args.d)
    params = {"n": args.n, "d": args.d, "order": args.d + 1}
    if args.degree is not None:
        if args.degree < 1:
            raise InputError("--degree must be at least 1")
        e = truncate_for_degree(e, args.degree)
        params.update(
            degree=args.degree,
            eta=eta(args.d, args.degree),
            min_surviving_order=min_surviving_order(expand(args.n, args.d), args.degree),
        )
    params["terms"] = len(e)
    return _header("expand", **params) + e.dump(), EXIT_OK


def cmd_oracle_check(args) -> tuple[str, int]:
    f = load_polynomial(args.poly)
    curve = _curve_from_args(args)
    if curve.n != f.n:
        raise InputError(f"curve has {curve.n} coordinates, polynomial has {f.n} variables")
    _check_envelope(f.n, args.d, args.allow_large)
    value = evaluate(expand(f.n, args.d), DerivativeTensors.from_polynomials(f, curve, args.t0, args.d))
    oracle = oracle_derivative(f, curve, args.d + 1, args.t0)
    verdict = "EQUAL" if value == oracle else "UNEQUAL"
    lines = [
        _header("oracle-check", n=f.n, d=args.d, t0=format_rational(args.t0)).rstrip("\n"),
        f"expansion {format_rational(value)} ({decimal12(value)})",
        f"oracle    {format_rational(oracle)} ({decimal12(oracle)})",
        verdict,
    ]
    if abs(args.t0) > 1:
        lines.insert(1, "# warning: t0 outside [-1, 1]")
    return "\n".join(lines) + "\n", EXIT_OK if value == oracle else EXIT_FAIL


def cmd_certify(args) -> tuple[str, int]:
    if args.mode == "main":
        if args.poly is None or args.d is None or args.t0 is None:
            raise InputError("main mode needs --poly, -d and --t0")
        f = load_polynomial(args.poly)
        _check_envelope(f.n, args.d, args.allow_large)
        cert = certify_main_inequality(f, _curve_from_args(args), args.t0, args.d, args.grid)
    elif args.mode == "curve-rigidity":
        if args.poly is not None:
            if args.d is None:
                raise InputError("curve-rigidity mode with --poly needs -d")
            f = load_polynomial(args.poly)
            _check_envelope(f.n, args.d, args.allow_large)
            cert = certify_curve_rigidity_instance(f, _curve_from_args(args), args.d, args.grid)
        else:
            if None in (args.n, args.d, args.s, args.m):
                raise InputError("curve-rigidity mode needs -n, -d, -s and --m (or --poly)")
            cert = curve_rigidity_certificate(args.n, args.d, args.s, args.m)
    else:
        zeros = args.zeros
        if zeros is None and args.points is not None:
            points, _ = load_points(args.points)
            if any(len(p) != 1 for p in points):
                raise InputError("one-dim mode needs a 1-dimensional points file")
            zeros = [p[0] for p in points]
        if zeros is None or args.z0 is None or args.m is None:
            raise InputError("one-dim mode needs --zeros (or --points), --z0 and --m")
        cert = one_dim_certificate(zeros, args.z0, args.m)
    return cert.to_json(), EXIT_FAIL if cert.verdict == "violated" else EXIT_OK


def cmd_schedule(args) -> tuple[str, int]:
    if args.s < 1:
        raise InputError("-s must be at least 1")
    sched = interval_schedule(args.s, args.j)
    shared = {}
    for j, k in sched.overlaps():
        shared.setdefault(j, []).append(k)
    lines = [_header("schedule", s=args.s, j_max=args.j).rstrip("\n"), "j\td_j\tI_j\ttheta_j\toverlap"]
    for e in sched.entries:
        mark = ",".join(map(str, shared.get(e.j, []))) or "-"
        lines.append(f"{e.j}\t{e.d}\t[{e.lo},{e.hi}]\t{e.theta}\t{mark}")
    ratios = sched.growth_ratios()
    if ratios:
        lines.append(
            "# d_(j+1)/d_j: " + ", ".join(f"{r:.4f}" for r in ratios) + f" (s+1 = {args.s + 1})"
        )
    return "\n".join(lines) + "\n", EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="chainrig", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"chainrig {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("-o", "--output", type=Path, help="write the result here instead of stdout")
        p.add_argument("--allow-large", action="store_true",
                       help=f"permit n > {MAX_N} or d+1 > {MAX_ORDER} (slow)")

    p = sub.add_parser("expand", help="print the chain-rule expansion of g^(d+1)")
    p.add_argument("-n", type=int, required=True, help="number of variables")
    p.add_argument("-d", type=int, required=True, help="order parameter; the expansion is for g^(d+1)")
    p.add_argument("--degree", type=int, help="truncate for curves of this degree")
    common(p)
    p.set_defaults(func=cmd_expand)

    p = sub.add_parser("oracle-check", help="compare the expansion with direct differentiation")
    p.add_argument("--poly", required=True, help="polynomial file")
    p.add_argument("--curve", help="curve file")
    p.add_argument("--points", help="points file (interpolated into a curve)")
    p.add_argument("-d", type=int, required=True)
    p.add_argument("--t0", type=_rational, required=True)
    common(p)
    p.set_defaults(func=cmd_oracle_check)

    p = sub.add_parser("certify", help="emit a rigidity certificate")
    p.add_argument("--mode", choices=("main", "curve-rigidity", "one-dim"), required=True)
    p.add_argument("--poly")
    p.add_argument("--curve")
    p.add_argument("--points")
    p.add_argument("-n", type=int)
    p.add_argument("-d", type=int)
    p.add_argument("-s", type=int)
    p.add_argument("--m", type=_rational, help="max |g| along the curve, or |g(z0)| in one-dim mode")
    p.add_argument("--t0", type=_rational)
    p.add_argument("--zeros", type=_rational_list, help="comma separated zeros (one-dim mode)")
    p.add_argument("--z0", type=_rational, help="witness point (one-dim mode)")
    p.add_argument("--grid", type=int, default=65, help="grid size for sampled checks")
    common(p)
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("schedule", help="print the derivative-order interval schedule")
    p.add_argument("-s", type=int, required=True, help="curve degree")
    p.add_argument("-j", type=int, required=True, help="number of intervals")
    common(p)
    p.set_defaults(func=cmd_schedule)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        text, status = args.func(args)
    except (InputError, FormatError, CurveOutsideBallError, ValueError, OSError) as exc:
        print(f"chainrig: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if args.output is not None:
        args.output.write_text(text)
    else:
        sys.stdout.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
