"""Standalone re-check of certificate records.

Works from the JSON record alone and deliberately imports nothing from the
rest of the package: constants are recomputed from their closed forms and the
verdict from the stored exact values.  With ``deep=True`` a main-inequality
record is recomputed from its embedded polynomial and curve using sympy.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from typing import Any


def _q(entry: Any) -> Fraction:
    if isinstance(entry, dict):
        entry = entry["exact"]
    return Fraction(entry)


def _c1(n: int, s: int, d: int) -> int:
    return s ** (2 * (d + 1)) * (n + 1) ** (d + 1) * (d + 1) ** ((d + 1) * (n + 2))


def check_certificate(record: dict[str, Any], deep: bool = False) -> list[str]:
    """Return a list of problems; an empty list means the record checks out."""
    problems: list[str] = []
    kind = record.get("kind")
    params = record.get("parameters", {})
    lhs = None if record.get("lhs") is None else _q(record["lhs"])
    rhs = _q(record["rhs"])

    expected = "bound-only" if lhs is None else ("holds" if lhs >= rhs else "violated")
    if record.get("verdict") != expected:
        problems.append(f"verdict {record.get('verdict')!r} but values imply {expected!r}")

    if kind in ("main-inequality", "curve-rigidity"):
        n, d, s = params["n"], params["d"], params["s"]
        c1 = _c1(n, s, d)
        if _q(record["constants"]["C1"]) != c1:
            problems.append("C1 does not match its closed form")
        if _q(record["constants"]["C"]) != Fraction(1, c1):
            problems.append("C is not the reciprocal of C1")
        if params.get("eta") != (d + 1) // (s + 1) + 1:
            problems.append("eta does not match floor((d+1)/(s+1)) + 1")
        if kind == "curve-rigidity":
            m = _q(params["m"])
            bound = m * math.factorial(d + 1) / (c1 * 2 ** (d + 1))
            if rhs != bound:
                problems.append("rhs differs from m (d+1)! C / 2^(d+1)")
        else:
            g = _q(record["witness"]["g_derivative"])
            if rhs != abs(g) / c1:
                problems.append("rhs differs from C |g^(d+1)(t0)|")
            if deep:
                problems.extend(_deep_main(record))
    elif kind == "one-dim":
        d = params["d"]
        m = _q(params["m"])
        zeros = [_q(z) for z in record["witness"]["zeros"]]
        z0 = _q(record["witness"]["z0"])
        gaps = Fraction(1)
        for z in zeros:
            gaps *= abs(z0 - z)
        if len(zeros) != d + 1:
            problems.append("zero count does not match d+1")
        if lhs != m * math.factorial(d + 1) / gaps:
            problems.append("sharp bound differs from (d+1)! m / prod |z0 - t_i|")
        if rhs != m * math.factorial(d + 1) / 2 ** (d + 1):
            problems.append("uniform bound differs from m (d+1)! / 2^(d+1)")
    else:
        problems.append(f"unknown certificate kind {kind!r}")
    return problems


_TERM = re.compile(r"(-?\d+/\d+) \* (.*)")


def _deep_main(record: dict[str, Any]) -> list[str]:
    import sympy as sp

    params, witness = record["parameters"], record["witness"]
    n, d, lo = params["n"], params["d"], params["eta"]
    xs = sp.symbols(f"x1:{n + 1}")
    t = sp.Symbol("t")
    f = sp.Integer(0)
    for term in witness["f"].split(" + "):
        m = _TERM.fullmatch(term.strip())
        coeff, mono = sp.Rational(m.group(1)), sp.Integer(1)
        for factor in m.group(2).split():
            var, exp = factor.split("^")
            mono *= xs[int(var[1:]) - 1] ** int(exp)
        f += coeff * mono
    curve = [
        sum(sp.Rational(c) * t**k for k, c in enumerate(cs))
        for cs in witness["curve"]["coordinates"]
    ]
    t0 = sp.Rational(_q(witness["t0"]))
    g_d = sp.diff(f.subs(dict(zip(xs, curve)), simultaneous=True), t, d + 1).subs(t, t0)
    point = {x: c.subs(t, t0) for x, c in zip(xs, curve)}

    lhs = sp.Integer(0)
    for exps in _multi_indices(n, lo, d + 1):
        deriv = f
        for x, e in zip(xs, exps):
            deriv = sp.diff(deriv, x, e)
        lhs += abs(deriv.subs(point))

    problems = []
    if Fraction(str(g_d)) != _q(witness["g_derivative"]):
        problems.append("g^(d+1)(t0) does not match an independent recomputation")
    if Fraction(str(lhs)) != _q(record["lhs"]):
        problems.append("lhs does not match an independent recomputation")
    return problems


def _multi_indices(n: int, lo: int, hi: int):
    def rec(k: int, total: int):
        if k == 1:
            yield (total,)
            return
        for first in range(total + 1):
            for rest in rec(k - 1, total - first):
                yield (first,) + rest

    for total in range(lo, hi + 1):
        yield from rec(n, total)
