"""Lower bounds on high-order derivatives of functions with many zeros.

Derivative norm convention: ``||f^(k)(x)|| = sum_{|alpha| = k} |d^alpha f(x)|``,
one summand per distinct multi-index (no multinomial multiplicities).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from decimal import Decimal, localcontext
from fractions import Fraction
from typing import Any, Sequence

from . import __version__
from .chainrule import DerivativeTensors, evaluate, expand, truncate_for_degree
from .curves import PolynomialCurve, in_unit_ball
from .exactpoly import (
    MVPoly,
    RationalLike,
    as_rational,
    compose_with_curve,
    format_rational,
    isolate_real_roots,
    oracle_derivative,
    partial_derivative,
    refine_root,
)
from .multiindex import eta, multi_indices


class CurveOutsideBallError(ValueError):
    """The curve leaves the unit ball, so the derivative bounds do not apply."""


def divided_difference(nodes: Sequence[RationalLike], values: Sequence[RationalLike]) -> Fraction:
    """Highest-order divided difference ``[t_0, ..., t_k] v`` by the triangular table."""
    ts = [as_rational(t) for t in nodes]
    vs = [as_rational(v) for v in values]
    if not ts:
        raise ValueError("need at least one node")
    if len(ts) != len(vs):
        raise ValueError(f"{len(ts)} nodes but {len(vs)} values")
    if len(set(ts)) != len(ts):
        raise ValueError("divided differences need pairwise distinct nodes")
    col = vs
    for level in range(1, len(ts)):
        col = [
            (col[i + 1] - col[i]) / (ts[i + level] - ts[i]) for i in range(len(col) - 1)
        ]
    return col[0]


@dataclass(frozen=True)
class OneDimBound:
    d: int
    sharp: Fraction
    uniform: Fraction
    gap_product: Fraction


def rigidity_1d_bound(
    zeros: Sequence[RationalLike], z0: RationalLike, m: RationalLike
) -> OneDimBound:
    """Bound ``max |g^(d+1)|`` on ``[-1, 1]`` for ``g`` vanishing at ``d+1`` zeros with ``|g(z0)| = m``.

    The divided difference of ``g`` over the zeros and ``z0`` equals
    ``g(z0) / prod |z0 - t_i|`` up to sign and also ``g^(d+1)(xi) / (d+1)!``,
    giving the sharp bound ``(d+1)! m / prod |z0 - t_i|``.  Every gap is at
    most 2, so the uniform bound ``m (d+1)! / 2^(d+1)`` is never larger.
    """
    ts = [as_rational(t) for t in zeros]
    z0, m = as_rational(z0), as_rational(m)
    if not ts:
        raise ValueError("need at least one zero")
    if m <= 0:
        raise ValueError("the witness value m must be positive")
    if len(set(ts)) != len(ts):
        raise ValueError("zeros must be pairwise distinct")
    if z0 in ts:
        raise ValueError("the witness point coincides with a zero")
    if any(abs(x) > 1 for x in ts + [z0]):
        raise ValueError("all points must lie in [-1, 1]")
    d = len(ts) - 1
    dd = divided_difference(ts + [z0], [0] * len(ts) + [m])
    fact = math.factorial(d + 1)
    sharp = abs(dd) * fact
    gaps = Fraction(1)
    for t in ts:
        gaps *= abs(z0 - t)
    return OneDimBound(d, sharp, m * fact / 2 ** (d + 1), gaps)


def constant_C1(n: int, s: int, d: int) -> int:
    """``s^(2(d+1)) (n+1)^(d+1) (d+1)^((d+1)(n+2))``."""
    if n < 1 or s < 1 or d < 0:
        raise ValueError("need n >= 1, s >= 1, d >= 0")
    return s ** (2 * (d + 1)) * (n + 1) ** (d + 1) * (d + 1) ** ((d + 1) * (n + 2))


def constant_C(n: int, d: int, s: int) -> Fraction:
    """Reciprocal of :func:`constant_C1` (note the argument order)."""
    return Fraction(1, constant_C1(n, s, d))


def derivative_norm_sum(
    f: MVPoly, x: Sequence[RationalLike], k_lo: int, k_hi: int
) -> Fraction:
    """``sum |d^alpha f(x)|`` over all ``alpha`` with ``k_lo <= |alpha| <= k_hi``."""
    if k_lo > k_hi:
        raise ValueError(f"empty order range [{k_lo}, {k_hi}]")
    if len(x) != f.n:
        raise ValueError(f"point has {len(x)} coordinates, f has {f.n} variables")
    point = [as_rational(v) for v in x]
    total = Fraction(0)
    for k in range(max(k_lo, 0), k_hi + 1):
        for alpha in multi_indices(f.n, k):
            total += abs(partial_derivative(f, alpha)(point))
    return total


def certify_curve_rigidity(n: int, d: int, s: int, m: RationalLike) -> Fraction:
    """``m (d+1)! C(n, d, s) / 2^(d+1)``."""
    m = as_rational(m)
    if m <= 0:
        raise ValueError("m must be positive")
    return m * math.factorial(d + 1) * constant_C(n, d, s) / 2 ** (d + 1)


# certificates -----------------------------------------------------------------


def decimal12(q: Fraction) -> str:
    with localcontext() as ctx:
        ctx.prec = 12
        return str(Decimal(q.numerator) / Decimal(q.denominator))


def rational_record(q: Fraction) -> dict[str, str]:
    return {"exact": format_rational(q), "decimal": decimal12(q)}


def _jsonable(value: Any) -> Any:
    if isinstance(value, Fraction):
        return rational_record(value)
    if isinstance(value, dict):
        return {k: _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    return value


@dataclass(frozen=True)
class RigidityCertificate:
    """A self-contained record of one inequality instance.

    ``verdict`` is ``"holds"`` or ``"violated"`` according to ``lhs >= rhs``.
    A record with no left-hand side (a bare constant computation) carries the
    verdict ``"bound-only"``.
    """

    kind: str
    parameters: dict[str, Any]
    constants: dict[str, Fraction]
    lhs: Fraction | None
    rhs: Fraction
    witness: dict[str, Any] = field(default_factory=dict)
    notes: tuple[str, ...] = ()

    @property
    def verdict(self) -> str:
        if self.lhs is None:
            return "bound-only"
        return "holds" if self.lhs >= self.rhs else "violated"

    @property
    def holds(self) -> bool:
        return self.verdict != "violated"

    def to_record(self) -> dict[str, Any]:
        return {
            "kind": self.kind,
            "version": __version__,
            "parameters": _jsonable(self.parameters),
            "constants": _jsonable(self.constants),
            "lhs": None if self.lhs is None else rational_record(self.lhs),
            "rhs": rational_record(self.rhs),
            "witness": _jsonable(self.witness),
            "verdict": self.verdict,
            "notes": list(self.notes),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_record(), indent=2) + "\n"


def _curve_record(curve: PolynomialCurve) -> dict[str, Any]:
    return {
        "dimension": curve.n,
        "degree": curve.degree,
        "coordinates": [[format_rational(c) for c in p.coeffs] for p in curve.coordinates],
    }


def _effective_degree(curve: PolynomialCurve) -> int:
    # a constant curve is treated as degree 1; s = 0 would zero out C1
    return max(curve.degree, 1)


def _require_ball(curve: PolynomialCurve, grid_size: int) -> None:
    check = in_unit_ball(curve, grid_size)
    if not check.inside:
        raise CurveOutsideBallError(
            f"curve leaves the unit ball: |w({format_rational(check.worst_t)})| ~ {check.worst_norm:.6g}"
        )


def certify_main_inequality(
    f: MVPoly, curve: PolynomialCurve, t0: RationalLike, d: int, grid_size: int = 65
) -> RigidityCertificate:
    """Pointwise instance of ``sum_{|alpha| >= eta} |d^alpha f(w(t0))| >= C |g^(d+1)(t0)|``.

    ``g^(d+1)(t0)`` comes from the composition oracle; the truncated chain-rule
    expansion is evaluated alongside and recorded in the witness.
    """
    if curve.n != f.n:
        raise ValueError(f"curve has {curve.n} coordinates, f has {f.n} variables")
    t0 = as_rational(t0)
    if abs(t0) > 1:
        raise ValueError("t0 must lie in [-1, 1]")
    _require_ball(curve, grid_size)
    s = _effective_degree(curve)
    lo = eta(d, s)
    point = curve(t0)
    lhs = derivative_norm_sum(f, point, lo, d + 1)
    g_value = oracle_derivative(f, curve, d + 1, t0)
    expansion_value = evaluate(
        truncate_for_degree(expand(f.n, d), s), DerivativeTensors.from_polynomials(f, curve, t0, d)
    )
    notes = []
    if expansion_value != g_value:
        notes.append("chain-rule expansion disagrees with the composition oracle")
    c1 = constant_C1(f.n, s, d)
    return RigidityCertificate(
        kind="main-inequality",
        parameters={"n": f.n, "d": d, "s": s, "eta": lo},
        constants={"C1": Fraction(c1), "C": Fraction(1, c1)},
        lhs=lhs,
        rhs=abs(g_value) / c1,
        witness={
            "t0": t0,
            "point": list(point),
            "g_derivative": g_value,
            "expansion_value": expansion_value,
            "f": f.to_text(),
            "curve": _curve_record(curve),
        },
        notes=tuple(notes),
    )


def curve_rigidity_certificate(n: int, d: int, s: int, m: RationalLike) -> RigidityCertificate:
    m = as_rational(m)
    bound = certify_curve_rigidity(n, d, s, m)
    c1 = constant_C1(n, s, d)
    return RigidityCertificate(
        kind="curve-rigidity",
        parameters={"n": n, "d": d, "s": s, "eta": eta(d, s), "m": m},
        constants={"C1": Fraction(c1), "C": Fraction(1, c1)},
        lhs=None,
        rhs=bound,
    )


def count_zeros_on_curve(f: MVPoly, curve: PolynomialCurve) -> int:
    """Distinct ``t`` in ``[-1, 1]`` with ``f(w(t)) = 0``, by exact root isolation."""
    g = compose_with_curve(f, curve)
    if g.is_zero():
        raise ValueError("f vanishes identically along the curve")
    return len(isolate_real_roots(g, -1, 1))


def certify_curve_rigidity_instance(
    f: MVPoly, curve: PolynomialCurve, d: int, grid_size: int = 65
) -> RigidityCertificate:
    """Check the curve-rigidity bound on a concrete polynomial ``f`` and curve.

    ``m`` is replaced by a certified lower estimate of ``max |f(w(t))|`` (its
    value at sampled rational parameters), which only weakens the bound.  The
    left side is likewise estimated from below by the largest pointwise sum
    ``sum_{eta <= |alpha| <= d+1} |d^alpha f(w(t))|`` over the same samples.
    """
    if curve.n != f.n:
        raise ValueError(f"curve has {curve.n} coordinates, f has {f.n} variables")
    _require_ball(curve, grid_size)
    g = compose_with_curve(f, curve)
    if g.is_zero():
        raise ValueError("f vanishes identically along the curve")
    zeros = isolate_real_roots(g, -1, 1)
    if len(zeros) < d + 1:
        raise ValueError(f"f has {len(zeros)} zeros along the curve, need at least {d + 1}")
    s = _effective_degree(curve)
    lo = eta(d, s)

    samples = {Fraction(-1) + Fraction(2 * k, grid_size - 1) for k in range(grid_size)}
    dg = g.derivative()
    if not dg.is_zero():
        for a, b in isolate_real_roots(dg, -1, 1):
            a, b = refine_root(dg, a, b, Fraction(1, 2**30))
            samples.add((a + b) / 2)
    ordered = sorted(samples)
    m_t = max(ordered, key=lambda t: abs(g(t)))
    m_lower = abs(g(m_t))
    sums = [(derivative_norm_sum(f, curve(t), lo, d + 1), t) for t in ordered]
    lhs, lhs_t = max(sums, key=lambda p: p[0])

    cert = curve_rigidity_certificate(f.n, d, s, m_lower)
    return RigidityCertificate(
        kind="curve-rigidity",
        parameters=cert.parameters,
        constants=cert.constants,
        lhs=lhs,
        rhs=cert.rhs,
        witness={
            "zero_count": len(zeros),
            "m_at": m_t,
            "lhs_at": lhs_t,
            "f": f.to_text(),
            "curve": _curve_record(curve),
        },
        notes=("m and the left side are lower estimates from sampled parameters",),
    )


def one_dim_certificate(
    zeros: Sequence[RationalLike], z0: RationalLike, m: RationalLike
) -> RigidityCertificate:
    """Record the sharp bound (as ``lhs``) against the uniform one (as ``rhs``)."""
    b = rigidity_1d_bound(zeros, z0, m)
    return RigidityCertificate(
        kind="one-dim",
        parameters={"d": b.d, "m": as_rational(m)},
        constants={"factorial": Fraction(math.factorial(b.d + 1)), "two_power": Fraction(2 ** (b.d + 1))},
        lhs=b.sharp,
        rhs=b.uniform,
        witness={
            "zeros": [as_rational(t) for t in zeros],
            "z0": as_rational(z0),
            "gap_product": b.gap_product,
        },
    )


# derivative-order schedule -----------------------------------------------------


@dataclass(frozen=True)
class ScheduleEntry:
    j: int
    s: int
    d: int
    lo: int
    hi: int

    @property
    def theta(self) -> int:
        return self.hi - self.lo

    @property
    def orders(self) -> range:
        return range(self.lo, self.hi + 1)


@dataclass(frozen=True)
class IntervalSchedule:
    s: int
    entries: tuple[ScheduleEntry, ...]

    def overlaps(self) -> list[tuple[int, int]]:
        """``(j, k)`` for each order ``k`` shared by intervals ``j`` and ``j+1``."""
        out = []
        for a, b in zip(self.entries, self.entries[1:]):
            for k in range(max(a.lo, b.lo), min(a.hi, b.hi) + 1):
                out.append((a.j, k))
        return out

    def growth_ratios(self) -> list[float]:
        return [b.d / a.d for a, b in zip(self.entries, self.entries[1:])]


def _entry(j: int, s: int, d: int) -> ScheduleEntry:
    return ScheduleEntry(j, s, d, eta(d, s), d + 1)


def interval_schedule(s: int, j_max: int) -> IntervalSchedule:
    """``d_1 = 5s``; ``d_j`` is the least ``d`` with ``eta(d, s) > d_{j-1}``.

    ``eta`` is non-decreasing in ``d``, so the least such ``d`` is
    ``(s+1) d_{j-1} - 1``; minimality is asserted directly.
    """
    if s < 1:
        raise ValueError("curve degree s must be at least 1")
    if j_max < 0:
        raise ValueError("j_max must be non-negative")
    entries: list[ScheduleEntry] = []
    d = 5 * s
    for j in range(1, j_max + 1):
        if j > 1:
            prev = d
            d = (s + 1) * prev - 1
            assert eta(d, s) > prev >= eta(d - 1, s)
        entries.append(_entry(j, s, d))
    return IntervalSchedule(s, tuple(entries))


def per_interval_bound(entry: ScheduleEntry, n: int, m: RationalLike) -> Fraction:
    """``m (d_j+1)! C(n, d_j, s) / (theta_j 2^(d_j+1))``."""
    m = as_rational(m)
    if m <= 0:
        raise ValueError("m must be positive")
    return certify_curve_rigidity(n, entry.d, entry.s, m) / entry.theta
