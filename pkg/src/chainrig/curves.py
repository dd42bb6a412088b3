"""Polynomial parametric curves ``w: [-1, 1] -> R^n``."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Union

from .exactpoly import (
    RationalLike,
    UniPoly,
    as_rational,
    isolate_real_roots,
    nonnegative_on,
    refine_root,
)

Number = Union[Fraction, float]

NORMS = ("euclidean", "max")


@dataclass(frozen=True)
class PolynomialCurve:
    """Coordinates ``w_1 .. w_n``; ``degree`` is the declared bound ``s``.

    When ``degree`` is omitted it is the largest coordinate degree (0 for a
    constant curve).  A declared degree may exceed the actual one but never
    fall below it.
    """

    coordinates: tuple[UniPoly, ...]
    degree: int = None  # type: ignore[assignment]

    def __post_init__(self) -> None:
        coords = tuple(c if isinstance(c, UniPoly) else UniPoly(c) for c in self.coordinates)
        if not coords:
            raise ValueError("a curve needs at least one coordinate")
        object.__setattr__(self, "coordinates", coords)
        actual = max((int(c.degree) for c in coords if not c.is_zero()), default=0)
        if self.degree is None:
            object.__setattr__(self, "degree", actual)
        elif self.degree < actual:
            raise ValueError(f"declared degree {self.degree} below actual degree {actual}")

    @property
    def n(self) -> int:
        return len(self.coordinates)

    def __call__(self, t: RationalLike) -> tuple[Fraction, ...]:
        t = as_rational(t)
        return tuple(c(t) for c in self.coordinates)

    def derivative(self, k: int = 1) -> PolynomialCurve:
        return PolynomialCurve(tuple(c.derivative(k) for c in self.coordinates))

    def squared_norm(self) -> UniPoly:
        """``|w(t)|^2`` as a polynomial in ``t``."""
        total = UniPoly()
        for c in self.coordinates:
            total = total + c * c
        return total


def curve_derivatives_at(
    curve: PolynomialCurve, t0: RationalLike, up_to: int
) -> list[list[Fraction]]:
    """``[[w_i^(1)(t0), ..., w_i^(up_to)(t0)] for each coordinate i]``."""
    t0 = as_rational(t0)
    return [[c.derivative(j)(t0) for j in range(1, up_to + 1)] for c in curve.coordinates]


def chebyshev_params(k: int, max_denominator: int = 10**6) -> list[Fraction]:
    """Rational stand-ins for the ``k`` Chebyshev points of the second kind, ascending.

    ``-cos(pi j / (k-1))`` is rounded to the nearest fraction with bounded
    denominator; the rational points ``0, +-1/2, +-1`` are kept exact.
    """
    if k < 1:
        raise ValueError("need at least one parameter")
    if k == 1:
        return [Fraction(0)]
    exact = {Fraction(0): Fraction(-1), Fraction(1, 3): Fraction(-1, 2), Fraction(1, 2): Fraction(0),
             Fraction(2, 3): Fraction(1, 2), Fraction(1): Fraction(1)}
    out = []
    for j in range(k):
        frac = Fraction(j, k - 1)
        if frac in exact:
            out.append(exact[frac])
        else:
            x = -math.cos(math.pi * j / (k - 1))
            out.append(Fraction(x).limit_denominator(max_denominator))
    return out


def _lagrange_basis(params: Sequence[Fraction], j: int) -> UniPoly:
    basis = UniPoly.constant(1)
    for m, tm in enumerate(params):
        if m != j:
            basis = basis * UniPoly([-tm / (params[j] - tm), 1 / (params[j] - tm)])
    return basis


def curve_through_points(
    points: Sequence[Sequence[RationalLike]],
    params: Sequence[RationalLike] | None = None,
) -> PolynomialCurve:
    """Per-coordinate Lagrange interpolant with ``w(params[j]) = points[j]``.

    Without ``params`` the Chebyshev points from :func:`chebyshev_params` are used.
    """
    if not points:
        raise ValueError("need at least one point")
    dims = {len(p) for p in points}
    if len(dims) != 1:
        raise ValueError("points have inconsistent dimensions")
    n = dims.pop()
    if params is None:
        ts = chebyshev_params(len(points))
    else:
        ts = [as_rational(t) for t in params]
        if len(ts) != len(points):
            raise ValueError(f"{len(points)} points but {len(ts)} parameters")
        if len(set(ts)) != len(ts):
            raise ValueError("interpolation parameters must be pairwise distinct")
    bases = [_lagrange_basis(ts, j) for j in range(len(ts))]
    coords = []
    for i in range(n):
        coord = UniPoly()
        for j, p in enumerate(points):
            coord = coord + bases[j] * as_rational(p[i])
        coords.append(coord)
    return PolynomialCurve(tuple(coords))


def markov_derivative_bound(s: int, l: int) -> int:
    """``s^(2l)``, a coarse bound for ``|w_i^(l)|`` on ``[-1, 1]`` when ``|w_i| <= 1``."""
    if s < 1:
        raise ValueError("degree s must be at least 1")
    if l < 0:
        raise ValueError("order l must be non-negative")
    return s ** (2 * l)


@dataclass(frozen=True)
class BallCheck:
    inside: bool
    worst_t: Fraction
    worst_norm_sq: Fraction
    critical_points: tuple[tuple[Fraction, Fraction], ...]

    @property
    def worst_norm(self) -> float:
        return math.sqrt(self.worst_norm_sq)

    def __bool__(self) -> bool:
        return self.inside


def in_unit_ball(curve: PolynomialCurve, grid_size: int = 65) -> BallCheck:
    """Decide exactly whether ``|w(t)| <= 1`` for all ``t`` in ``[-1, 1]``.

    The verdict comes from an exact sign test of ``1 - |w|^2``.  The reported
    worst point is the largest ``|w|^2`` over a uniform grid and the real
    critical points of ``|w|^2`` (isolated exactly, then refined).
    """
    if grid_size < 2:
        raise ValueError("grid_size must be at least 2")
    h = curve.squared_norm()
    candidates = {Fraction(-1) + Fraction(2 * k, grid_size - 1) for k in range(grid_size)}
    crit: list[tuple[Fraction, Fraction]] = []
    dh = h.derivative()
    if not dh.is_zero():
        for lo, hi in isolate_real_roots(dh, -1, 1):
            lo, hi = refine_root(dh, lo, hi, Fraction(1, 2**40))
            crit.append((lo, hi))
            candidates.add((lo + hi) / 2)
    worst_t, worst = Fraction(-1), h(-1)
    for t in sorted(candidates):
        v = h(t)
        if v >= worst:
            worst_t, worst = t, v
    inside = nonnegative_on(UniPoly.constant(1) - h, -1, 1)
    return BallCheck(inside, worst_t, worst, tuple(crit))


def vector_norm(v: Sequence[Number], norm: str = "euclidean") -> Number:
    if norm == "euclidean":
        return math.sqrt(sum(x * x for x in v))
    if norm == "max":
        return max((abs(x) for x in v), default=Fraction(0))
    raise ValueError(f"unknown norm {norm!r}; choose from {NORMS}")


@dataclass(frozen=True)
class SampledCurve:
    """A curve known only through derivative values at parameter nodes.

    ``values[k][i][m]`` is the ``m``-th derivative (``m = 0 .. order``) of
    coordinate ``i`` at ``nodes[k]``.
    """

    nodes: tuple[Number, ...]
    values: tuple[tuple[tuple[Number, ...], ...], ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "nodes", tuple(self.nodes))
        object.__setattr__(
            self, "values", tuple(tuple(tuple(row) for row in node) for node in self.values)
        )
        if not self.nodes:
            raise ValueError("a sampled curve needs at least one node")
        if any(a >= b for a, b in zip(self.nodes, self.nodes[1:])):
            raise ValueError("nodes must be strictly increasing")
        if len(self.values) != len(self.nodes):
            raise ValueError("one derivative table per node is required")
        shapes = {tuple(len(row) for row in node) for node in self.values}
        if len(shapes) != 1 or len(set(next(iter(shapes)))) != 1:
            raise ValueError("derivative table is ragged")

    @property
    def n(self) -> int:
        return len(self.values[0])

    @property
    def order(self) -> int:
        return len(self.values[0][0]) - 1

    @classmethod
    def sample(
        cls, curve: PolynomialCurve, nodes: Sequence[RationalLike], order: int
    ) -> SampledCurve:
        ts = [as_rational(t) for t in nodes]
        table = [
            [[c.derivative(m)(t) for m in range(order + 1)] for c in curve.coordinates]
            for t in ts
        ]
        return cls(tuple(ts), table)


def near_polynomial_deviation(
    sampled: SampledCurve, curve: PolynomialCurve, d: int, norm: str = "euclidean"
) -> Number:
    """``max`` over nodes and orders ``k <= d`` of ``|sampled^(k) - curve^(k)|``.

    Only the nodes are inspected, so the result is a lower estimate of the
    supremum over ``[-1, 1]``.
    """
    if d < 0:
        raise ValueError("d must be non-negative")
    if sampled.n != curve.n:
        raise ValueError(f"sampled curve has {sampled.n} coordinates, polynomial curve {curve.n}")
    if sampled.order < d:
        raise ValueError(f"derivative table stops at order {sampled.order}, need {d}")
    derivs = [curve.derivative(k) for k in range(d + 1)]
    worst: Number = Fraction(0)
    for t, table in zip(sampled.nodes, sampled.values):
        for k in range(d + 1):
            exact = derivs[k](t) if isinstance(t, Fraction) else _eval_float(derivs[k], t)
            diff = [table[i][k] - exact[i] for i in range(curve.n)]
            value = vector_norm(diff, norm)
            if value > worst:
                worst = value
    return worst


def _eval_float(curve: PolynomialCurve, t: float) -> tuple[float, ...]:
    out = []
    for c in curve.coordinates:
        acc = 0.0
        for coef in reversed(c.coeffs):
            acc = acc * t + float(coef)
        out.append(acc)
    return tuple(out)
