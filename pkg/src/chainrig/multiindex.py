"""Multi-indices for the high-order chain rule.

Notation used across the package:

* ``alpha`` -- tuple of per-variable differentiation orders of ``f``.
* ``beta`` -- an ``n x N`` grid (tuple of rows) of exponents.  ``beta[i][j-1]``
  is the power of ``w_i^(j)``, the ``j``-th derivative of the ``i``-th curve
  coordinate, in a monomial of curve derivatives.
* ``N_alpha = d + 2 - |alpha|`` is the largest curve-derivative order that can
  appear next to ``d^alpha f`` in ``g^(d+1)``.

A grid ``beta`` is *compatible* with ``alpha`` at order ``d+1`` when

1. a row is zero whenever the matching ``alpha_i`` is zero,
2. row ``i`` sums to ``alpha_i``,
3. the weight ``sigma(beta) = sum_ij j * beta[i][j-1]`` equals ``d+1``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Sequence

MultiIndex = tuple  # tuple[int, ...]
BetaIndex = tuple  # tuple[tuple[int, ...], ...]


def order(alpha: Sequence[int]) -> int:
    """``|alpha|``."""
    return sum(alpha)


def weight(beta: BetaIndex) -> int:
    """``sigma(beta)``: every exponent weighted by its derivative order."""
    return sum(j * b for row in beta for j, b in enumerate(row, start=1))


def beta_degree(beta: BetaIndex) -> int:
    """``|beta|``: the number of curve-derivative factors in the monomial."""
    return sum(sum(row) for row in beta)


def max_order(beta: BetaIndex) -> int:
    """Highest curve-derivative order present in the monomial (0 if empty)."""
    return max(
        (j for row in beta for j, b in enumerate(row, start=1) if b),
        default=0,
    )


def flatten(beta: BetaIndex) -> tuple[int, ...]:
    return tuple(b for row in beta for b in row)


def n_alpha(alpha: Sequence[int], d: int) -> int:
    return d + 2 - order(alpha)


@dataclass(frozen=True)
class SigmaContext:
    """The ambient data ``(n, d, alpha)`` that a compatible grid refers to."""

    n: int
    d: int
    alpha: MultiIndex

    def __post_init__(self) -> None:
        object.__setattr__(self, "alpha", tuple(int(a) for a in self.alpha))
        if self.n < 1:
            raise ValueError("dimension must be at least 1")
        if self.d < 0:
            raise ValueError("d must be non-negative")
        if len(self.alpha) != self.n:
            raise ValueError(f"alpha {self.alpha} does not have length {self.n}")
        if any(a < 0 for a in self.alpha):
            raise ValueError("alpha entries must be non-negative")
        if not 1 <= order(self.alpha) <= self.d + 1:
            raise ValueError(f"need 1 <= |alpha| <= {self.d + 1}, got {order(self.alpha)}")

    @property
    def n_alpha(self) -> int:
        return n_alpha(self.alpha, self.d)


def compatibility_violations(beta: BetaIndex, ctx: SigmaContext) -> list[str]:
    """Human-readable list of the compatibility conditions ``beta`` breaks.

    Shape problems (wrong row count or row width) are reported as well.
    """
    problems = []
    if len(beta) != ctx.n:
        problems.append(f"grid has {len(beta)} rows, expected {ctx.n}")
        return problems
    for i, row in enumerate(beta):
        if len(row) != ctx.n_alpha:
            problems.append(f"row {i} has width {len(row)}, expected {ctx.n_alpha}")
        if any(b < 0 for b in row):
            problems.append(f"row {i} has a negative exponent")
        if ctx.alpha[i] == 0 and any(row):
            problems.append(f"condition 1: row {i} nonzero while alpha_{i} = 0")
        if sum(row) != ctx.alpha[i]:
            problems.append(f"condition 2: row {i} sums to {sum(row)}, alpha_{i} = {ctx.alpha[i]}")
    if weight(beta) != ctx.d + 1:
        problems.append(f"condition 3: weight {weight(beta)} != {ctx.d + 1}")
    return problems


def is_compatible(beta: BetaIndex, ctx: SigmaContext) -> bool:
    return not compatibility_violations(beta, ctx)


def weak_compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    """All tuples of ``parts`` non-negative ints summing to ``total``, lexicographic."""
    if parts == 0:
        if total == 0:
            yield ()
        return
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in weak_compositions(total - first, parts - 1):
            yield (first,) + rest


def multi_indices(n: int, k: int) -> Iterator[MultiIndex]:
    """All multi-indices over ``n`` variables with ``|alpha| = k``, lexicographic."""
    return weak_compositions(k, n)


def _row_weight(row: Sequence[int]) -> int:
    return sum(j * b for j, b in enumerate(row, start=1))


@lru_cache(maxsize=None)
def _rows_by_weight(total: int, width: int) -> dict[int, tuple[tuple[int, ...], ...]]:
    rows: dict[int, list[tuple[int, ...]]] = {}
    for row in weak_compositions(total, width):
        rows.setdefault(_row_weight(row), []).append(row)
    return {w: tuple(rs) for w, rs in rows.items()}


def generate_sigma(ctx: SigmaContext) -> tuple[BetaIndex, ...]:
    """Every grid compatible with ``ctx.alpha`` at order ``ctx.d + 1``.

    Rows are enumerated independently as weak compositions of ``alpha_i``
    (this settles conditions 1 and 2); the rows are then combined under the
    shared weight budget, pruning with the per-row weight range
    ``[alpha_i, alpha_i * N_alpha]``.  Output is sorted by the flattened grid.
    """
    width = ctx.n_alpha
    target = ctx.d + 1
    tables = [_rows_by_weight(a, width) for a in ctx.alpha]
    lo_rest = [0] * (ctx.n + 1)
    hi_rest = [0] * (ctx.n + 1)
    for i in range(ctx.n - 1, -1, -1):
        lo_rest[i] = lo_rest[i + 1] + ctx.alpha[i]
        hi_rest[i] = hi_rest[i + 1] + ctx.alpha[i] * width

    out: list[BetaIndex] = []

    def extend(i: int, remaining: int, prefix: tuple) -> None:
        if i == ctx.n:
            if remaining == 0:
                out.append(prefix)
            return
        for w, rows in tables[i].items():
            rest = remaining - w
            if lo_rest[i + 1] <= rest <= hi_rest[i + 1]:
                for row in rows:
                    extend(i + 1, rest, prefix + (row,))

    extend(0, target, ())
    out.sort(key=flatten)
    return tuple(out)


def kappa(alpha_norm: int, d: int) -> int:
    """``ceil((d+1) / |alpha|)``: the lowest top curve-derivative order forced next to ``d^alpha f``."""
    if alpha_norm < 1:
        raise ValueError("|alpha| must be at least 1")
    if alpha_norm > d + 1:
        raise ValueError(f"|alpha| = {alpha_norm} exceeds d+1 = {d + 1}")
    return -(-(d + 1) // alpha_norm)


def eta(d: int, s: int) -> int:
    """``floor((d+1)/(s+1)) + 1``: lowest ``|alpha|`` surviving a degree-``s`` curve."""
    if d < 0:
        raise ValueError("d must be non-negative")
    if s < 1:
        raise ValueError("curve degree s must be at least 1")
    return (d + 1) // (s + 1) + 1
