"""The expansion of ``g^(d+1)`` for ``g(t) = f(w(t))``.

``g^(d+1)(t) = sum_alpha d^alpha f(w(t)) * sum_beta c[alpha, beta] * prod_ij (w_i^(j))^beta_ij``

Coefficients are produced by differentiating the order-``k`` expansion once
more, term by term, starting from ``g' = sum_i d_i f * w_i'``:

* chain move: ``d^alpha f`` becomes ``d^(alpha + e_i) f * w_i'``, so ``alpha_i``
  and ``beta[i][0]`` both grow by one, coefficient unchanged;
* product move: one factor ``(w_i^(j))^b`` becomes ``b (w_i^(j))^(b-1) w_i^(j+1)``,
  multiplying the coefficient by ``b``.

Like ``(alpha, beta)`` pairs are merged after every step.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

from .exactpoly import MVPoly, RationalLike, as_rational, partial_derivative
from .multiindex import (
    BetaIndex,
    MultiIndex,
    eta,
    flatten,
    max_order,
    multi_indices,
    order,
)


class MissingTensorError(KeyError):
    """A derivative value the expansion needs was not supplied."""


@dataclass(frozen=True)
class ChainRuleTerm:
    alpha: MultiIndex
    beta: BetaIndex
    coeff: int

    @property
    def max_curve_order(self) -> int:
        return max_order(self.beta)

    def format(self) -> str:
        factors = [f"{self.coeff}", "f^(" + ",".join(map(str, self.alpha)) + ")"]
        for i, row in enumerate(self.beta, start=1):
            for j, b in enumerate(row, start=1):
                if b:
                    factors.append(f"(w_{i}^({j}))^{b}")
        return " * ".join(factors)


def _sort_key(term: ChainRuleTerm):
    return (-order(term.alpha), tuple(-a for a in term.alpha), flatten(term.beta))


@dataclass(frozen=True)
class ChainRuleExpansion:
    """All terms of ``g^(d+1)`` over ``n`` variables, canonically ordered.

    ``degree_cap`` is set on truncated expansions: only monomials whose
    curve-derivative orders are all ``<= degree_cap`` are kept.
    """

    n: int
    d: int
    terms: tuple[ChainRuleTerm, ...]
    degree_cap: int | None = None
    _index: Mapping = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        index = {(t.alpha, t.beta): t for t in self.terms}
        if len(index) != len(self.terms):
            raise ValueError("duplicate (alpha, beta) pair in expansion")
        object.__setattr__(self, "_index", index)

    @property
    def order(self) -> int:
        return self.d + 1

    def __len__(self) -> int:
        return len(self.terms)

    def __iter__(self):
        return iter(self.terms)

    def coefficient(self, alpha: Sequence[int], beta: BetaIndex) -> int:
        term = self._index.get((tuple(alpha), tuple(tuple(r) for r in beta)))
        return term.coeff if term else 0

    def alphas(self) -> list[MultiIndex]:
        seen = []
        for t in self.terms:
            if not seen or seen[-1] != t.alpha:
                seen.append(t.alpha)
        return seen

    def by_alpha(self) -> dict[MultiIndex, list[ChainRuleTerm]]:
        groups: dict[MultiIndex, list[ChainRuleTerm]] = {}
        for t in self.terms:
            groups.setdefault(t.alpha, []).append(t)
        return groups

    def pairs(self) -> set[tuple[MultiIndex, BetaIndex]]:
        return set(self._index)

    def dump(self) -> str:
        """One term per line, canonical order; stable across runs."""
        return "".join(t.format() + "\n" for t in self.terms)


def _trim(beta: list[list[int]], width: int) -> BetaIndex:
    rows = []
    for row in beta:
        if any(row[width:]):
            raise AssertionError("curve derivative beyond N_alpha survived the recurrence")
        rows.append(tuple(row[:width]))
    return tuple(rows)


@lru_cache(maxsize=None)
def expand(n: int, d: int) -> ChainRuleExpansion:
    """Build the order ``d+1`` expansion by the differentiation recurrence."""
    if n < 1:
        raise ValueError("dimension must be at least 1")
    if d < 0:
        raise ValueError("d must be non-negative")
    width = d + 1  # working grid width; trimmed to N_alpha at the end

    def key(alpha, beta):
        return tuple(alpha), tuple(tuple(r) for r in beta)

    current: dict = {}
    for i in range(n):
        alpha = [0] * n
        alpha[i] = 1
        beta = [[0] * width for _ in range(n)]
        beta[i][0] = 1
        current[key(alpha, beta)] = 1

    for _ in range(d):
        nxt: dict = {}
        for (alpha, beta), c in current.items():
            for i in range(n):
                a2 = list(alpha)
                a2[i] += 1
                b2 = [list(r) for r in beta]
                b2[i][0] += 1
                k = key(a2, b2)
                nxt[k] = nxt.get(k, 0) + c
            for i, row in enumerate(beta):
                for j, b in enumerate(row):
                    if not b:
                        continue
                    b2 = [list(r) for r in beta]
                    b2[i][j] -= 1
                    b2[i][j + 1] += 1
                    k = key(alpha, b2)
                    nxt[k] = nxt.get(k, 0) + c * b
        current = {k: c for k, c in nxt.items() if c}

    terms = [
        ChainRuleTerm(alpha, _trim([list(r) for r in beta], d + 2 - order(alpha)), c)
        for (alpha, beta), c in current.items()
    ]
    terms.sort(key=_sort_key)
    return ChainRuleExpansion(n, d, tuple(terms))


def coefficient_sum(e: ChainRuleExpansion) -> int:
    return sum(t.coeff for t in e.terms)


def coefficient_bound(n: int, d: int) -> int:
    """``(n+1)^(d+1) * (d+1)^((d+1)(n+2))``."""
    return (n + 1) ** (d + 1) * (d + 1) ** ((d + 1) * (n + 2))


@dataclass(frozen=True)
class DerivativeTensors:
    """Point values feeding the expansion.

    ``f_partials[alpha]`` is ``d^alpha f`` at ``w(t0)``; ``curve[i][j-1]`` is
    ``w_i^(j)(t0)``.  Values may come from anywhere (a black-box smooth ``f``
    included); agreement with ``g^(d+1)`` is only promised when they are
    mutually consistent.
    """

    f_partials: Mapping[MultiIndex, Fraction]
    curve: Sequence[Sequence[Fraction]]

    def partial(self, alpha: MultiIndex) -> Fraction:
        try:
            return self.f_partials[alpha]
        except KeyError:
            raise MissingTensorError(f"missing partial derivative for alpha={alpha}") from None

    def curve_derivative(self, i: int, j: int) -> Fraction:
        if i >= len(self.curve) or not 1 <= j <= len(self.curve[i]):
            raise MissingTensorError(f"missing curve derivative w_{i + 1}^({j})")
        return self.curve[i][j - 1]

    @classmethod
    def from_polynomials(
        cls, f: MVPoly, curve, t0: RationalLike, d: int
    ) -> DerivativeTensors:
        """Exact tensors for a polynomial ``f`` and polynomial curve at ``t0``."""
        coords = list(getattr(curve, "coordinates", curve))
        if len(coords) != f.n:
            raise ValueError(f"curve has {len(coords)} coordinates, f has {f.n} variables")
        t0 = as_rational(t0)
        point = [c(t0) for c in coords]
        partials = {
            alpha: partial_derivative(f, alpha)(point)
            for k in range(1, d + 2)
            for alpha in multi_indices(f.n, k)
        }
        derivs = [[c.derivative(j)(t0) for j in range(1, d + 2)] for c in coords]
        return cls(partials, derivs)


def evaluate(e: ChainRuleExpansion, tensors: DerivativeTensors) -> Fraction:
    """Exact value of the expansion at the supplied derivative values."""
    total = Fraction(0)
    for t in e.terms:
        mono = Fraction(t.coeff)
        for i, row in enumerate(t.beta):
            for j, b in enumerate(row, start=1):
                if b:
                    mono *= tensors.curve_derivative(i, j) ** b
        total += tensors.partial(t.alpha) * mono
    return total


def truncate_for_degree(e: ChainRuleExpansion, s: int) -> ChainRuleExpansion:
    """Drop every term whose monomial uses a curve derivative of order ``> s``.

    Those monomials vanish on curves of degree at most ``s``.  The surviving
    ``|alpha|`` are checked against ``eta(d, s)``.
    """
    if s < 1:
        raise ValueError("curve degree s must be at least 1")
    kept = tuple(t for t in e.terms if t.max_curve_order <= s)
    lowest = eta(e.d, s)
    bad = [t for t in kept if order(t.alpha) < lowest]
    if bad:
        raise AssertionError(
            f"term {bad[0].format()} survives below |alpha| = eta({e.d},{s}) = {lowest}"
        )
    cap = s if e.degree_cap is None else min(s, e.degree_cap)
    return ChainRuleExpansion(e.n, e.d, kept, degree_cap=cap)


def min_surviving_order(e: ChainRuleExpansion, s: int) -> int:
    """Smallest ``|alpha|`` left after :func:`truncate_for_degree`."""
    return min(order(t.alpha) for t in truncate_for_degree(e, s).terms)


def expansion_alphas(n: int, d: int) -> Iterable[MultiIndex]:
    """Every ``alpha`` with ``1 <= |alpha| <= d+1``."""
    for k in range(1, d + 2):
        yield from multi_indices(n, k)
