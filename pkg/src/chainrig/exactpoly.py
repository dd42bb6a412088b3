"""Exact rational polynomials in one and several variables.

Coefficients are :class:`fractions.Fraction` throughout; nothing in this
module touches floating point.  Besides the arithmetic this module carries the
independent derivative oracle for compositions ``f(w(t))``: compose
symbolically first, then differentiate the univariate result.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Sequence, Union

Rational = Fraction
RationalLike = Union[Fraction, int, str]

#: Degree of the zero polynomial.  Keeps ``deg(p*q) = deg p + deg q`` total.
ZERO_DEGREE = -math.inf


def as_rational(value: RationalLike) -> Fraction:
    """Coerce ints, Fractions and strings like ``"3/4"`` to a Fraction.

    Floats are rejected so that inexact values cannot leak into exact code.
    """
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"expected an exact rational, got {type(value).__name__}")


def format_rational(q: Fraction) -> str:
    """Render ``q`` as ``p/q`` (denominator always present)."""
    return f"{q.numerator}/{q.denominator}"


def falling_factorial(m: int, k: int) -> int:
    out = 1
    for i in range(k):
        out *= m - i
    return out


class UniPoly:
    """Immutable univariate polynomial in ``t`` with rational coefficients.

    ``coeffs[i]`` is the coefficient of ``t**i``.
    """

    __slots__ = ("_coeffs", "_hash")

    def __init__(self, coeffs: Iterable[RationalLike] = ()):
        cs = [as_rational(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self._coeffs: tuple[Fraction, ...] = tuple(cs)
        self._hash: int | None = None

    @classmethod
    def constant(cls, c: RationalLike) -> UniPoly:
        return cls([c])

    @classmethod
    def monomial(cls, k: int, c: RationalLike = 1) -> UniPoly:
        return cls([0] * k + [c])

    @property
    def coeffs(self) -> tuple[Fraction, ...]:
        return self._coeffs

    @property
    def degree(self) -> float | int:
        return len(self._coeffs) - 1 if self._coeffs else ZERO_DEGREE

    def is_zero(self) -> bool:
        return not self._coeffs

    def leading_coefficient(self) -> Fraction:
        return self._coeffs[-1] if self._coeffs else Fraction(0)

    def __call__(self, t: RationalLike) -> Fraction:
        t = as_rational(t)
        acc = Fraction(0)
        for c in reversed(self._coeffs):
            acc = acc * t + c
        return acc

    def derivative(self, k: int = 1) -> UniPoly:
        if k < 0:
            raise ValueError("derivative order must be non-negative")
        if k == 0:
            return self
        return UniPoly(
            c * falling_factorial(i, k) for i, c in enumerate(self._coeffs) if i >= k
        )

    # arithmetic -------------------------------------------------------------

    def _coerce(self, other) -> UniPoly | None:
        if isinstance(other, UniPoly):
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return UniPoly.constant(other)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        a, b = self._coeffs, other._coeffs
        if len(a) < len(b):
            a, b = b, a
        return UniPoly([x + (b[i] if i < len(b) else 0) for i, x in enumerate(a)])

    __radd__ = __add__

    def __neg__(self) -> UniPoly:
        return UniPoly(-c for c in self._coeffs)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other - self

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if self.is_zero() or other.is_zero():
            return UniPoly()
        out = [Fraction(0)] * (len(self._coeffs) + len(other._coeffs) - 1)
        for i, a in enumerate(self._coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other._coeffs):
                out[i + j] += a * b
        return UniPoly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> UniPoly:
        if k < 0:
            raise ValueError("negative powers are not polynomials")
        result, base = UniPoly.constant(1), self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def divmod(self, other: UniPoly) -> tuple[UniPoly, UniPoly]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self._coeffs)
        dq = len(other._coeffs) - 1
        lc = other._coeffs[-1]
        quo = [Fraction(0)] * max(len(rem) - dq, 0)
        for k in range(len(rem) - 1, dq - 1, -1):
            c = rem[k] / lc
            if c == 0:
                continue
            quo[k - dq] = c
            for j, b in enumerate(other._coeffs):
                rem[k - dq + j] -= c * b
        return UniPoly(quo), UniPoly(rem[:dq])

    def __mod__(self, other: UniPoly) -> UniPoly:
        return self.divmod(other)[1]

    def __floordiv__(self, other: UniPoly) -> UniPoly:
        return self.divmod(other)[0]

    def monic(self) -> UniPoly:
        if self.is_zero():
            return self
        lc = self._coeffs[-1]
        return UniPoly(c / lc for c in self._coeffs)

    def __eq__(self, other) -> bool:
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self._coeffs == other._coeffs

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(("UniPoly", self._coeffs))
        return self._hash

    def __repr__(self) -> str:
        return f"UniPoly({[format_rational(c) for c in self._coeffs]})"

    def to_text(self, var: str = "t") -> str:
        if self.is_zero():
            return "0"
        parts = [
            f"{format_rational(c)} * {var}^{i}" for i, c in enumerate(self._coeffs) if c
        ]
        return " + ".join(parts)


def poly_gcd(a: UniPoly, b: UniPoly) -> UniPoly:
    """Monic gcd by the Euclidean algorithm over Q."""
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


def squarefree_part(p: UniPoly) -> UniPoly:
    if p.degree <= 0:
        return p.monic()
    return (p // poly_gcd(p, p.derivative())).monic()


# real roots -------------------------------------------------------------------


def sturm_sequence(p: UniPoly) -> list[UniPoly]:
    """Sturm chain of the square-free part of ``p``."""
    p = squarefree_part(p)
    seq = [p, p.derivative()]
    while not seq[-1].is_zero():
        seq.append(-(seq[-2] % seq[-1]))
    return seq[:-1]


def _sign_variations(values: Iterable[Fraction]) -> int:
    signs = [v > 0 for v in values if v != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def count_real_roots(p: UniPoly, a: RationalLike, b: RationalLike) -> int:
    """Number of distinct real roots of ``p`` in the half-open interval ``(a, b]``."""
    a, b = as_rational(a), as_rational(b)
    if p.is_zero():
        raise ValueError("the zero polynomial has infinitely many roots")
    if a >= b:
        return 0
    seq = sturm_sequence(p)
    return _sign_variations(q(a) for q in seq) - _sign_variations(q(b) for q in seq)


def isolate_real_roots(
    p: UniPoly, a: RationalLike = -1, b: RationalLike = 1
) -> list[tuple[Fraction, Fraction]]:
    """Isolate every distinct real root of ``p`` in ``[a, b]``.

    Returns sorted intervals ``(lo, hi)``.  ``lo == hi`` means an exact
    rational root.  Otherwise ``lo < hi``, neither endpoint is a root, and the
    open interval holds exactly one root.
    """
    a, b = as_rational(a), as_rational(b)
    if p.is_zero():
        raise ValueError("the zero polynomial has infinitely many roots")
    sf = squarefree_part(p)
    seq = sturm_sequence(sf)

    def variations(x: Fraction) -> int:
        return _sign_variations(q(x) for q in seq)

    out: list[tuple[Fraction, Fraction]] = []
    if sf(a) == 0:
        out.append((a, a))

    # each stack entry is a half-open (lo, hi] with its root count
    stack = [(a, b, variations(a) - variations(b))]
    while stack:
        lo, hi, count = stack.pop()
        if count == 0:
            continue
        if count == 1 and sf(hi) == 0:
            out.append((hi, hi))
            continue
        if count == 1 and sf(lo) != 0:
            out.append((lo, hi))
            continue
        mid = (lo + hi) / 2
        left = variations(lo) - variations(mid)
        stack.append((lo, mid, left))
        stack.append((mid, hi, count - left))
    return sorted(out)


def refine_root(
    p: UniPoly, lo: Fraction, hi: Fraction, width: Fraction
) -> tuple[Fraction, Fraction]:
    """Shrink an isolating interval from :func:`isolate_real_roots` below ``width``."""
    if lo == hi:
        return lo, hi
    sf = squarefree_part(p)
    while hi - lo > width:
        mid = (lo + hi) / 2
        vm = sf(mid)
        if vm == 0:
            return mid, mid
        if (sf(lo) > 0) != (vm > 0):
            hi = mid
        else:
            lo = mid
    return lo, hi


def nonnegative_on(q: UniPoly, a: RationalLike = -1, b: RationalLike = 1) -> bool:
    """Exact test that ``q(t) >= 0`` for every ``t`` in ``[a, b]``.

    The sign of ``q`` is constant between consecutive roots, so it suffices to
    look at ``a``, ``b`` and the non-root endpoints of the isolating intervals.
    """
    a, b = as_rational(a), as_rational(b)
    if q.is_zero():
        return True
    probes = {a, b}
    for lo, hi in isolate_real_roots(q, a, b):
        probes.update((lo, hi))
    return all(q(x) >= 0 for x in probes)


# multivariate -----------------------------------------------------------------

MultiIndexKey = tuple  # tuple[int, ...]


class MVPoly:
    """Immutable sparse polynomial in ``x1..xn`` with rational coefficients.

    ``terms`` maps exponent tuples of length ``n`` to nonzero coefficients.
    """

    __slots__ = ("n", "_terms", "_hash")

    def __init__(self, terms: Mapping[Sequence[int], RationalLike], n: int):
        if n < 1:
            raise ValueError("an MVPoly needs at least one variable")
        clean: dict[tuple[int, ...], Fraction] = {}
        for exps, c in terms.items():
            key = tuple(int(e) for e in exps)
            if len(key) != n:
                raise ValueError(f"exponent {key} does not have length {n}")
            if any(e < 0 for e in key):
                raise ValueError(f"negative exponent in {key}")
            c = as_rational(c)
            if c:
                clean[key] = clean.get(key, Fraction(0)) + c
        self.n = n
        self._terms = {k: v for k, v in sorted(clean.items()) if v}
        self._hash: int | None = None

    @classmethod
    def constant(cls, c: RationalLike, n: int) -> MVPoly:
        return cls({(0,) * n: c}, n)

    @classmethod
    def variable(cls, i: int, n: int) -> MVPoly:
        """The coordinate ``x_{i+1}`` (``i`` is zero-based)."""
        exps = [0] * n
        exps[i] = 1
        return cls({tuple(exps): 1}, n)

    @property
    def terms(self) -> Mapping[tuple[int, ...], Fraction]:
        return dict(self._terms)

    def items(self) -> Iterator[tuple[tuple[int, ...], Fraction]]:
        return iter(self._terms.items())

    def is_zero(self) -> bool:
        return not self._terms

    @property
    def degree(self) -> float | int:
        if not self._terms:
            return ZERO_DEGREE
        return max(sum(k) for k in self._terms)

    def _check_same(self, other: MVPoly) -> None:
        if other.n != self.n:
            raise ValueError(f"dimension mismatch: {self.n} vs {other.n}")

    def _coerce(self, other) -> MVPoly | None:
        if isinstance(other, MVPoly):
            self._check_same(other)
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return MVPoly.constant(other, self.n)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        out = dict(self._terms)
        for k, c in other._terms.items():
            out[k] = out.get(k, Fraction(0)) + c
        return MVPoly(out, self.n)

    __radd__ = __add__

    def __neg__(self) -> MVPoly:
        return MVPoly({k: -c for k, c in self._terms.items()}, self.n)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other - self

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        out: dict[tuple[int, ...], Fraction] = {}
        for ka, ca in self._terms.items():
            for kb, cb in other._terms.items():
                key = tuple(x + y for x, y in zip(ka, kb))
                out[key] = out.get(key, Fraction(0)) + ca * cb
        return MVPoly(out, self.n)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> MVPoly:
        if k < 0:
            raise ValueError("negative powers are not polynomials")
        result = MVPoly.constant(1, self.n)
        for _ in range(k):
            result = result * self
        return result

    def __call__(self, point: Sequence[RationalLike]) -> Fraction:
        if len(point) != self.n:
            raise ValueError(f"point has {len(point)} coordinates, expected {self.n}")
        xs = [as_rational(x) for x in point]
        total = Fraction(0)
        for exps, c in self._terms.items():
            term = c
            for x, e in zip(xs, exps):
                if e:
                    term *= x**e
            total += term
        return total

    def __eq__(self, other) -> bool:
        if isinstance(other, MVPoly):
            return self.n == other.n and self._terms == other._terms
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self == MVPoly.constant(other, self.n)
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(("MVPoly", self.n, tuple(self._terms.items())))
        return self._hash

    def __repr__(self) -> str:
        return f"MVPoly({self.to_text()!r}, n={self.n})"

    def to_text(self) -> str:
        """Term list ``p/q * x1^e1 ... xn^en`` joined by ``" + "``."""
        if not self._terms:
            return "0/1 * " + " ".join(f"x{i + 1}^0" for i in range(self.n))
        return " + ".join(
            format_rational(c) + " * " + " ".join(f"x{i + 1}^{e}" for i, e in enumerate(k))
            for k, c in self._terms.items()
        )


def differentiate_uni(p: UniPoly, k: int) -> UniPoly:
    """``d^k p / dt^k``."""
    return p.derivative(k)


def partial_derivative(f: MVPoly, alpha: Sequence[int]) -> MVPoly:
    """Mixed partial ``d^alpha f``."""
    alpha = tuple(alpha)
    if len(alpha) != f.n:
        raise ValueError(f"multi-index {alpha} does not match {f.n} variables")
    if any(a < 0 for a in alpha):
        raise ValueError("multi-index entries must be non-negative")
    out: dict[tuple[int, ...], Fraction] = {}
    for exps, c in f.items():
        if any(e < a for e, a in zip(exps, alpha)):
            continue
        scale = 1
        for e, a in zip(exps, alpha):
            scale *= falling_factorial(e, a)
        out[tuple(e - a for e, a in zip(exps, alpha))] = c * scale
    return MVPoly(out, f.n)


def _coordinates(curve) -> Sequence[UniPoly]:
    return getattr(curve, "coordinates", curve)


def compose_with_curve(f: MVPoly, curve) -> UniPoly:
    """Substitute the coordinate polynomials of ``curve`` into ``f``.

    ``curve`` is a :class:`chainrig.curves.PolynomialCurve` or any sequence of
    :class:`UniPoly`.
    """
    coords = list(_coordinates(curve))
    if len(coords) != f.n:
        raise ValueError(f"curve has {len(coords)} coordinates, polynomial has {f.n} variables")
    powers: list[dict[int, UniPoly]] = [{0: UniPoly.constant(1)} for _ in coords]

    def power(i: int, e: int) -> UniPoly:
        cache = powers[i]
        if e not in cache:
            cache[e] = power(i, e - 1) * coords[i]
        return cache[e]

    total = UniPoly()
    for exps, c in f.items():
        term = UniPoly.constant(c)
        for i, e in enumerate(exps):
            if e:
                term = term * power(i, e)
        total = total + term
    return total


def oracle_derivative(f: MVPoly, curve, k: int, t0: RationalLike) -> Fraction:
    """Exact ``g^(k)(t0)`` for ``g = f(curve(t))``, composing before differentiating."""
    return compose_with_curve(f, curve).derivative(k)(as_rational(t0))


# text form --------------------------------------------------------------------

_TOKEN = re.compile(
    r"(?P<sign>[+-])"
    r"|(?P<num>\d+(?:/\d+)?)"
    r"|(?P<var>x(?P<idx>\d+)(?:\^(?P<exp>\d+))?)"
    r"|(?P<mul>\*)"
    r"|(?P<ws>\s+)"
)


class PolynomialParseError(ValueError):
    pass


def parse_mvpoly(text: str | Sequence[str], n: int) -> MVPoly:
    """Parse the term-list text form, e.g. ``"3/2 * x1^2 x2^1 + -1/1 * x1^0 x2^0"``.

    Shorthand such as ``"x1^2 - 3/2*x1*x2"`` is accepted too.  A sequence of
    strings is read as a list of terms to be summed.
    """
    if not isinstance(text, str):
        total = MVPoly({}, n)
        for term in text:
            total = total + parse_mvpoly(term, n)
        return total
    terms: dict[tuple[int, ...], Fraction] = {}
    sign, coeff, exps, has_factor = 1, Fraction(1), [0] * n, False

    def flush() -> None:
        key = tuple(exps)
        terms[key] = terms.get(key, Fraction(0)) + sign * coeff

    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise PolynomialParseError(f"unexpected character {text[pos]!r} at {pos} in {text!r}")
        pos = m.end()
        kind = m.lastgroup if m.lastgroup not in ("idx", "exp") else "var"
        if kind in ("ws", "mul"):
            continue
        if kind == "sign":
            if has_factor:
                flush()
                sign, coeff, exps, has_factor = 1, Fraction(1), [0] * n, False
            if m.group("sign") == "-":
                sign = -sign
        elif kind == "num":
            coeff *= Fraction(m.group("num"))
            has_factor = True
        else:
            idx = int(m.group("idx"))
            if not 1 <= idx <= n:
                raise PolynomialParseError(f"variable x{idx} outside x1..x{n}")
            exps[idx - 1] += int(m.group("exp") or 1)
            has_factor = True
    if not has_factor:
        if terms:
            raise PolynomialParseError(f"dangling sign in {text!r}")
        raise PolynomialParseError("empty polynomial text")
    flush()
    return MVPoly(terms, n)
