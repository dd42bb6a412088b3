"""JSON input files for polynomials, curves and point sets.

Rationals are written as strings ``"p/q"`` (plain integers are accepted).

Polynomial::

    {"nvars": 2, "terms": ["1/1 * x1^2 x2^0", "-3/2 * x1^1 x2^1"]}

``terms`` may also be a single string such as ``"x1^2 - 3/2*x1*x2"``.

Curve (coefficients in ascending powers of ``t``)::

    {"dimension": 2, "degree": 2, "coordinates": [["0", "1"], ["0", "0", "1"]]}

Points (``params`` optional)::

    {"dimension": 2, "points": [["-1", "1"], ["0", "0"]], "params": ["-1", "0"]}
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path
from typing import Any, Sequence

from .curves import PolynomialCurve
from .exactpoly import MVPoly, UniPoly, format_rational, parse_mvpoly


class FormatError(ValueError):
    pass


def _read(path: str | Path) -> dict[str, Any]:
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: not valid JSON ({exc})") from None
    if not isinstance(data, dict):
        raise FormatError(f"{path}: top level must be an object")
    return data


def _rational(value: Any, where: str) -> Fraction:
    if isinstance(value, bool) or not isinstance(value, (int, str)):
        raise FormatError(f"{where}: expected a rational string like '3/4', got {value!r}")
    try:
        return Fraction(value) if isinstance(value, int) else Fraction(value.strip())
    except (ValueError, ZeroDivisionError):
        raise FormatError(f"{where}: cannot parse {value!r} as a rational") from None


def _int(data: dict, key: str, where: str) -> int:
    value = data.get(key)
    if isinstance(value, bool) or not isinstance(value, int):
        raise FormatError(f"{where}: '{key}' must be an integer")
    return value


def polynomial_from_dict(data: dict[str, Any], where: str = "polynomial") -> MVPoly:
    n = _int(data, "nvars", where)
    if n < 1:
        raise FormatError(f"{where}: nvars must be at least 1")
    terms = data.get("terms")
    if not isinstance(terms, (str, list)) or (
        isinstance(terms, list) and not all(isinstance(t, str) for t in terms)
    ):
        raise FormatError(f"{where}: 'terms' must be a string or a list of strings")
    try:
        return parse_mvpoly(terms, n)
    except ValueError as exc:
        raise FormatError(f"{where}: {exc}") from None


def curve_from_dict(data: dict[str, Any], where: str = "curve") -> PolynomialCurve:
    n = _int(data, "dimension", where)
    coords = data.get("coordinates")
    if not isinstance(coords, list) or len(coords) != n:
        raise FormatError(f"{where}: 'coordinates' must list {n} coefficient lists")
    polys = []
    for i, cs in enumerate(coords):
        if not isinstance(cs, list):
            raise FormatError(f"{where}: coordinate {i + 1} must be a list of coefficients")
        polys.append(UniPoly(_rational(c, f"{where}: coordinate {i + 1}") for c in cs))
    degree = data.get("degree")
    if degree is not None and (isinstance(degree, bool) or not isinstance(degree, int)):
        raise FormatError(f"{where}: 'degree' must be an integer")
    try:
        return PolynomialCurve(tuple(polys), degree)
    except ValueError as exc:
        raise FormatError(f"{where}: {exc}") from None


def points_from_dict(
    data: dict[str, Any], where: str = "points"
) -> tuple[list[list[Fraction]], list[Fraction] | None]:
    n = _int(data, "dimension", where)
    raw = data.get("points")
    if not isinstance(raw, list) or not raw:
        raise FormatError(f"{where}: 'points' must be a non-empty list")
    points = []
    for k, p in enumerate(raw):
        if not isinstance(p, list) or len(p) != n:
            raise FormatError(f"{where}: point {k} must have {n} coordinates")
        points.append([_rational(x, f"{where}: point {k}") for x in p])
    params = data.get("params")
    if params is not None:
        if not isinstance(params, list) or len(params) != len(points):
            raise FormatError(f"{where}: 'params' must have one entry per point")
        params = [_rational(t, f"{where}: params") for t in params]
    return points, params


def load_polynomial(path: str | Path) -> MVPoly:
    return polynomial_from_dict(_read(path), str(path))


def load_curve(path: str | Path) -> PolynomialCurve:
    return curve_from_dict(_read(path), str(path))


def load_points(path: str | Path):
    return points_from_dict(_read(path), str(path))


def polynomial_to_dict(f: MVPoly) -> dict[str, Any]:
    terms = [] if f.is_zero() else f.to_text().split(" + ")
    return {"nvars": f.n, "terms": terms}


def curve_to_dict(curve: PolynomialCurve) -> dict[str, Any]:
    return {
        "dimension": curve.n,
        "degree": curve.degree,
        "coordinates": [[format_rational(c) for c in p.coeffs] for p in curve.coordinates],
    }


def points_to_dict(
    points: Sequence[Sequence[Fraction]], params: Sequence[Fraction] | None = None
) -> dict[str, Any]:
    out: dict[str, Any] = {
        "dimension": len(points[0]),
        "points": [[format_rational(Fraction(x)) for x in p] for p in points],
    }
    if params is not None:
        out["params"] = [format_rational(Fraction(t)) for t in params]
    return out
