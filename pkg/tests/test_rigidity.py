import json
import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from chainrig.curves import PolynomialCurve, chebyshev_params
from chainrig.exactpoly import MVPoly, UniPoly, parse_mvpoly
from chainrig.multiindex import eta
from chainrig.rigidity import (
    CurveOutsideBallError,
    ScheduleEntry,
    certify_curve_rigidity,
    certify_curve_rigidity_instance,
    certify_main_inequality,
    constant_C,
    constant_C1,
    count_zeros_on_curve,
    curve_rigidity_certificate,
    decimal12,
    derivative_norm_sum,
    divided_difference,
    interval_schedule,
    one_dim_certificate,
    per_interval_bound,
    rigidity_1d_bound,
)

from oracles import random_ball_curve, random_mvpoly

t = UniPoly([0, 1])
half = Fraction(1, 2)
cubic = t**3 - t


def test_divided_difference_examples():
    nodes = [-1, 0, 1, half]
    assert divided_difference(nodes, [cubic(x) for x in nodes]) == 1
    assert divided_difference([0, half, 1], [7, 7, 7]) == 0
    assert divided_difference([1, 3], [2, 10]) == 4
    with pytest.raises(ValueError):
        divided_difference([0, 0], [1, 2])


@settings(max_examples=60)
@given(
    st.lists(st.fractions(min_value=-3, max_value=3, max_denominator=6), min_size=1, max_size=6),
    st.lists(st.fractions(min_value=-2, max_value=2, max_denominator=9), min_size=1, max_size=8, unique=True),
)
def test_divided_difference_of_polynomial_is_leading_coefficient(coeffs, nodes):
    p = UniPoly(coeffs)
    k = len(nodes) - 1
    deg = 0 if p.is_zero() else p.degree
    if k < deg:
        return
    expected = p.coeffs[k] if k == deg and not p.is_zero() else 0
    assert divided_difference(nodes, [p(x) for x in nodes]) == expected


def test_one_dim_cubic_example():
    b = rigidity_1d_bound([-1, 0, 1], half, Fraction(3, 8))
    assert b.sharp == 6 == cubic.derivative(3)(0)
    assert b.uniform == Fraction(9, 32)
    assert b.gap_product == Fraction(3, 8)


def test_one_dim_certificate_record():
    cert = one_dim_certificate([-1, 0, 1], half, Fraction(3, 8))
    assert (cert.lhs, cert.rhs, cert.verdict) == (6, Fraction(9, 32), "holds")
    assert cert.to_record()["witness"]["gap_product"]["exact"] == "3/8"


def test_one_dim_chebyshev_zeros():
    for d in range(6):
        zeros = chebyshev_params(d + 1)
        z0 = (zeros[0] + zeros[1]) / 2 if d else half
        b = rigidity_1d_bound(zeros, z0, 1)
        assert b.sharp >= Fraction(math.factorial(d + 1), 2 ** (d + 1)) == b.uniform


def test_one_dim_errors():
    with pytest.raises(ValueError):
        rigidity_1d_bound([0, 0], half, 1)
    with pytest.raises(ValueError):
        rigidity_1d_bound([0, 1], 0, 1)
    with pytest.raises(ValueError):
        rigidity_1d_bound([0, 1], half, 0)
    with pytest.raises(ValueError):
        rigidity_1d_bound([0, 2], half, 1)


def test_one_dim_equality_only_with_full_gaps():
    b = rigidity_1d_bound([1], -1, 1)
    assert b.sharp == b.uniform == half


@settings(max_examples=100)
@given(
    st.lists(st.fractions(min_value=-1, max_value=1, max_denominator=12), min_size=1, max_size=6, unique=True),
    st.fractions(min_value=-1, max_value=1, max_denominator=13),
    st.fractions(min_value=Fraction(1, 20), max_value=10, max_denominator=20),
)
def test_sharp_dominates_uniform(zeros, z0, m):
    if z0 in zeros:
        return
    b = rigidity_1d_bound(zeros, z0, m)
    assert b.sharp >= b.uniform
    assert (b.sharp == b.uniform) == all(abs(z0 - x) == 2 for x in zeros)


@settings(max_examples=100)
@given(
    st.lists(st.fractions(min_value=-1, max_value=1, max_denominator=12), min_size=1, max_size=6, unique=True),
    st.fractions(min_value=-1, max_value=1, max_denominator=13),
    st.fractions(min_value=Fraction(-5), max_value=5, max_denominator=7).filter(bool),
)
def test_sharp_bound_is_realized_by_polynomials(zeros, z0, lead):
    if z0 in zeros:
        return
    g = UniPoly([lead])
    for x in zeros:
        g = g * UniPoly([-x, 1])
    d = len(zeros) - 1
    b = rigidity_1d_bound(zeros, z0, abs(g(z0)))
    top = g.derivative(d + 1)
    assert top.degree == 0
    assert b.sharp == abs(top(0))


@pytest.mark.parametrize(
    "n, s, d, expected", [(1, 1, 2, 157464), (2, 2, 2, 918330048), (1, 1, 0, 2)]
)
def test_constant_C1(n, s, d, expected):
    assert constant_C1(n, s, d) == expected
    assert constant_C(n, d, s) == Fraction(1, expected)


def test_constants_strictly_monotone():
    for n in range(1, 4):
        for s in range(1, 4):
            for d in range(0, 5):
                c = constant_C1(n, s, d)
                assert constant_C1(n + 1, s, d) > c
                assert constant_C1(n, s, d + 1) > c
                assert constant_C1(n, s + 1, d) > c
                assert certify_curve_rigidity(n, d + 1, s, 1) < certify_curve_rigidity(n, d, s, 1)


def test_curve_rigidity_values():
    assert certify_curve_rigidity(1, 2, 1, 1) == Fraction(1, 209952)
    assert certify_curve_rigidity(2, 2, 2, 1) == Fraction(1, 1224440064)
    assert certify_curve_rigidity(2, 3, 1, 2) == 2 * certify_curve_rigidity(2, 3, 1, 1)
    with pytest.raises(ValueError):
        certify_curve_rigidity(1, 2, 1, 0)


def test_derivative_norm_sum_examples():
    xy = MVPoly({(1, 1): 1}, 2)
    assert derivative_norm_sum(xy, (1, 1), 1, 2) == 3
    assert derivative_norm_sum(MVPoly({(0, 0): 5}, 2), (half, 0), 1, 4) == 0
    assert derivative_norm_sum(MVPoly({(2,): 1}, 1), (1,), 2, 2) == 2
    # distinct multi-indices counted once: d^2(xy)/dxdy appears once, not twice
    assert derivative_norm_sum(xy, (0, 0), 2, 2) == 1
    with pytest.raises(ValueError):
        derivative_norm_sum(xy, (1,), 1, 2)
    with pytest.raises(ValueError):
        derivative_norm_sum(xy, (1, 1), 3, 2)


def test_main_inequality_example():
    f = MVPoly({(2,): 1}, 1)
    curve = PolynomialCurve((t**2 * half,))
    cert = certify_main_inequality(f, curve, half, 2)
    assert cert.parameters["s"] == 2 and cert.parameters["eta"] == eta(2, 2) == 2
    # g = t^4 / 4, g''' = 6t
    assert cert.witness["g_derivative"] == 3
    assert cert.rhs == Fraction(3, constant_C1(1, 2, 2))
    assert cert.lhs == 2
    assert cert.verdict == "holds" and cert.holds
    assert cert.witness["expansion_value"] == 3


def test_main_inequality_constant_composition():
    f = parse_mvpoly("x1^2 + x2^2", 2)
    circle_arc = PolynomialCurve((UniPoly([half]), UniPoly([half])))
    cert = certify_main_inequality(f, circle_arc, 0, 3)
    assert cert.rhs == 0 and cert.verdict == "holds"


def test_main_inequality_linear_case():
    f = parse_mvpoly("3 * x1 - 1/2 * x2", 2)
    line = PolynomialCurve((UniPoly([0, Fraction(1, 3)]), UniPoly([Fraction(1, 4), Fraction(-1, 2)])))
    cert = certify_main_inequality(f, line, Fraction(1, 5), 0)
    assert cert.lhs == Fraction(7, 2)
    assert cert.rhs == abs(3 * Fraction(1, 3) + Fraction(1, 4)) / constant_C1(2, 1, 0)
    assert cert.holds


def test_main_inequality_refuses_outside_curves():
    with pytest.raises(CurveOutsideBallError):
        certify_main_inequality(MVPoly({(1, 0): 1}, 2), PolynomialCurve((t, t**2)), 0, 1)
    with pytest.raises(ValueError):
        certify_main_inequality(MVPoly({(1,): 1}, 1), PolynomialCurve((t,)), 2, 1)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 3), st.integers(1, 3), st.integers(0, 5), st.integers(0, 2**32))
def test_main_inequality_holds_randomly(n, s, d, seed):
    rng = random.Random(seed)
    f = random_mvpoly(rng, n)
    curve = random_ball_curve(rng, n, s)
    t0 = Fraction(rng.randint(-12, 12), 12)
    cert = certify_main_inequality(f, curve, t0, d)
    assert cert.verdict == "holds"
    assert not cert.notes


def test_certificate_record_is_exact_and_stable():
    cert = certify_main_inequality(MVPoly({(2,): 1}, 1), PolynomialCurve((t**2 * half,)), half, 2)
    record = json.loads(cert.to_json())
    assert record["kind"] == "main-inequality"
    assert record["rhs"]["exact"] == f"1/{constant_C1(1, 2, 2) // 3}"
    assert record["verdict"] == "holds"
    assert list(record) == list(json.loads(cert.to_json()))
    assert cert.to_json() == cert.to_json()


def test_decimal12():
    assert decimal12(Fraction(1, 3)) == "0.333333333333"
    assert decimal12(Fraction(1, 209952)) == "0.00000476299344612"
    assert decimal12(Fraction(0)) == "0"


def test_curve_rigidity_certificate_is_bound_only():
    cert = curve_rigidity_certificate(1, 2, 1, 1)
    assert cert.rhs == Fraction(1, 209952)
    assert cert.verdict == "bound-only"


def test_curve_rigidity_instance():
    # f vanishes at t = -1/2, 0, 1/2 along the line w(t) = t
    f = parse_mvpoly("x1^3 - 1/4 * x1", 1)
    line = PolynomialCurve((t,))
    assert count_zeros_on_curve(f, line) == 3
    cert = certify_curve_rigidity_instance(f, line, 2)
    assert cert.witness["zero_count"] == 3
    assert cert.holds
    with pytest.raises(ValueError):
        certify_curve_rigidity_instance(f, line, 3)


def test_schedule_examples():
    sched = interval_schedule(1, 4)
    assert [(e.d, e.lo, e.hi, e.theta) for e in sched.entries] == [
        (5, 4, 6, 2), (9, 6, 10, 4), (17, 10, 18, 8), (33, 18, 34, 16)
    ]
    assert sched.overlaps() == [(1, 6), (2, 10), (3, 18)]
    first = interval_schedule(2, 1).entries[0]
    assert (first.d, first.lo, first.hi, first.theta) == (10, 4, 11, 7)
    assert interval_schedule(3, 0).entries == ()


@pytest.mark.parametrize("s", [1, 2, 3, 4])
def test_schedule_minimality_by_search(s):
    sched = interval_schedule(s, 5)
    assert sched.entries[0].d == 5 * s
    for prev, cur in zip(sched.entries, sched.entries[1:]):
        smallest = next(d for d in range(0, cur.d + 1) if eta(d, s) > prev.d)
        assert smallest == cur.d
        assert cur.lo == prev.d + 1  # shares an endpoint with the previous interval
    for r in sched.growth_ratios():
        assert s < r <= s + 1


def test_per_interval_bound():
    entry = interval_schedule(1, 1).entries[0]
    assert per_interval_bound(entry, 1, 1) == certify_curve_rigidity(1, 5, 1, 1) / 2
    assert per_interval_bound(entry, 1, 1) == Fraction(720, 2 * 64 * constant_C1(1, 1, 5))
    single = ScheduleEntry(1, 1, 2, eta(2, 1), 3)
    assert single.theta == 1
    assert per_interval_bound(single, 2, 3) == certify_curve_rigidity(2, 2, 1, 3)
    with pytest.raises(ValueError):
        per_interval_bound(entry, 1, 0)
