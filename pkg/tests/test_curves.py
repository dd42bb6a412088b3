import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from chainrig.curves import (
    PolynomialCurve,
    SampledCurve,
    chebyshev_params,
    curve_derivatives_at,
    curve_through_points,
    in_unit_ball,
    markov_derivative_bound,
    near_polynomial_deviation,
    vector_norm,
)
from chainrig.exactpoly import UniPoly

from oracles import random_ball_curve, random_curve

t = UniPoly([0, 1])
half = Fraction(1, 2)


def test_curve_basics():
    w = PolynomialCurve((t, t**2))
    assert w.n == 2 and w.degree == 2
    assert w(Fraction(1, 3)) == (Fraction(1, 3), Fraction(1, 9))
    assert w.derivative(2).coordinates == (UniPoly(), UniPoly([2]))
    with pytest.raises(ValueError):
        PolynomialCurve((t**3,), degree=2)
    with pytest.raises(ValueError):
        PolynomialCurve(())


@pytest.mark.parametrize(
    "curve, t0, expected",
    [
        ((t, t**2), 1, [[1, 0, 0], [2, 2, 0]]),
        ((t**3, t**2), 0, [[0, 0, 6], [0, 2, 0]]),  # the cusp
        ((UniPoly([1, 2]), UniPoly([0, -3])), half, [[2, 0], [-3, 0]]),
    ],
)
def test_curve_derivatives_at(curve, t0, expected):
    up_to = len(expected[0])
    assert curve_derivatives_at(PolynomialCurve(curve), t0, up_to) == expected


def test_derivatives_beyond_degree_vanish():
    rng = random.Random(5)
    for s in range(4):
        w = random_curve(rng, 2, s)
        vals = curve_derivatives_at(w, Fraction(1, 7), s + 3)
        assert all(v == 0 for row in vals for v in row[s:])


def test_interpolation_examples():
    line = curve_through_points([(0, 0), (1, 1)], [-1, 1])
    assert line.coordinates == (UniPoly([half, half]),) * 2
    parabola = curve_through_points([(-1, 1), (0, 0), (1, 1)], [-1, 0, 1])
    assert parabola.coordinates == (t, t**2)
    const = curve_through_points([(Fraction(2, 3), -5)], [0])
    assert const.coordinates == (UniPoly([Fraction(2, 3)]), UniPoly([-5]))


def test_interpolation_errors():
    with pytest.raises(ValueError):
        curve_through_points([], [])
    with pytest.raises(ValueError):
        curve_through_points([(0,), (1,)], [half, half])
    with pytest.raises(ValueError):
        curve_through_points([(0,), (1, 2)])


def test_chebyshev_params():
    assert chebyshev_params(1) == [0]
    assert chebyshev_params(3) == [-1, 0, 1]
    assert chebyshev_params(4) == [-1, -half, half, 1]
    p = chebyshev_params(6)
    assert p == sorted(p) and len(set(p)) == 6
    assert all(abs(float(x) + math.cos(math.pi * j / 5)) < 1e-6 for j, x in enumerate(p))


@settings(max_examples=60)
@given(
    st.lists(
        st.tuples(st.fractions(max_denominator=7), st.fractions(max_denominator=7)),
        min_size=1, max_size=6,
    ),
    st.booleans(),
)
def test_interpolation_reproduces_points(points, default_params):
    params = None if default_params else [Fraction(j, len(points)) for j in range(len(points))]
    w = curve_through_points(points, params)
    ts = chebyshev_params(len(points)) if params is None else params
    assert [w(tj) for tj in ts] == [tuple(p) for p in points]
    assert w.degree <= len(points) - 1


@pytest.mark.parametrize("s, l, expected", [(2, 2, 16), (1, 1, 1), (5, 0, 1), (3, 2, 81)])
def test_markov_bound_values(s, l, expected):
    assert markov_derivative_bound(s, l) == expected


def test_markov_bound_chebyshev_example():
    cheb = UniPoly([-1, 0, 2])
    assert cheb.derivative(2)(0) == 4 <= markov_derivative_bound(2, 2)
    with pytest.raises(ValueError):
        markov_derivative_bound(0, 1)


@settings(max_examples=80, deadline=None)
@given(st.integers(1, 3), st.integers(1, 4), st.integers(0, 2**32))
def test_markov_bound_holds_on_ball_curves(n, s, seed):
    w = random_ball_curve(random.Random(seed), n, s)
    assert in_unit_ball(w)
    grid = [Fraction(k, 16) for k in range(-16, 17)]
    for t0 in grid:
        vals = curve_derivatives_at(w, t0, s)
        for row in vals:
            for l, v in enumerate(row, start=1):
                assert abs(v) <= markov_derivative_bound(s, l)


def test_in_unit_ball_examples():
    outside = in_unit_ball(PolynomialCurve((t, t**2)))
    assert not outside.inside and not outside
    assert outside.worst_t == 1 and outside.worst_norm_sq == 2
    inside = in_unit_ball(PolynomialCurve((t * half, t**2 * half)))
    assert inside.inside and inside.worst_norm_sq == half
    assert in_unit_ball(PolynomialCurve((UniPoly(), UniPoly()))).inside


def test_in_unit_ball_catches_bump_between_grid_points():
    # |w|^2 peaks just above 1 at t = 1/2, between the points of a coarse grid
    c = UniPoly([Fraction(1001, 1000)]) - (t - half) ** 2 * half
    check = in_unit_ball(PolynomialCurve((c,)), grid_size=3)
    assert max(abs(c(x)) for x in (-1, 0, 1)) < 1
    assert not check.inside
    assert abs(check.worst_t - half) < Fraction(1, 10**6)
    assert check.critical_points
    lower = UniPoly([Fraction(999, 1000)]) - (t - half) ** 2 * half
    assert in_unit_ball(PolynomialCurve((lower,)), grid_size=3).inside


def test_in_unit_ball_boundary_touch_is_inside():
    assert in_unit_ball(PolynomialCurve((t,))).inside
    assert in_unit_ball(PolynomialCurve((1 - t**2 * 2,))).inside


def test_vector_norm():
    assert vector_norm([3, 4]) == 5.0
    assert vector_norm([Fraction(-3, 2), 1], "max") == Fraction(3, 2)
    with pytest.raises(ValueError):
        vector_norm([1], "l1")


def test_deviation_identity_is_zero():
    w = PolynomialCurve((t, t**2 - half))
    sampled = SampledCurve.sample(w, [-1, 0, half, 1], 3)
    assert near_polynomial_deviation(sampled, w, 3) == 0
    assert near_polynomial_deviation(sampled, w, 3, "max") == 0


def test_deviation_of_higher_degree_perturbation():
    eps = Fraction(1, 100)
    w = PolynomialCurve((t, t**2))
    bumped = PolynomialCurve((t + t**3 * eps, t**2))
    sampled = SampledCurve.sample(bumped, [-1, 1], 3)
    s = 2
    for d in range(4):
        expected = max(eps * Fraction(math.factorial(s + 1), math.factorial(s + 1 - k)) for k in range(d + 1))
        assert near_polynomial_deviation(sampled, w, d, "max") == expected
        assert math.isclose(near_polynomial_deviation(sampled, w, d), float(expected))


def test_deviation_errors():
    w = PolynomialCurve((t,))
    with pytest.raises(ValueError):
        SampledCurve((), ())
    with pytest.raises(ValueError):
        SampledCurve((half, 0), (((0, 0),), ((0, 0),)))
    sampled = SampledCurve.sample(w, [0], 1)
    with pytest.raises(ValueError):
        near_polynomial_deviation(sampled, w, 2)
    with pytest.raises(ValueError):
        near_polynomial_deviation(sampled, PolynomialCurve((t, t)), 1)


def test_deviation_accepts_float_samples():
    w = PolynomialCurve((t**2,))
    sampled = SampledCurve((0.5,), (((0.25 + 1e-3, 1.0, 2.0),),))
    assert math.isclose(near_polynomial_deviation(sampled, w, 2), 1e-3)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32), st.integers(0, 3))
def test_deviation_monotone_in_order_and_nodes(seed, d):
    rng = random.Random(seed)
    w = random_curve(rng, 2, 2)
    other = random_curve(rng, 2, 3)
    nodes = sorted({Fraction(rng.randint(-8, 8), 8) for _ in range(5)})
    sampled = SampledCurve.sample(other, nodes, d + 1)
    sub = SampledCurve.sample(other, nodes[: max(1, len(nodes) - 2)], d + 1)
    for norm in ("euclidean", "max"):
        full = near_polynomial_deviation(sampled, w, d, norm)
        assert near_polynomial_deviation(sampled, w, d + 1, norm) >= full
        assert near_polynomial_deviation(sub, w, d, norm) <= full
