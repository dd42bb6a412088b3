"""Exact high-order chain rule for ``f(w(t))`` and derivative lower bounds."""

__version__ = "0.1.0"

from .exactpoly import (  # noqa: E402
    MVPoly,
    UniPoly,
    compose_with_curve,
    differentiate_uni,
    oracle_derivative,
    parse_mvpoly,
    partial_derivative,
)
from .multiindex import SigmaContext, eta, generate_sigma, kappa  # noqa: E402
from .chainrule import (  # noqa: E402
    ChainRuleExpansion,
    ChainRuleTerm,
    DerivativeTensors,
    coefficient_bound,
    coefficient_sum,
    evaluate,
    expand,
    min_surviving_order,
    truncate_for_degree,
)
from .curves import (  # noqa: E402
    PolynomialCurve,
    SampledCurve,
    curve_derivatives_at,
    curve_through_points,
    in_unit_ball,
    markov_derivative_bound,
    near_polynomial_deviation,
)
from .rigidity import (  # noqa: E402
    RigidityCertificate,
    certify_curve_rigidity,
    certify_main_inequality,
    constant_C,
    constant_C1,
    derivative_norm_sum,
    divided_difference,
    interval_schedule,
    per_interval_bound,
    rigidity_1d_bound,
)
