import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fixtime import specfun
from fixtime.numerics import QuadratureError, quad


@pytest.mark.parametrize("deg", range(0, 23, 2))
def test_kronrod_rule_exact_for_polynomials(deg):
    res = quad(lambda x: (deg + 1) * x ** deg, 0.0, 1.0, 1e-14)
    assert res.value == pytest.approx(1.0, abs=1e-14)


def test_smooth_integrand_needs_one_panel():
    res = quad(np.cos, 0.0, 1.0, 1e-12)
    assert res.value == pytest.approx(math.sin(1.0), abs=1e-14)
    assert res.evaluations <= 45


@pytest.mark.parametrize("f,lo,hi,want,singular", [
    (lambda x: x ** -0.5, 0.0, 1.0, 2.0, True),
    (lambda x: np.log(x), 0.0, 1.0, -1.0, True),
    (lambda x: x ** -0.9, 0.0, 1.0, 10.0, True),
    (lambda x: np.exp(-x), 0.0, math.inf, 1.0, False),
    (lambda x: (1 + x) ** -2.0, 0.0, math.inf, 1.0, False),
    (lambda x: x ** -0.5 * np.exp(-x), 0.0, math.inf, math.sqrt(math.pi), True),
    (lambda x: 1.0 / (np.sqrt(x) * (1.0 + x)), 0.0, math.inf, math.pi, True),
])
def test_endpoint_singularities_and_tails(f, lo, hi, want, singular):
    res = quad(f, lo, hi, 1e-11, singular_lo=singular)
    assert res.value == pytest.approx(want, rel=1e-9)
    assert res.abs_error_estimate <= 1e-8


def test_oscillating_tail_extrapolation():
    rho = 2.0 - specfun.cosint(1.0) * math.cos(1.0) - specfun.sinint_shifted(1.0) * math.sin(1.0)
    res = quad(lambda w: (np.sin(w) + 2.0) / (1.0 + w) ** 2, 0.0, math.inf, 1e-11,
               tail="extrapolate", scale=2 * math.pi)
    assert res.value == pytest.approx(rho, abs=1e-8)


def test_heavy_tail_extrapolation():
    res = quad(lambda x: (1.0 + x) ** -1.5, 0.0, math.inf, 1e-10, tail="extrapolate")
    assert res.value == pytest.approx(2.0, abs=1e-8)


@pytest.mark.parametrize("a,b,p,q,k,x", [
    (1.0, 2.0, 0.5, 2.0, 1.0, 3.0),
    (0.5, 1.5, 0.2, 1.5, 2.0, 0.7),
    (2.0, 0.3, 0.9, 3.0, 0.8, 10.0),
])
def test_poly_beta_partial_integral_closed_form(a, b, p, q, k, x):
    mp_, mq = (1 - k * p) / (q - p), (k * q - 1) / (q - p)
    s = (b / a) * x ** (q - p)
    closed = a ** -k / (q - p) * (a / b) ** mp_ * specfun.inc_beta(s / (1 + s), mp_, mq)
    res = quad(lambda z: (a * z ** p + b * z ** q) ** -k, 0.0, x, 1e-12, singular_lo=True)
    assert res.value == pytest.approx(closed, rel=1e-8)


def test_zero_width_interval():
    assert quad(np.exp, 1.0, 1.0).value == 0.0


def test_divergent_integral_raises_with_estimate():
    with pytest.raises(QuadratureError) as info:
        quad(lambda x: 1.0 / (1.0 + x), 0.0, math.inf, 1e-10, limit=2000)
    assert info.value.result is not None


def test_nonfinite_integrand_raises():
    with pytest.raises(QuadratureError):
        quad(lambda x: np.where(x > 0.3, np.nan, 1.0), 0.0, 1.0)


@pytest.mark.parametrize("lo,hi", [(1.0, 0.0), (math.nan, 1.0), (-math.inf, 0.0)])
def test_invalid_limits(lo, hi):
    with pytest.raises(ValueError):
        quad(np.exp, lo, hi)


def test_scalar_integrand():
    res = quad(lambda x: math.exp(-x), 0.0, 2.0, vectorized=False)
    assert res.value == pytest.approx(1 - math.exp(-2.0), abs=1e-13)


@settings(max_examples=60, deadline=None)
@given(st.floats(0.0, 3.0), st.floats(0.01, 3.0), st.floats(0.01, 0.99))
def test_interval_additivity(lo, width, frac):
    f = lambda x: np.exp(-x) * np.cos(3 * x)
    hi = lo + width
    mid = lo + frac * width
    whole = quad(f, lo, hi, 1e-13).value
    parts = quad(f, lo, mid, 1e-13).value + quad(f, mid, hi, 1e-13).value
    assert whole == pytest.approx(parts, abs=1e-12)


@settings(max_examples=60, deadline=None)
@given(st.floats(0.05, 0.95))
def test_power_singularity_family(a):
    res = quad(lambda x: x ** -a, 0.0, 1.0, 1e-11, singular_lo=True)
    assert res.value == pytest.approx(1.0 / (1.0 - a), rel=1e-8)
