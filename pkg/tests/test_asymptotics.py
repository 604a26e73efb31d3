import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from shifted_primes.asymptotics import (
    ALPHA_THRESHOLD,
    DomainError,
    alpha_of,
    applicable_branches,
    delta_const,
    poisson_partial,
    poisson_partial_mp,
    poisson_rate,
    predict_order,
    shape_params,
    y_from_alpha,
)
from shifted_primes.asymptotics import _branch_ii


def test_delta_digits():
    d = delta_const()
    assert d == pytest.approx(0.086071332, abs=1e-9)
    assert d == pytest.approx(1 - (1 + math.log(math.log(2))) / math.log(2), abs=1e-12)


def test_rate_values():
    assert poisson_rate(1.0) == 0.0
    assert poisson_rate(math.e) == pytest.approx(1.0, abs=1e-15)
    assert poisson_rate(2.0) == pytest.approx(2 * math.log(2) - 1)
    with pytest.raises(DomainError):
        poisson_rate(0.0)


def test_rate_convex_and_positive():
    u = np.linspace(0.1, 3.0, 1000)
    q = np.array([poisson_rate(t) for t in u])
    assert np.all(np.diff(q, 2) > 0)
    assert np.all(q[np.abs(u - 1) > 1e-12] > 0)


def test_alpha_example():
    x = math.exp(100)
    sp = shape_params(x, x / math.exp(10))
    assert sp.alpha == pytest.approx(0.5, abs=1e-12)


def test_theta_zero_at_threshold():
    x = 1e12
    sp = shape_params(x, y_from_alpha(x, ALPHA_THRESHOLD))
    assert sp.theta == pytest.approx(0.0, abs=1e-9)


def test_sqrt_endpoint():
    x = 1e10
    a = shape_params(x, math.sqrt(x)).alpha
    assert a == pytest.approx(1 - math.log(2) / math.log(math.log(x)), abs=1e-12)


def test_alpha_undefined_near_x():
    assert alpha_of(100.0, 50.0) is None
    assert shape_params(100.0, 50.0).alpha is None
    with pytest.raises(DomainError):
        shape_params(100.0, 101.0)


@given(st.floats(1e3, 1e300), st.floats(0.02, 0.98))
@settings(max_examples=200)
def test_shape_round_trip(x, a):
    y = y_from_alpha(x, a)
    if y < 2:
        return
    b = alpha_of(x, y)
    assert y_from_alpha(x, b) == pytest.approx(y, rel=1e-9)


def test_conventions():
    x, y = 1e12, 1e8
    up = shape_params(x, y, "upper")
    lo = shape_params(x, y, "lower")
    assert up.z == pytest.approx(x / y)
    assert lo.z == min(y, x / y)
    assert lo.gamma == min(1.0, up.gamma)
    assert lo.w % 2 == 0
    with pytest.raises(DomainError):
        shape_params(x, y, "middle")


def test_branch_iii_example():
    x = math.exp(20)
    p = predict_order(x, x / math.exp(2))
    assert p.branch == "iii"
    assert p.value == pytest.approx(x / 10, rel=1e-12)
    assert p.asymptotic


def test_branch_i_example():
    x = 1e30
    y = x**0.1
    p = predict_order(x, y)
    assert p.branch == "i"
    want = x / (math.log(y) ** delta_const() * math.sqrt(math.log(math.log(y))))
    assert p.value == pytest.approx(want, rel=1e-12)


def test_branch_ii_decreasing_in_theta():
    # theta >= 1 inside the branch needs log log x near 30, beyond float range,
    # so hold x and alpha fixed and move theta alone
    x, a = 1e40, 0.8
    vals = [_branch_ii(x, a, t)[0] for t in (0.5, 1.0, 1.5, 2.0, 4.0, 10.0)]
    assert vals[0] == vals[1]
    assert all(u > v for u, v in zip(vals[1:], vals[2:]))
    assert vals[1] / vals[-1] == pytest.approx(10.0)


def test_threshold_continuity():
    x = 1e20
    a = ALPHA_THRESHOLD
    p = predict_order(x, y_from_alpha(x, a))
    assert {"ii", "iii"} <= set(p.values)
    expo = delta_const() + a - 1 - math.log(a) / math.log(2)
    assert p.formula_terms["ii.exponent"] == pytest.approx(expo, abs=1e-12)
    # at theta = 0, branch ii is x / (log x)^expo; branch iii is x (log x)^(a - 1)
    ratio = p.values["ii"] / p.values["iii"]
    assert ratio == pytest.approx(math.log(x) ** (1 - a - expo), rel=1e-6)


@pytest.mark.parametrize("x", [1e4, 1e8, 1e16])
def test_branches_cover_range(x):
    for e in np.linspace(0.05, 0.99, 40):
        y = max(2.0, x**e)
        if y > x / 2:
            continue
        b = applicable_branches(x, y)
        assert b, (x, y)
        p = predict_order(x, y)
        assert p.value > 0 and p.branch == b[0]


def test_predict_domain():
    with pytest.raises(DomainError):
        predict_order(5, 2)
    with pytest.raises(DomainError):
        predict_order(100, 60)


def test_poisson_examples():
    t = poisson_partial(4.0, 0.5, "lower_tail")
    assert t.exact_sum == pytest.approx(13 * math.exp(-4), rel=1e-14)
    full = poisson_partial(30.0, 0.999, "lower_tail")
    assert full.exact_sum < 1
    for side in ("lower_tail", "upper_tail"):
        t = poisson_partial(25.0, 0.2, side)
        assert 0 < t.window_sum <= t.exact_sum <= 1
        assert 1e-2 < t.exact_sum / t.bound < 1e2
        assert t.applicable
    assert not poisson_partial(25.0, 0.1, "lower_tail").applicable


def test_poisson_total_mass():
    v = 50.0
    lo = poisson_partial(v, 0.3, "lower_tail").exact_sum
    hi = poisson_partial(v, 0.3, "upper_tail").exact_sum
    mid = math.fsum(math.exp(-v + k * math.log(v) - math.lgamma(k + 1)) for k in range(36, 65))
    assert lo + mid + hi == pytest.approx(1.0, abs=1e-13)


@pytest.mark.parametrize("side", ["lower_tail", "upper_tail"])
@pytest.mark.parametrize("v", [3.0, 37.5, 900.0])
def test_poisson_against_high_precision(side, v):
    for lam in (0.05, 0.25, 0.5, 0.8):
        assert poisson_partial(v, lam, side).exact_sum == pytest.approx(
            poisson_partial_mp(v, lam, side), rel=1e-9, abs=1e-300
        )
