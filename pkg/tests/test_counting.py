import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles as oracle
from shifted_primes.counting import (
    MEMORY_ENV,
    NO_CONSTRAINTS,
    CaseASplit,
    RepresentationConstraints,
    ResourceBudgetError,
    brute_N,
    divisor_set,
    exact_N,
    mertens_upper,
    moments,
    nu,
    r_counts,
)


def slow_r(x, y, c=NO_CONSTRAINTS):
    """r(n) for n <= x by trial division over every pair (p, m)."""
    out = {}
    for p in range(max(2, math.floor(y) + 1), x + 2):
        if not oracle.td_is_prime(p):
            continue
        if c.p_window and not c.p_window[0] < p < c.p_window[1]:
            continue
        for m in range(1, x // (p - 1) + 1):
            if c.w_cap is not None:
                if c.cap_mode == "joint":
                    if oracle.td_big_omega((p - 1) * m, c.z) > c.w_cap:
                        continue
                elif oracle.td_big_omega(m) > c.w_cap or oracle.td_big_omega(p - 1, c.z) > c.w_cap:
                    continue
            if c.case_a_split is not None:
                k = math.prod(q**e for q, e in oracle.td_factor(m).items() if q <= c.case_a_split.h_rough)
                if k > c.case_a_split.k_max:
                    continue
            n = (p - 1) * m
            out[n] = out.get(n, 0) + 1
    return out


def test_examples():
    assert exact_N(10, 2) == 5
    assert exact_N(10, 10) == 1
    assert exact_N(10, 11) == 0
    assert exact_N(1, 1) == brute_N(1, 1) == 1
    assert exact_N(100, 50) == brute_N(100, 50) == 11


def test_divisor_set():
    assert divisor_set(10, 2).divisors.tolist() == [2, 4, 6, 10]
    assert divisor_set(10, 11).divisors.size == 0


@pytest.mark.parametrize("x", [1, 2, 7, 30, 97, 300])
def test_exact_matches_trial_division(x):
    for y in (1, 2, 3, 10, math.isqrt(x), x - 1, x):
        assert exact_N(x, y) == oracle.td_N(x, y)


@given(st.integers(1, 5000), st.integers(1, 5000), st.sampled_from([16, 257, 1 << 12]), st.integers(1, 4))
@settings(max_examples=80, deadline=None)
def test_exact_equals_brute_any_segmentation(x, y, segment, threads):
    assert exact_N(x, y, segment=segment, threads=threads) == brute_N(x, y)


@given(st.integers(1, 20000), st.integers(1, 20000), st.integers(0, 500))
@settings(max_examples=60, deadline=None)
def test_monotone_in_x_and_y(x, y, step):
    assert exact_N(x, y) <= exact_N(x + step, y)
    assert exact_N(x, y + step) <= exact_N(x, y)


@given(st.integers(1, 20000), st.integers(1, 20000))
@settings(max_examples=60, deadline=None)
def test_basic_bounds(x, y):
    n = exact_N(x, y)
    assert 0 <= n <= x
    assert n <= mertens_upper(x, y)
    if y >= x + 1:
        assert n == 0
    if y <= 1 and x >= 1:
        assert n == x


def test_nu_and_mertens():
    primes = [p for p in range(11, 101) if oracle.td_is_prime(p)]
    assert nu(100, 10) == pytest.approx(math.fsum(1 / (p - 1) for p in primes), rel=1e-12)
    assert nu(3, 2) == 0.5
    assert mertens_upper(10, 2) == 9


def test_r_counts_example():
    assert r_counts(10, 2).as_dict() == {2: 1, 4: 2, 6: 2, 8: 2, 10: 2}
    m = moments(10, 2)
    assert (m.M1, m.M2, m.lower_cs) == (9, 17, Fraction(81, 17))
    assert m.lower_ie == m.M1 - (m.M2 - m.M1)


def test_moment_of_empty_set():
    m = moments(10, 20)
    assert (m.M1, m.M2, m.lower_cs, m.n_with_r_positive) == (0, 0, 0, 0)


@pytest.mark.parametrize("x, y", [(50, 1), (200, 5), (500, 20), (1000, 31)])
def test_r_counts_match_trial_division(x, y):
    assert r_counts(x, y).as_dict() == slow_r(x, y)


CONSTRAINTS = [
    RepresentationConstraints(w_cap=2, z=10),
    RepresentationConstraints(w_cap=3, z=50, cap_mode="separate"),
    RepresentationConstraints(p_window=(5, 40)),
    RepresentationConstraints(case_a_split=CaseASplit(3, 7)),
    RepresentationConstraints.case_a(4.0, w_cap=4, z=20),
]


@pytest.mark.parametrize("c", CONSTRAINTS)
def test_constrained_counts_match_trial_division(c):
    x, y = 600, 3
    assert r_counts(x, y, c).as_dict() == slow_r(x, y, c)


@pytest.mark.parametrize("c", CONSTRAINTS)
@pytest.mark.parametrize("x, y", [(2000, 2), (5000, 40)])
def test_moment_chain(c, x, y):
    n = exact_N(x, y)
    full = moments(x, y)
    m = moments(x, y, c)
    assert m.M1 <= full.M1 == mertens_upper(x, y)
    assert m.M2 >= m.M1
    assert m.lower_cs <= m.n_with_r_positive <= n
    assert m.lower_ie <= m.n_with_r_positive


def test_segmented_moments_agree_with_sparse():
    a = moments(30000, 7, segment=4096, threads=3)
    rc = r_counts(30000, 7)
    assert a.M1 == int(rc.r.sum())
    assert a.M2 == int((rc.r**2).sum())
    assert a.n_with_r_positive == len(rc) == exact_N(30000, 7)


def test_case_a_split_must_be_unambiguous():
    with pytest.raises(ValueError):
        CaseASplit(10, 5)
    with pytest.raises(ValueError):
        RepresentationConstraints(w_cap=3)
    with pytest.raises(ValueError):
        RepresentationConstraints(cap_mode="both")


def test_brute_cap():
    with pytest.raises(ResourceBudgetError):
        brute_N(10**6 + 1, 2)


def test_budget_error(monkeypatch):
    monkeypatch.setenv(MEMORY_ENV, "1000")
    with pytest.raises(ResourceBudgetError):
        exact_N(10**6, 2)
    with pytest.raises(ResourceBudgetError):
        moments(10**6, 2)


def test_threads_give_identical_results():
    vals = {exact_N(10**6, 100, segment=1 << 16, threads=t) for t in (1, 2, 8)}
    assert len(vals) == 1
    assert np.int64(vals.pop()) == brute_N(10**6, 100)
