import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import optimize

from mmrelay import rates as R
from oracles import grid_golden_max
from mmrelay.errors import InvalidParameterError
from mmrelay.rates import PowerBudget

gains = st.floats(min_value=1e-3, max_value=10.0)
powers = st.floats(min_value=0.1, max_value=1e3)
mus = st.floats(min_value=1e-6, max_value=0.5)


def grid_max(f, lo, hi):
    return grid_golden_max(f, lo, hi, n=2000)


def hd_half_oracle(g1, g2, xi):
    f = lambda a: 0.5 * np.log2(1 + R.hd_snr(g1, g2, a, 2 * xi - a))
    return grid_max(f, 0.0, 2 * xi)


def fd_oracle(g1, g2, xi, mu):
    f = lambda a: np.log2(1 + R.fd_sinr(g1, g2, a, xi - a, mu))
    return grid_max(f, 0.0, xi)


def test_capacity_values():
    assert R.capacity(0.0) == 0.0
    assert R.capacity(1.0) == 1.0
    assert R.capacity(3.0) == 2.0
    np.testing.assert_allclose(R.capacity(np.array([1.0, 3.0, 7.0])), [1, 2, 3])
    with pytest.raises(InvalidParameterError):
        R.capacity(-1.0)


def test_direct_rate():
    assert R.direct_rate(1.0, PowerBudget(3.0)).rate == 2.0


def test_equal_slot_reference():
    sol = R.hd_equal_slot_rate(1, 1, PowerBudget(2))
    assert sol.snr == pytest.approx(0.8, rel=1e-14)
    assert sol.rate == pytest.approx(0.5 * math.log2(1.8), rel=1e-14)
    assert sol.rate == pytest.approx(0.4240, abs=1e-4)
    assert (sol.xi1, sol.xi2) == (2.0, 2.0)
    assert sol.rate == pytest.approx(hd_half_oracle(1, 1, 2), abs=1e-9)


def test_fd_reference():
    assert R.fd_sinr(1, 1, 1, 1, 0) == pytest.approx(1 / 3, rel=1e-15)
    sol = R.fd_optimal_rate(1, 1, PowerBudget(2, 1e-12))
    assert sol.snr == pytest.approx(1 / 3, rel=1e-10)
    assert sol.rate == pytest.approx(0.4150, abs=1e-4)


def test_fd_upper_limit_coefficients():
    c = R.FdCoefficients.from_gains(1, 1, 2)
    assert (c.a0, c.a1, c.a2) == (4.0, 6.0, 6.0)
    assert R.fd_rate_upper_limit(1, 1, 2).snr == pytest.approx(1 / 3, rel=1e-15)
    assert R.fd_optimal_rate(1, 1, PowerBudget(2, 0.0)).rate == R.fd_rate_upper_limit(1, 1, 2).rate


def test_kappa_reference():
    assert R.kappa(1, 1, PowerBudget(2, 1.0)) == pytest.approx((8 + 6 * math.sqrt(3)) / 12, rel=1e-14)
    assert R.kappa(1, 1, PowerBudget(2, 1.0)) == pytest.approx(1.533, abs=1e-3)


def test_hd_optimal_reference():
    sol = R.hd_optimal_rate(1, 1, PowerBudget(2))
    assert sol.rate == pytest.approx(0.6243232748, abs=1e-8)
    assert sol.rate >= R.hd_equal_slot_rate(1, 1, PowerBudget(2)).rate
    assert sol.beta * sol.xi1 + (1 - sol.beta) * sol.xi2 == pytest.approx(2.0, rel=1e-12)


@pytest.mark.parametrize(
    "args",
    [(0.0, 1.0), (1.0, -1.0), (math.nan, 1.0)],
)
def test_invalid_gains(args):
    with pytest.raises(InvalidParameterError):
        R.hd_equal_slot_rate(*args, PowerBudget(1.0))


@pytest.mark.parametrize("xi,mu", [(0.0, 0.1), (-1.0, 0.1), (1.0, -0.1), (1.0, 1.5), (math.inf, 0.1)])
def test_invalid_budget(xi, mu):
    with pytest.raises(InvalidParameterError):
        PowerBudget(xi, mu)


def test_fd_rejects_full_self_interference():
    with pytest.raises(InvalidParameterError):
        R.fd_optimal_rate(1, 1, PowerBudget(2, 1.0))


@settings(max_examples=200, deadline=None)
@given(gains, gains, powers)
def test_equal_slot_matches_oracle(g1, g2, xi):
    sol = R.hd_equal_slot_rate(g1, g2, PowerBudget(xi))
    assert sol.xi1 + sol.xi2 == pytest.approx(2 * xi, rel=1e-12)
    assert sol.rate == pytest.approx(hd_half_oracle(g1, g2, xi), rel=1e-9, abs=1e-12)


@settings(max_examples=200, deadline=None)
@given(gains, gains, powers, mus)
def test_fd_matches_oracle(g1, g2, xi, mu):
    sol = R.fd_optimal_rate(g1, g2, PowerBudget(xi, mu))
    assert sol.xi1 + sol.xi2 == pytest.approx(xi, rel=1e-12)
    assert sol.rate == pytest.approx(fd_oracle(g1, g2, xi, mu), rel=1e-9, abs=1e-12)


@settings(max_examples=200, deadline=None)
@given(gains, gains, powers, mus, st.sampled_from([-0.01, 0.01]))
def test_fd_allocation_is_locally_optimal(g1, g2, xi, mu, step):
    sol = R.fd_optimal_rate(g1, g2, PowerBudget(xi, mu))
    xi1 = sol.xi1 * (1 + step)
    assert R.fd_sinr(g1, g2, xi1, xi - xi1, mu) <= sol.snr * (1 + 1e-12)


@settings(max_examples=200, deadline=None)
@given(gains, gains, powers, st.sampled_from([-0.01, 0.01]))
def test_equal_slot_allocation_is_locally_optimal(g1, g2, xi, step):
    sol = R.hd_equal_slot_rate(g1, g2, PowerBudget(xi))
    xi1 = sol.xi1 * (1 + step)
    assert R.hd_snr(g1, g2, xi1, 2 * xi - xi1) <= sol.snr * (1 + 1e-12)


@settings(max_examples=300, deadline=None)
@given(gains, gains, powers, mus)
def test_denominator_forms_agree(g1, g2, xi, mu):
    assert R.fd_denominator_completed_square(g1, g2, xi, mu) == pytest.approx(
        R.fd_denominator(g1, g2, xi, mu), rel=1e-10
    )


@settings(max_examples=300, deadline=None)
@given(gains, gains, powers, mus)
def test_kappa_properties(g1, g2, xi, mu):
    b = PowerBudget(xi, mu)
    k = R.kappa(g1, g2, b)
    k1, k2 = R.kappa_components(g1, g2, b)
    assert k >= 1.0
    assert 1 + k1 + k2 == pytest.approx(k, rel=1e-12)
    limit = R.fd_rate_upper_limit(g1, g2, xi).snr
    assert limit / k == pytest.approx(R.fd_optimal_rate(g1, g2, b).snr, rel=1e-12)


@settings(max_examples=50, deadline=None)
@given(gains, gains, powers)
def test_hd_optimal_dominates_and_equalizes(g1, g2, xi):
    b = PowerBudget(xi)
    sol = R.hd_optimal_rate(g1, g2, b)
    assert sol.rate >= R.hd_equal_slot_rate(g1, g2, b).rate - 1e-12
    first, second = R.hd_branches(sol.beta, sol.xi1, g1, g2, xi)
    if 1e-4 < sol.beta < 1 - 1e-4 and sol.xi2 > 0:
        assert float(first) == pytest.approx(float(second), rel=1e-6)


def test_fd_derivatives_signs():
    gamma, d1, d2 = R.fd_sinr_mu_derivatives(1e-8, 1e-8, 1e10, 1e-9)
    assert d1 < 0 < d2
    rate, r1, r2 = R.fd_rate_mu_derivatives(1e-8, 1e-8, 1e10, 1e-9)
    assert r1 < 0 < r2


def test_feasible_set_branches():
    assert R.fd_mu_feasible_set(1, 1, 2, 0.0).kind == "empty"
    assert R.fd_mu_feasible_set(1, 1, 2, 10.0).kind == "all"
    s = R.fd_mu_feasible_set(1, 1, 2, 0.3)
    assert s.kind == "interval"
    assert s.mu_low == pytest.approx(0.805333, abs=1e-6)
    assert s.contains(0.9) and not s.contains(0.5)


@settings(max_examples=100, deadline=None)
@given(
    st.floats(min_value=1e-9, max_value=1e-7),
    st.floats(min_value=1e-9, max_value=1e-7),
    st.floats(min_value=1e9, max_value=1e11),
    st.floats(min_value=0.1, max_value=0.9),
)
def test_feasible_threshold_matches_root(g1, g2, xi, frac):
    # Pick chi strictly between the rate at mu -> 1 and the mu -> 0 limit.
    top = R.fd_rate_upper_limit(g1, g2, xi).rate
    bottom = math.log2(1 + R.fd_optimal_sinr(g1, g2, xi, 1.0))
    chi = bottom + frac * (top - bottom)
    s = R.fd_mu_feasible_set(g1, g2, xi, chi)
    assert s.kind == "interval"
    f = lambda logmu: math.log2(1 + R.fd_optimal_sinr(g1, g2, xi, math.exp(logmu))) - chi
    root = math.exp(optimize.brentq(f, math.log(1e-300), 0.0, xtol=1e-14, rtol=1e-15))
    assert s.mu_low == pytest.approx(root, rel=1e-6)
