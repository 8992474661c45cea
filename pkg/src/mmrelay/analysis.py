"""Numerical checks of the scaling laws, monotonicity and convexity results.

Big-O statements are turned into explicit inequalities by using the
constants that appear in their proofs; every check returns plain data
(:class:`SweepReport`) so callers decide how to fail.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import rates
from ._optimize import golden_max, grid_bracket
from .antenna import AntennaPattern
from .channel import TAU, channel
from .errors import InvalidParameterError, NumericalError
from .rates import LN2, FdCoefficients, PowerBudget
from .scenario import ScenarioConfig

#: Relative slack allowed on ``value <= bound``.
BOUND_RTOL = 1e-9
#: Absolute tolerance on consecutive differences in monotonicity checks.
MONOTONE_ATOL = 1e-12


@dataclass(frozen=True)
class SweepReport:
    """Per-point evidence that ``values <= bound`` along a parameter sweep.

    ``worst_margin`` is the smallest slack ``bound - value``.
    """

    name: str
    parameter: str
    grid: np.ndarray
    values: np.ndarray
    bound: np.ndarray
    passed: np.ndarray
    worst_margin: float

    @property
    def ok(self) -> bool:
        return bool(np.all(self.passed))

    def rows(self):
        for x, v, b, p in zip(self.grid, self.values, self.bound, self.passed):
            yield float(x), float(v), float(b), bool(p)


def make_report(name, parameter, grid, values, bound) -> SweepReport:
    grid = np.asarray(grid, dtype=float)
    values = np.asarray(values, dtype=float)
    bound = np.broadcast_to(np.asarray(bound, dtype=float), values.shape).copy()
    scaled = np.where(bound > 0, bound * (1.0 + BOUND_RTOL), bound)
    passed = values <= scaled
    margin = bound - values
    worst = float(np.min(margin)) if margin.size else math.inf
    return SweepReport(name, parameter, grid, values, bound, passed, worst)


def monotone_report(name, parameter, grid, values, increasing: bool) -> SweepReport:
    """Strict monotonicity up to ``MONOTONE_ATOL`` on consecutive differences."""
    values = np.asarray(values, dtype=float)
    step = np.diff(values)
    signed = -step if increasing else step
    return make_report(name, parameter, np.asarray(grid)[1:], signed, MONOTONE_ATOL)


def convexity_report(name, parameter, grid, values, rtol=1e-9) -> SweepReport:
    """Positive second divided differences on a possibly non-uniform grid.

    Each point is allowed a rounding slack proportional to the size of the
    adjacent slopes.
    """
    x = np.asarray(grid, dtype=float)
    y = np.asarray(values, dtype=float)
    slopes = np.diff(y) / np.diff(x)
    second = 2.0 * np.diff(slopes) / (x[2:] - x[:-2])
    slack = rtol * (np.abs(slopes[1:]) + np.abs(slopes[:-1])) / (x[2:] - x[:-2])
    return make_report(name, parameter, x[1:-1], -second, slack)


# --- elementary inequalities ----------------------------------------------


def log_sqrt_chain_check(x: float) -> tuple[float, float, float]:
    """Return ``(ln(1+x), x/sqrt(1+x), min(sqrt(x), x))`` after asserting their order.

    Raises:
        InvalidParameterError: for negative ``x``.
        AssertionError: if the chain is violated beyond rounding.
    """
    x = float(x)
    if not x >= 0.0:
        raise InvalidParameterError(f"x must be non-negative, got {x!r}")
    lo = math.log1p(x)
    mid = x / math.sqrt(1.0 + x)
    hi = min(math.sqrt(x), x)
    slack = 4 * np.finfo(float).eps
    assert lo <= mid * (1.0 + slack), (x, lo, mid)
    assert mid <= hi * (1.0 + slack), (x, mid, hi)
    return lo, mid, hi


def gain_constant(ch) -> float:
    """Beamwidth-free constant ``K`` with ``g * theta_m**2 <= K`` for a hop."""
    return (ch.b * (1.0 + abs(ch.z)) / TAU) ** 2


def gain_beamwidth_check(config: ScenarioConfig, theta_grid) -> list[SweepReport]:
    """``g_i * theta_m**2`` stays below ``K_i`` for both hops and the direct link."""
    theta_grid = np.asarray(theta_grid, dtype=float)
    reports = []
    for idx, label in enumerate(("hop1", "hop2", "direct")):
        scaled, bound = [], []
        for theta in theta_grid:
            ch = config.channels(theta)[idx]
            scaled.append(ch.g * theta**2)
            bound.append(gain_constant(ch))
        reports.append(make_report(f"gain_beamwidth_bound:{label}", "theta_m", theta_grid, scaled, bound))
    return reports


# --- beamwidth scaling ------------------------------------------------------


def _check_grid(grid, name):
    grid = np.asarray(grid, dtype=float)
    if grid.ndim != 1 or grid.size == 0 or np.any(grid <= 0) or np.any(np.diff(grid) <= 0):
        raise InvalidParameterError(f"{name} must be positive and strictly increasing")
    return grid


def beamwidth_scaling_check(config: ScenarioConfig, theta_grid) -> list[SweepReport]:
    """Rates times ``max(theta_m, theta_m**2)`` stay below the explicit proof constants.

    For ``theta_m < 1`` the ``theta_m**-1`` envelope is used, otherwise the
    ``theta_m**-2`` one. HD bounds use ``K_1`` only; the FD bound combines
    both hops. Also reports strict decay of each rate along the grid.
    """
    theta_grid = _check_grid(theta_grid, "theta_grid")
    budget = config.budget()
    xi, mu = budget.xi, budget.mu
    ch1, ch2, _ = config.channels(theta_grid[0])
    k1, k2 = gain_constant(ch1), gain_constant(ch2)
    q_fd = xi * k1 * k2 / (k1 + k2 + 2.0 * math.sqrt(k1 * k2 * (1.0 + mu * xi)))
    q_hd = k1 * xi

    series = {"hd_opt": [], "hd_half": [], "fd": []}
    for theta in theta_grid:
        g1, g2, _ = config.gains(theta)
        series["hd_opt"].append(rates.hd_optimal_rate(g1, g2, budget).rate)
        series["hd_half"].append(rates.hd_equal_slot_rate(g1, g2, budget).rate)
        series["fd"].append(rates.fd_optimal_rate(g1, g2, budget).rate)

    wide = theta_grid >= 1.0
    scale = np.where(wide, theta_grid**2, theta_grid)
    reports = []
    for name, values in series.items():
        q = q_fd if name == "fd" else q_hd
        bound = np.where(wide, q, math.sqrt(q)) / LN2
        reports.append(make_report(f"beamwidth_bound:{name}", "theta_m", theta_grid, np.asarray(values) * scale, bound))
        reports.append(monotone_report(f"decay:{name}", "theta_m", theta_grid, values, increasing=False))
    return reports


# --- self-interference ------------------------------------------------------


def mu_scaling_check(g1, g2, xi, mu_grid) -> list[SweepReport]:
    """``eta_FD * sqrt(mu)`` bounded, plus strict decrease and convexity in ``mu``."""
    mu_grid = _check_grid(mu_grid, "mu_grid")
    if mu_grid[-1] >= 1.0:
        raise InvalidParameterError("mu_grid must lie inside (0, 1)")
    c = FdCoefficients.from_gains(g1, g2, xi)
    const = math.sqrt(c.a0 / (xi + c.a2 * math.sqrt(xi))) / LN2
    eta = np.array([rates.fd_optimal_rate(g1, g2, PowerBudget(xi, mu)).rate for mu in mu_grid])
    return [
        make_report("fd_sqrt_mu_bound", "mu", mu_grid, eta * np.sqrt(mu_grid), const),
        monotone_report("fd_decreasing_in_mu", "mu", mu_grid, eta, increasing=False),
        convexity_report("fd_convex_in_mu", "mu", mu_grid, eta),
    ]


def _fd_sinr_at(g1, g2, xi, mu):
    return rates.fd_optimal_sinr(g1, g2, xi, mu)


def _fd_rate_at(g1, g2, xi, mu):
    return math.log1p(_fd_sinr_at(g1, g2, xi, mu)) / LN2


def _central(f, x, h):
    f0, fp, fm = f(x), f(x + h), f(x - h)
    return (fp - fm) / (2 * h), (fp - 2 * f0 + fm) / (h * h)


def _central_mp(f_mp, x, h):
    import mpmath

    with mpmath.workdps(50):
        x, h = mpmath.mpf(x), mpmath.mpf(h)
        f0, fp, fm = f_mp(x), f_mp(x + h), f_mp(x - h)
        return float((fp - fm) / (2 * h)), float((fp - 2 * f0 + fm) / (h * h))


def _rel(a, b):
    return abs(a - b) / max(abs(a), abs(b), np.finfo(float).tiny)


@dataclass(frozen=True)
class DerivativeReport:
    """Analytic versus finite-difference derivatives of the optimal FD SINR and rate."""

    mu: float
    step: float
    analytic: dict
    numeric: dict
    rel_error: dict
    method: str
    signs_ok: bool
    chain_rule_residual: float

    @property
    def ok(self) -> bool:
        return self.signs_ok and max(self.rel_error.values()) <= 1e-5


def derivative_consistency_check(g1, g2, xi, mu, rtol=1e-5) -> DerivativeReport:
    """Compare closed-form ``mu``-derivatives with central differences (``h = mu*1e-4``).

    Falls back to Richardson extrapolation, then to 50-digit arithmetic, when
    rounding at small ``xi*mu`` spoils the double-precision differences.
    """
    if not (1e-10 < mu < 1.0 - 1e-10):
        raise InvalidParameterError("mu must lie in (1e-10, 1 - 1e-10)")
    h = mu * 1e-4
    if h <= 0 or mu - h <= 0:
        raise NumericalError("finite-difference step underflow")

    gamma, dg, d2g = rates.fd_sinr_mu_derivatives(g1, g2, xi, mu)
    eta, de, d2e = rates.fd_rate_mu_derivatives(g1, g2, xi, mu)
    analytic = {"dgamma": dg, "d2gamma": d2g, "deta": de, "d2eta": d2e}

    def sinr(m):
        return _fd_sinr_at(g1, g2, xi, m)

    def rate(m):
        return _fd_rate_at(g1, g2, xi, m)

    def evaluate(method):
        if method == "central":
            a, b = _central(sinr, mu, h)
            c, d = _central(rate, mu, h)
        elif method == "richardson":
            pairs = [_central(f, mu, s) for f in (sinr, rate) for s in (h, h / 2)]
            (a1, b1), (a2, b2), (c1, d1), (c2, d2) = pairs
            a, b = (4 * a2 - a1) / 3, (4 * b2 - b1) / 3
            c, d = (4 * c2 - c1) / 3, (4 * d2 - d1) / 3
        else:
            import mpmath

            def sinr_mp(m):
                a0 = mpmath.mpf(g1) * g2 * xi * xi
                a1 = 2 + (mpmath.mpf(g1) + g2) * xi
                a2 = 2 * mpmath.sqrt((1 + mpmath.mpf(g1) * xi) * (1 + mpmath.mpf(g2) * xi))
                return a0 / (a1 + xi * m + a2 * mpmath.sqrt(1 + xi * m))

            a, b = _central_mp(sinr_mp, mu, h)
            c, d = _central_mp(lambda m: mpmath.log(1 + sinr_mp(m)) / mpmath.log(2), mu, h)
        return {"dgamma": a, "d2gamma": b, "deta": c, "d2eta": d}

    for method in ("central", "richardson", "extended"):
        numeric = evaluate(method)
        errors = {k: _rel(analytic[k], numeric[k]) for k in analytic}
        if max(errors.values()) <= rtol:
            break

    signs_ok = dg < 0 < d2g and de < 0 < d2e
    chain = _rel(de, dg / ((1.0 + gamma) * LN2))
    return DerivativeReport(mu, h, analytic, numeric, errors, method, signs_ok, chain)


def kappa_monotonicity_check(g1, g2, mu, xi_grid) -> list[SweepReport]:
    """``kappa`` and both of its components increase with the sum power."""
    xi_grid = _check_grid(xi_grid, "xi_grid")
    k, k1, k2, resid = [], [], [], []
    for xi in xi_grid:
        budget = PowerBudget(xi, mu)
        value = rates.kappa(g1, g2, budget)
        a, b = rates.kappa_components(g1, g2, budget)
        k.append(value)
        k1.append(a)
        k2.append(b)
        resid.append(abs(value - 1.0 - a - b))
    reports = [make_report("kappa_decomposition", "xi", xi_grid, resid, 1e-12)]
    if mu == 0.0:
        reports.append(make_report("kappa_unity", "xi", xi_grid, np.abs(np.asarray(k) - 1.0), 0.0))
        return reports
    reports += [
        monotone_report("kappa_increasing", "xi", xi_grid, k, increasing=True),
        monotone_report("kappa1_increasing", "xi", xi_grid, k1, increasing=True),
        monotone_report("kappa2_increasing", "xi", xi_grid, k2, increasing=True),
    ]
    return reports


# --- brute-force oracles ----------------------------------------------------


def _refined_grid_max(f_vec, f_scalar, lo, hi, n):
    points = np.linspace(lo, hi, n)
    a, b = grid_bracket(f_vec(points), points)
    return golden_max(f_scalar, a, b)


def hd_equal_slot_oracle(g1, g2, xi, n=10_000) -> float:
    """Equal-slot HD rate by grid search plus golden-section over ``xi1 in [0, 2*xi]``."""
    total = 2.0 * xi

    def snr(x1):
        return rates.hd_snr(g1, g2, x1, total - x1)

    _, best = _refined_grid_max(snr, snr, 0.0, total, n)
    return 0.5 * math.log1p(best) / LN2


def fd_oracle(g1, g2, xi, mu, n=10_000) -> float:
    """FD rate by grid search plus golden-section over ``xi1 in [0, xi]``."""

    def sinr(x1):
        return rates.fd_sinr(g1, g2, x1, xi - x1, mu)

    _, best = _refined_grid_max(sinr, sinr, 0.0, xi, n)
    return math.log1p(best) / LN2


def mu_threshold_bisection(g1, g2, xi, chi, iterations=200) -> float:
    """Solve ``eta_FD(mu) = chi`` for ``mu`` in (0, 1) by bisection on a log scale.

    Relies on the FD rate decreasing strictly in ``mu``.
    """
    lo, hi = math.log(1e-300), math.log1p(-1e-16)

    def excess(log_mu):
        return rates.fd_optimal_rate(g1, g2, PowerBudget(xi, math.exp(log_mu))).rate - chi

    if excess(lo) < 0 or excess(hi) > 0:
        raise NumericalError("threshold not bracketed in (0, 1)")
    for _ in range(iterations):
        mid = 0.5 * (lo + hi)
        if excess(mid) > 0:
            lo = mid
        else:
            hi = mid
        if hi - lo < 1e-15:
            break
    return math.exp(0.5 * (lo + hi))


def zeta_sweep(config: ScenarioConfig, theta_grid, hop=0):
    """Relative reflection contribution along a beamwidth sweep for one hop."""
    out = []
    geom = config.geometries()[hop]
    for theta in theta_grid:
        pattern = AntennaPattern(theta)
        out.append(channel(geom, pattern, config.ground).zeta)
    return np.asarray(out)
