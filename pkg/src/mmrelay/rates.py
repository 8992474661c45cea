"""Achievable rates of direct, half-duplex AF and full-duplex AF transmission.

All powers are normalized to unit noise variance. Channel gains are power
gains ``|h|**2``. Rates are in bits/s/Hz.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from ._optimize import golden_max, grid_bracket
from .errors import InvalidParameterError, NumericalError

LN2 = math.log(2.0)


def db_to_linear(db):
    return 10.0 ** (np.asarray(db, dtype=float) / 10.0) if np.ndim(db) else 10.0 ** (float(db) / 10.0)


def linear_to_db(x):
    return 10.0 * np.log10(x)


@dataclass(frozen=True)
class PowerBudget:
    """Sum-power constraint ``xi`` and relay self-interference coefficient ``mu``.

    ``mu = 0`` stands for ideal self-interference cancellation and ``mu = 1``
    for none; the full-duplex rate itself needs ``0 < mu < 1``. Direct and
    half-duplex schemes ignore ``mu``.
    """

    xi: float
    mu: float = 0.0

    def __post_init__(self):
        xi, mu = float(self.xi), float(self.mu)
        if not math.isfinite(xi) or xi <= 0.0:
            raise InvalidParameterError(f"sum power xi must be positive, got {xi!r}")
        if not (0.0 <= mu <= 1.0):
            raise InvalidParameterError(f"self-interference mu must lie in [0, 1], got {mu!r}")
        object.__setattr__(self, "xi", xi)
        object.__setattr__(self, "mu", mu)

    @classmethod
    def from_db(cls, xi_db: float, mu_db: float | None = None) -> "PowerBudget":
        mu = 0.0 if mu_db is None else db_to_linear(mu_db)
        return cls(db_to_linear(xi_db), mu)


@dataclass(frozen=True)
class RateSolution:
    """Optimal operating point of one transmission scheme.

    ``beta`` is the fraction of time given to the source-to-relay phase
    (1 for full-duplex and direct transmission). ``snr`` is the end-to-end
    SNR or SINR at the destination and ``amp`` the relay gain.
    """

    rate: float
    xi1: float
    xi2: float
    beta: float
    snr: float
    amp: float
    warning: str | None = None

    def with_warning(self, warning: str | None) -> "RateSolution":
        return replace(self, warning=warning)


@dataclass(frozen=True)
class FdCoefficients:
    """Coefficients of the optimal FD SINR ``a0 / (a1 + xi*mu + a2*sqrt(1 + xi*mu))``."""

    a0: float
    a1: float
    a2: float

    @classmethod
    def from_gains(cls, g1: float, g2: float, xi: float) -> "FdCoefficients":
        return cls(
            a0=g1 * g2 * xi * xi,
            a1=2.0 + (g1 + g2) * xi,
            a2=2.0 * math.sqrt((1.0 + g1 * xi) * (1.0 + g2 * xi)),
        )


def _positive_gains(g1, g2):
    g1, g2 = float(g1), float(g2)
    if not (g1 > 0.0 and g2 > 0.0 and math.isfinite(g1) and math.isfinite(g2)):
        raise InvalidParameterError(f"channel gains must be positive, got g1={g1!r}, g2={g2!r}")
    return g1, g2


def capacity(s):
    """Shannon rate ``log2(1 + s)`` in bits/s/Hz; accepts arrays."""
    arr = np.asarray(s, dtype=float)
    if np.any(arr < 0) or np.any(np.isnan(arr)):
        raise InvalidParameterError("SNR must be non-negative")
    out = np.log1p(arr) / LN2
    return out if out.ndim else float(out)


def _c(s: float) -> float:
    return math.log1p(s) / LN2


def direct_rate(g_sd: float, budget: PowerBudget) -> RateSolution:
    """Single-hop source-to-destination rate using the whole power budget."""
    g_sd = float(g_sd)
    if g_sd < 0.0:
        raise InvalidParameterError("channel gain must be non-negative")
    snr = g_sd * budget.xi
    return RateSolution(rate=_c(snr), xi1=budget.xi, xi2=0.0, beta=1.0, snr=snr, amp=0.0)


# --- half-duplex -----------------------------------------------------------


def hd_snr(g1, g2, xi1, xi2):
    """End-to-end SNR of a half-duplex AF link for per-hop powers ``xi1, xi2``."""
    return g1 * g2 * xi1 * xi2 / (1.0 + g1 * xi1 + g2 * xi2)


def hd_equal_slot_rate(g1: float, g2: float, budget: PowerBudget) -> RateSolution:
    """Half-duplex AF with equal time slots and ``xi1 + xi2 = 2*xi``."""
    g1, g2 = _positive_gains(g1, g2)
    xi = budget.xi
    r1 = math.sqrt(1.0 + 2.0 * g1 * xi)
    r2 = math.sqrt(1.0 + 2.0 * g2 * xi)
    snr = 4.0 * g1 * g2 * xi * xi / (r1 + r2) ** 2
    if abs(g1 - g2) <= 1e-15 * max(g1, g2):
        xi1 = xi2 = xi
    else:
        xi1 = 2.0 * xi * r2 / (r1 + r2)
        xi2 = 2.0 * xi * r1 / (r1 + r2)
    amp = math.sqrt(xi2 / (g1 * xi1 + 1.0))
    return RateSolution(rate=0.5 * _c(snr), xi1=xi1, xi2=xi2, beta=0.5, snr=snr, amp=amp)


def hd_branches(beta, xi1, g1, g2, xi):
    """Throughput of the two hops for time share ``beta`` and source power ``xi1``.

    The relay power follows from ``beta*xi1 + (1-beta)*xi2 = xi``. Vectorized.
    Returns ``(first_hop, relayed)``.
    """
    beta = np.asarray(beta, dtype=float)
    xi1 = np.asarray(xi1, dtype=float)
    xi2 = np.maximum((xi - beta * xi1) / (1.0 - beta), 0.0)
    first = beta * np.log1p(g1 * xi1) / LN2
    second = (1.0 - beta) * np.log1p(hd_snr(g1, g2, xi1, xi2)) / LN2
    return first, second


def _hd_value(beta, xi1, g1, g2, xi):
    xi2 = max((xi - beta * xi1) / (1.0 - beta), 0.0)
    first = beta * _c(g1 * xi1)
    second = (1.0 - beta) * _c(hd_snr(g1, g2, xi1, xi2))
    return min(first, second)


_GRID = 400


def _hd_inner(beta, g1, g2, xi):
    """Best source power for a fixed time share; the min of branches is quasi-concave in xi1."""
    upper = xi / beta
    points = np.linspace(0.0, upper, _GRID)
    first, second = hd_branches(beta, points, g1, g2, xi)
    lo, hi = grid_bracket(np.minimum(first, second), points)
    return golden_max(lambda x: _hd_value(beta, x, g1, g2, xi), lo, hi)


def hd_certification_grid(g1, g2, xi, n=_GRID, delta=1e-6):
    """Brute-force ``n x n`` grid over ``(beta, xi1)``; returns ``(value, beta, xi1)``."""
    betas = np.linspace(delta, 1.0 - delta, n)[:, None]
    frac = np.linspace(0.0, 1.0, n)[None, :]
    xi1 = frac * xi / betas
    first, second = hd_branches(betas, xi1, g1, g2, xi)
    values = np.minimum(first, second)
    i, j = np.unravel_index(int(np.argmax(values)), values.shape)
    return float(values[i, j]), float(betas[i, 0]), float(xi1[i, j])


def _hd_solution(beta, xi1, g1, g2, xi):
    xi2 = max((xi - beta * xi1) / (1.0 - beta), 0.0)
    snr = hd_snr(g1, g2, xi1, xi2)
    return RateSolution(
        rate=_hd_value(beta, xi1, g1, g2, xi),
        xi1=xi1,
        xi2=xi2,
        beta=beta,
        snr=snr,
        amp=math.sqrt(xi2 / (g1 * xi1 + 1.0)),
    )


def hd_optimal_rate(
    g1: float, g2: float, budget: PowerBudget, tol: float = 1e-6, delta: float = 1e-6
) -> RateSolution:
    """Half-duplex AF rate with jointly optimized time share and power split.

    No closed form exists, so the problem is solved numerically: an outer
    golden-section search over ``beta`` in ``[delta, 1 - delta]`` on the
    value of an inner golden-section search over ``xi1``. Both searches are
    seeded by a grid that brackets the maximum. A final ``400 x 400`` grid
    pass over ``(beta, xi1)`` certifies that no grid point beats the result
    by more than ``tol`` (relative).

    Raises:
        NumericalError: when certification fails; ``err.best`` carries the
            best solution found.
    """
    g1, g2 = _positive_gains(g1, g2)
    if not (0.0 < tol <= 1e-3):
        raise InvalidParameterError("tol must lie in (0, 1e-3]")
    xi = budget.xi

    def outer(beta):
        return _hd_inner(beta, g1, g2, xi)[1]

    betas = np.linspace(delta, 1.0 - delta, 64)
    lo, hi = grid_bracket(np.array([outer(b) for b in betas]), betas)
    beta, _ = golden_max(outer, lo, hi, xtol=1e-12)
    xi1, _ = _hd_inner(beta, g1, g2, xi)
    best = _hd_solution(beta, xi1, g1, g2, xi)

    # beta = 1/2 with the equal-slot allocation is always feasible.
    half = hd_equal_slot_rate(g1, g2, budget)
    if half.rate > best.rate:
        best = half

    grid_value, grid_beta, grid_xi1 = hd_certification_grid(g1, g2, xi)
    if grid_value > best.rate * (1.0 + tol):
        b_lo = max(delta, grid_beta - 1.0 / _GRID)
        b_hi = min(1.0 - delta, grid_beta + 1.0 / _GRID)
        beta, _ = golden_max(outer, b_lo, b_hi, xtol=1e-12)
        xi1, _ = _hd_inner(beta, g1, g2, xi)
        retry = _hd_solution(beta, xi1, g1, g2, xi)
        if retry.rate > best.rate:
            best = retry
        if grid_value > best.rate * (1.0 + tol):
            raise NumericalError(
                f"HD solver beaten by certification grid ({grid_value:.12g} > {best.rate:.12g})",
                best=best,
            )
    return best


# --- full-duplex -----------------------------------------------------------


def fd_sinr(g1, g2, xi1, xi2, mu):
    """End-to-end SINR of a full-duplex AF link for per-hop powers ``xi1, xi2``."""
    return g1 * g2 * xi1 * xi2 / ((g2 * xi2 + 1.0) * (mu * xi2 + 1.0) + g1 * xi1)


def fd_denominator(g1, g2, xi, mu):
    """Denominator of the optimal FD SINR, ``2 + (g1+g2+mu)*xi + 2*sqrt(...)``."""
    return 2.0 + (g1 + g2 + mu) * xi + 2.0 * math.sqrt((1.0 + g1 * xi) * (1.0 + g2 * xi) * (1.0 + mu * xi))


def fd_denominator_completed_square(g1, g2, xi, mu):
    """Same denominator as :func:`fd_denominator`, written as a completed square.

    Loses relative precision when ``mu*g2*xi**2`` dominates.
    """
    s1 = math.sqrt(1.0 + g1 * xi)
    s2 = math.sqrt(1.0 + (mu + g2) * xi + mu * g2 * xi * xi)
    return (s1 + s2) ** 2 - mu * g2 * xi * xi


def fd_optimal_sinr(g1, g2, xi, mu):
    c = FdCoefficients.from_gains(g1, g2, xi)
    return c.a0 / (c.a1 + xi * mu + c.a2 * math.sqrt(1.0 + xi * mu))


def _check_mu(mu):
    if not (0.0 < mu < 1.0):
        raise InvalidParameterError(f"mu must lie in (0, 1), got {mu!r}")


def fd_rate_upper_limit(g1: float, g2: float, xi: float) -> RateSolution:
    """FD rate in the limit of perfect self-interference cancellation (``mu -> 0``)."""
    g1, g2 = _positive_gains(g1, g2)
    xi = PowerBudget(xi).xi
    c = FdCoefficients.from_gains(g1, g2, xi)
    snr = c.a0 / (c.a1 + c.a2)
    s1 = math.sqrt(1.0 + g1 * xi)
    s2 = math.sqrt(1.0 + g2 * xi)
    xi1 = xi * s2 / (s1 + s2)
    xi2 = xi * s1 / (s1 + s2)
    return RateSolution(
        rate=_c(snr), xi1=xi1, xi2=xi2, beta=1.0, snr=snr, amp=math.sqrt(xi2 / (xi1 * g1 + 1.0))
    )


def fd_optimal_rate(g1: float, g2: float, budget: PowerBudget) -> RateSolution:
    """Full-duplex AF rate with optimal split of ``xi1 + xi2 = xi``.

    ``budget.mu == 0`` is delegated to :func:`fd_rate_upper_limit`.
    """
    g1, g2 = _positive_gains(g1, g2)
    xi, mu = budget.xi, budget.mu
    if mu == 0.0:
        return fd_rate_upper_limit(g1, g2, xi)
    _check_mu(mu)
    snr = g1 * g2 * xi * xi / fd_denominator(g1, g2, xi, mu)
    s1 = math.sqrt(1.0 + g1 * xi)
    s2 = math.sqrt((1.0 + mu * xi) * (1.0 + g2 * xi))
    xi1 = xi * s2 / (s1 + s2)
    xi2 = xi * s1 / (s1 + s2)
    amp = math.sqrt(xi2 / (xi1 * g1 + 1.0 + mu * xi2))
    return RateSolution(rate=_c(snr), xi1=xi1, xi2=xi2, beta=1.0, snr=snr, amp=amp)


def kappa(g1: float, g2: float, budget: PowerBudget) -> float:
    """Ratio of the ``mu -> 0`` SINR limit to the achieved optimal FD SINR (>= 1)."""
    g1, g2 = _positive_gains(g1, g2)
    xi, mu = budget.xi, budget.mu
    c = FdCoefficients.from_gains(g1, g2, xi)
    return (c.a1 + xi * mu + c.a2 * math.sqrt(1.0 + xi * mu)) / (c.a1 + c.a2)


def kappa_components(g1: float, g2: float, budget: PowerBudget) -> tuple[float, float]:
    """Split ``kappa - 1`` into the linear-in-mu and square-root terms."""
    g1, g2 = _positive_gains(g1, g2)
    xi, mu = budget.xi, budget.mu
    r1 = math.sqrt(1.0 + g1 * xi)
    r2 = math.sqrt(1.0 + g2 * xi)
    denom = (r1 + r2) ** 2
    k1 = xi * mu / denom
    # sqrt(1 + x) - 1 without cancellation for small x
    k2 = 2.0 * r1 * r2 * (xi * mu / (math.sqrt(1.0 + xi * mu) + 1.0)) / denom
    return k1, k2


def fd_sinr_mu_derivatives(g1, g2, xi, mu):
    """Optimal FD SINR and its first two partial derivatives in ``mu``.

    Returns ``(gamma, d_gamma, d2_gamma)``.
    """
    c = FdCoefficients.from_gains(g1, g2, xi)
    v = math.sqrt(1.0 + xi * mu)
    denom = c.a1 + xi * mu + c.a2 * v
    gamma = c.a0 / denom
    d1 = -xi * c.a0 * (1.0 + c.a2 / (2.0 * v)) / denom**2
    num = 3.0 * c.a2**2 * v + 8.0 * v**3 + c.a2 * (8.0 + c.a1 + 9.0 * xi * mu)
    d2 = xi * xi * c.a0 * num / (4.0 * v**3 * denom**3)
    return gamma, d1, d2


def fd_rate_mu_derivatives(g1, g2, xi, mu):
    """Optimal FD rate and its first two partial derivatives in ``mu`` (chain rule)."""
    gamma, d1, d2 = fd_sinr_mu_derivatives(g1, g2, xi, mu)
    first = d1 / ((1.0 + gamma) * LN2)
    second = d2 / ((1.0 + gamma) * LN2) - d1 * d1 / ((1.0 + gamma) ** 2 * LN2)
    return _c(gamma), first, second


@dataclass(frozen=True)
class MuFeasibleSet:
    """Self-interference levels for which the FD rate stays at or below ``chi``.

    ``kind`` is ``"all"`` (every ``mu`` in (0, 1)), ``"interval"``
    (``[mu_low, 1)``) or ``"empty"``.
    """

    kind: str
    psi: float
    mu_low: float | None = None

    def contains(self, mu: float) -> bool:
        if self.kind == "all":
            return 0.0 < mu < 1.0
        if self.kind == "interval":
            return self.mu_low <= mu < 1.0
        return False


def fd_mu_feasible_set(g1: float, g2: float, xi: float, chi: float) -> MuFeasibleSet:
    """Classify the ``mu`` values in (0, 1) for which the optimal FD rate is ``<= chi``.

    The statistic ``psi`` is the smallest ``sqrt(1 + xi*mu)`` meeting the
    threshold; the rate is monotone decreasing in ``mu``.
    """
    g1, g2 = _positive_gains(g1, g2)
    xi = PowerBudget(xi).xi
    chi = float(chi)
    if not chi >= 0.0:
        raise InvalidParameterError(f"rate threshold chi must be non-negative, got {chi!r}")
    target = math.expm1(chi * LN2)
    if target == 0.0:
        psi = math.inf
    else:
        psi = xi * math.sqrt(g1 * g2 * (1.0 + 1.0 / target)) - math.sqrt((1.0 + g1 * xi) * (1.0 + g2 * xi))
    if psi <= 1.0:
        return MuFeasibleSet("all", psi)
    if psi < math.sqrt(1.0 + xi):
        return MuFeasibleSet("interval", psi, (psi - 1.0) * (psi + 1.0) / xi)
    return MuFeasibleSet("empty", psi)
