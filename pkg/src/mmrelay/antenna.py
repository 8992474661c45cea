"""Gaussian-type directional antenna with total-power normalization.

The main lobe decays as ``10**(2.028 * (1 - (2*phi/theta_m)**2))`` and
flattens into a constant side-lobe floor for ``|phi| >= theta_m / 2``.
The floor is chosen so that the gain integrates to ``2*pi`` over a full
turn.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from .errors import InvalidParameterError, NumericalError

#: Main-lobe peak exponent, i.e. ``0.3 * 2.6**2``.
LOBE_EXPONENT = 2.028
#: Side-lobe to main-lobe gain ratio.
SIDELOBE_RATIO = 10.0 ** (-LOBE_EXPONENT)
#: Empirical ratio between main-lobe and half-power beamwidth.
BEAMWIDTH_RATIO = 2.6
#: Reduced normalization constant, ``V(theta_m, theta_m / 2.6) / theta_m - 1``.
NORMALIZATION_SLOPE = 42.6443
#: Beamwidth range over which the 2.6 ratio was measured.
VALID_THETA_M = (math.pi / 12, math.pi / 3)


def _check_beamwidth(value: float, name: str) -> float:
    value = float(value)
    if not math.isfinite(value) or value <= 0.0:
        raise InvalidParameterError(f"{name} must be finite and positive, got {value!r}")
    return value


@dataclass(frozen=True)
class AntennaPattern:
    """Gaussian-type antenna characterized by its main-lobe beamwidth.

    Args:
        theta_m: main-lobe beamwidth in radians.
    """

    theta_m: float

    def __post_init__(self):
        object.__setattr__(self, "theta_m", _check_beamwidth(self.theta_m, "theta_m"))

    @property
    def theta_h(self) -> float:
        """Half-power beamwidth in radians."""
        return self.theta_m / BEAMWIDTH_RATIO

    @property
    def sidelobe_ratio(self) -> float:
        return SIDELOBE_RATIO

    @property
    def prefactor(self) -> float:
        """Side-lobe floor gain, ``2*pi / (2*pi + 42.6443*theta_m)``."""
        return 2.0 * math.pi / (2.0 * math.pi + NORMALIZATION_SLOPE * self.theta_m)

    @property
    def peak_gain(self) -> float:
        return self.prefactor * 10.0**LOBE_EXPONENT

    @property
    def warning(self) -> str | None:
        """Message when ``theta_m`` lies outside the empirically validated range."""
        lo, hi = VALID_THETA_M
        if lo <= self.theta_m <= hi:
            return None
        return (
            f"theta_m={self.theta_m:.6g} rad outside [pi/12, pi/3]; "
            "the 2.6 beamwidth ratio is extrapolated"
        )

    def gain(self, phi):
        return gain(self, phi)


def wrap_angle(phi):
    """Reduce angles into ``[-pi, pi)``.

    Uses round-half-to-even on the number of turns so the result does not
    depend on platform rounding mode.
    """
    phi = np.asarray(phi, dtype=float)
    two_pi = 2.0 * math.pi
    wrapped = phi - two_pi * np.round(phi / two_pi)
    wrapped = np.where(wrapped >= math.pi, wrapped - two_pi, wrapped)
    wrapped = np.where(wrapped < -math.pi, wrapped + two_pi, wrapped)
    return wrapped if wrapped.ndim else float(wrapped)


def gain(pattern: AntennaPattern, phi):
    """Antenna gain at orientation ``phi`` (radians) relative to boresight.

    Accepts scalars or arrays. Angles are wrapped into ``[-pi, pi)`` first.
    """
    phi = np.asarray(phi, dtype=float)
    if not np.all(np.isfinite(phi)):
        raise InvalidParameterError("phi must be finite")
    reduced = np.asarray(wrap_angle(phi))
    exponent = LOBE_EXPONENT * np.maximum(1.0 - (2.0 * reduced / pattern.theta_m) ** 2, 0.0)
    value = pattern.prefactor * np.power(10.0, exponent)
    return value if value.ndim else float(value)


def gain_from_ratio(pattern: AntennaPattern, phi: float) -> float:
    """Gain via ``G(0) * eps**min(1, (2*phi/theta_m)**2)``.

    Algebraically identical to :func:`gain`; used by the channel-gain rewrite.
    """
    phi = float(wrap_angle(phi))
    power = min(1.0, (2.0 * phi / pattern.theta_m) ** 2)
    return pattern.peak_gain * SIDELOBE_RATIO**power


def normalization_integral(theta_m: float, theta_h: float) -> float:
    """Main-lobe integral ``V = int_0^theta_m 10**(0.3*(theta_m**2 - x**2)/theta_h**2) dx``.

    Raises:
        NumericalError: if the quadrature error estimate exceeds ``1e-8`` relative.
    """
    theta_m = _check_beamwidth(theta_m, "theta_m")
    theta_h = _check_beamwidth(theta_h, "theta_h")
    scale = 0.3 / theta_h**2

    value, abserr = integrate.quad(
        lambda x: 10.0 ** (scale * (theta_m**2 - x * x)),
        0.0,
        theta_m,
        epsabs=0.0,
        epsrel=1e-12,
        limit=200,
    )
    if not math.isfinite(value) or abserr > 1e-8 * abs(value):
        raise NumericalError(f"main-lobe quadrature did not converge (err={abserr:g})", best=value)
    return value


def total_radiated_power(pattern: AntennaPattern) -> float:
    """Integral of the gain over ``[-pi, pi)``; equals ``2*pi`` up to constant rounding."""
    half = min(pattern.theta_m / 2.0, math.pi)
    breaks = [-half, half] if half < math.pi else None
    value, abserr = integrate.quad(
        lambda x: gain(pattern, x),
        -math.pi,
        math.pi,
        points=breaks,
        epsabs=0.0,
        epsrel=1e-12,
        limit=200,
    )
    if abserr > 1e-8 * abs(value):
        raise NumericalError("radiated-power quadrature did not converge", best=value)
    return value
