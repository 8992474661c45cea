"""Two-ray ground-reflection channel between two directional antennas.

The channel coefficient superposes a line-of-sight ray and one ground
reflected ray. Both share the line-of-sight spreading loss; the reflected
ray is weighted by the antenna gain toward the reflection angle, the
Fresnel-type reflection coefficient, ``cos(theta)`` and a phase term from
the path-length difference.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from enum import Enum

from . import antenna
from .antenna import AntennaPattern, NORMALIZATION_SLOPE, SIDELOBE_RATIO, LOBE_EXPONENT
from .errors import InvalidGeometryError, InvalidParameterError

#: ``42.6443 / (2*pi)``; turns the antenna prefactor into ``1 / (1 + tau*theta_m)``.
TAU = NORMALIZATION_SLOPE / (2.0 * math.pi)


class Polarization(str, Enum):
    PERPENDICULAR = "perpendicular"
    HORIZONTAL = "horizontal"


@dataclass(frozen=True)
class LinkGeometry:
    """Heights and horizontal separation of one hop, all in meters."""

    h_tx: float
    h_rx: float
    l: float
    wavelength: float

    def __post_init__(self):
        for name in ("h_tx", "h_rx", "l", "wavelength"):
            value = float(getattr(self, name))
            if not math.isfinite(value):
                raise InvalidGeometryError(f"{name} must be finite, got {value!r}")
            object.__setattr__(self, name, value)
        if self.h_tx < 0 or self.h_rx < 0:
            raise InvalidGeometryError("antenna heights must be non-negative")
        if self.l <= 0:
            raise InvalidGeometryError(f"horizontal separation l must be positive, got {self.l!r}")
        if self.wavelength <= 0:
            raise InvalidGeometryError("wavelength must be positive")

    @property
    def los_length(self) -> float:
        return math.hypot(self.h_tx - self.h_rx, self.l)

    @property
    def reflected_length(self) -> float:
        return math.hypot(self.h_tx + self.h_rx, self.l)


@dataclass(frozen=True)
class GroundModel:
    """Reflective ground with relative dielectric constant ``omega``."""

    omega: float = 15.0
    polarization: Polarization = Polarization.PERPENDICULAR

    def __post_init__(self):
        omega = float(self.omega)
        # omega == 1 is the vacuum limit; still yields a real, positive impedance.
        if not math.isfinite(omega) or omega < 1.0:
            raise InvalidParameterError(f"omega must be >= 1, got {omega!r}")
        object.__setattr__(self, "omega", omega)
        object.__setattr__(self, "polarization", Polarization(self.polarization))


@dataclass(frozen=True)
class TwoRayChannel:
    """Channel coefficient of one hop and its decomposition.

    ``g_ratio_form`` is the same power gain recomputed from the ``(b, z, tau)``
    parametrization; it should agree with ``g`` to rounding error.
    """

    h_los: complex
    h_ref: complex
    h: complex
    g: float
    g_los: float
    g_ref: float
    zeta: float
    z: complex
    b: float
    theta: float
    delta_phi: float
    g_ratio_form: float
    warning: str | None = None


def reflection_angle(geom: LinkGeometry) -> float:
    """Grazing angle of the ground-reflected ray, ``arctan((h_tx + h_rx) / l)``.

    Raises:
        InvalidGeometryError: for ``l == 0`` or when both heights are zero
            (the reflected ray then coincides with the LOS ray).
    """
    if geom.l <= 0:
        raise InvalidGeometryError("l must be positive")
    if geom.h_tx + geom.h_rx == 0.0:
        raise InvalidGeometryError("degenerate geometry: zero heights give no distinct reflected ray")
    return math.atan((geom.h_tx + geom.h_rx) / geom.l)


def surface_impedance(theta: float, ground: GroundModel) -> float:
    """Normalized ground impedance for the given polarization."""
    theta = float(theta)
    if not 0.0 < theta <= math.pi / 2:
        raise InvalidParameterError(f"theta must lie in (0, pi/2], got {theta!r}")
    arg = ground.omega - math.cos(theta) ** 2
    if arg <= 0.0:
        raise InvalidParameterError("omega must exceed cos(theta)**2")
    root = math.sqrt(arg)
    if ground.polarization is Polarization.PERPENDICULAR:
        return root / ground.omega
    return root


def reflection_coefficient(theta: float, ground: GroundModel) -> float:
    """Ground reflection coefficient ``(sin t - Z) / (sin t + Z)`` in ``[-1, 1]``."""
    z = surface_impedance(theta, ground)
    s = math.sin(theta)
    return (s - z) / (s + z)


def phase_difference(geom: LinkGeometry) -> float:
    """Unwrapped phase lag of the reflected ray relative to the LOS ray, radians."""
    # Difference of hypotenuses rewritten to avoid cancellation when l >> heights.
    d_ref, d_los = geom.reflected_length, geom.los_length
    delta = 4.0 * geom.h_tx * geom.h_rx / (d_ref + d_los)
    return 2.0 * math.pi / geom.wavelength * delta


def los_only_gain(geom: LinkGeometry, pattern: AntennaPattern) -> float:
    """Power gain of the line-of-sight ray alone (the "1-ray" model)."""
    amp = geom.wavelength * pattern.peak_gain / (4.0 * math.pi * geom.los_length)
    return amp * amp


def _lobe_power(theta: float, pattern: AntennaPattern) -> float:
    return min(1.0, (2.0 * theta / pattern.theta_m) ** 2)


def relative_contribution(ch: TwoRayChannel, pattern: AntennaPattern) -> float:
    """Reflected-to-LOS power ratio ``eps**(2*min(1, (2*theta/theta_m)**2)) * |z|**2``."""
    return SIDELOBE_RATIO ** (2.0 * _lobe_power(ch.theta, pattern)) * abs(ch.z) ** 2


def channel(
    geom: LinkGeometry,
    pattern: AntennaPattern,
    ground: GroundModel,
    *,
    gamma: float | None = None,
) -> TwoRayChannel:
    """Evaluate the two-ray channel of one hop.

    Args:
        geom: hop geometry.
        pattern: antenna pattern used at both ends of the hop.
        ground: ground dielectric model.
        gamma: optional override for the reflection coefficient, e.g. ``0.0``
            to suppress the reflected ray.
    """
    theta = reflection_angle(geom)
    refl = reflection_coefficient(theta, ground) if gamma is None else float(gamma)
    dphi = phase_difference(geom)

    d_los = geom.los_length
    scale = geom.wavelength / (4.0 * math.pi * d_los)
    # Reduce before exponentiating; dphi is hundreds of radians at mm-wave.
    z = refl * math.cos(theta) * cmath.exp(-1j * math.remainder(dphi, 2.0 * math.pi))

    h_los = complex(scale * antenna.gain(pattern, 0.0))
    h_ref = scale * antenna.gain(pattern, theta) * z
    h = h_los + h_ref
    g = abs(h) ** 2
    g_los = abs(h_los) ** 2
    g_ref = abs(h_ref) ** 2

    b = scale * 10.0**LOBE_EXPONENT
    weight = SIDELOBE_RATIO ** _lobe_power(theta, pattern)
    g_ratio_form = (b / (1.0 + TAU * pattern.theta_m)) ** 2 * abs(1.0 + z * weight) ** 2

    return TwoRayChannel(
        h_los=h_los,
        h_ref=h_ref,
        h=h,
        g=g,
        g_los=g_los,
        g_ref=g_ref,
        zeta=g_ref / g_los,
        z=z,
        b=b,
        theta=theta,
        delta_phi=dphi,
        g_ratio_form=g_ratio_form,
        warning=pattern.warning,
    )
