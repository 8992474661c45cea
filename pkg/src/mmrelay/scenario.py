"""Collinear source-relay-destination deployment used by the figures and checks."""

from __future__ import annotations

import math
from dataclasses import dataclass, fields, replace

from .antenna import AntennaPattern
from .channel import GroundModel, LinkGeometry, Polarization, TwoRayChannel, channel, los_only_gain
from .errors import InvalidParameterError
from .rates import PowerBudget, db_to_linear


class ConfigError(InvalidParameterError):
    """Invalid scenario field; ``field`` names the offending attribute."""

    def __init__(self, field, message):
        super().__init__(f"{field}: {message}")
        self.field = field


@dataclass(frozen=True)
class ScenarioConfig:
    """Nodes at a common height ``height`` on a line, relay at ``l1`` from the source.

    Defaults follow the reference setting: 5 mm wavelength, 5 m height,
    200 m source-destination distance, ground dielectric constant 15.
    """

    wavelength: float = 5e-3
    height: float = 5.0
    distance: float = 200.0
    l1: float = 80.0
    theta_m: float = math.pi / 6
    mu_db: float = -90.0
    xi_db: float = 100.0
    polarization: Polarization = Polarization.PERPENDICULAR
    omega: float = 15.0

    def __post_init__(self):
        for f in fields(self):
            if f.name == "polarization":
                continue
            value = getattr(self, f.name)
            if not isinstance(value, (int, float)) or not math.isfinite(value):
                raise ConfigError(f.name, f"must be a finite number, got {value!r}")
        if self.wavelength <= 0:
            raise ConfigError("wavelength", "must be positive")
        if self.height < 0:
            raise ConfigError("height", "must be non-negative")
        if self.distance <= 0:
            raise ConfigError("distance", "must be positive")
        if not 0 < self.l1 < self.distance:
            raise ConfigError("l1", f"must satisfy 0 < l1 < distance ({self.distance}), got {self.l1}")
        if self.theta_m <= 0:
            raise ConfigError("theta_m", "must be positive")
        if self.mu_db >= 0:
            raise ConfigError("mu_db", "self-interference must be below 0 dB")
        if self.omega < 1:
            raise ConfigError("omega", "must be >= 1")
        try:
            object.__setattr__(self, "polarization", Polarization(self.polarization))
        except ValueError:
            raise ConfigError("polarization", f"unknown polarization {self.polarization!r}") from None

    def with_(self, **changes) -> "ScenarioConfig":
        return replace(self, **changes)

    @property
    def l2(self) -> float:
        return self.distance - self.l1

    @property
    def ground(self) -> GroundModel:
        return GroundModel(self.omega, self.polarization)

    def pattern(self, theta_m: float | None = None) -> AntennaPattern:
        return AntennaPattern(self.theta_m if theta_m is None else theta_m)

    def geometries(self) -> tuple[LinkGeometry, LinkGeometry, LinkGeometry]:
        """Source-relay, relay-destination and direct source-destination geometry."""
        h, lam = self.height, self.wavelength
        return (
            LinkGeometry(h, h, self.l1, lam),
            LinkGeometry(h, h, self.l2, lam),
            LinkGeometry(h, h, self.distance, lam),
        )

    def channels(self, theta_m: float | None = None) -> tuple[TwoRayChannel, TwoRayChannel, TwoRayChannel]:
        pattern = self.pattern(theta_m)
        return tuple(channel(geom, pattern, self.ground) for geom in self.geometries())

    def gains(self, theta_m: float | None = None, two_ray: bool = True) -> tuple[float, float, float]:
        """Power gains ``(g1, g2, g_sd)``; ``two_ray=False`` keeps the LOS ray only."""
        if two_ray:
            return tuple(ch.g for ch in self.channels(theta_m))
        pattern = self.pattern(theta_m)
        return tuple(los_only_gain(geom, pattern) for geom in self.geometries())

    def budget(self, xi_db: float | None = None, mu_db: float | None = None) -> PowerBudget:
        xi_db = self.xi_db if xi_db is None else xi_db
        mu_db = self.mu_db if mu_db is None else mu_db
        return PowerBudget(db_to_linear(xi_db), db_to_linear(mu_db))
