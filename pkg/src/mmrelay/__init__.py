"""Rates of two-hop amplify-and-forward mm-wave relaying over a two-ray channel."""

from .antenna import AntennaPattern
from .channel import GroundModel, LinkGeometry, Polarization, TwoRayChannel, channel
from .errors import InvalidGeometryError, InvalidParameterError, NumericalError
from .rates import (
    PowerBudget,
    RateSolution,
    direct_rate,
    fd_optimal_rate,
    fd_rate_upper_limit,
    hd_equal_slot_rate,
    hd_optimal_rate,
)
from .scenario import ScenarioConfig

__all__ = [
    "AntennaPattern",
    "GroundModel",
    "InvalidGeometryError",
    "InvalidParameterError",
    "LinkGeometry",
    "NumericalError",
    "Polarization",
    "PowerBudget",
    "RateSolution",
    "ScenarioConfig",
    "TwoRayChannel",
    "channel",
    "direct_rate",
    "fd_optimal_rate",
    "fd_rate_upper_limit",
    "hd_equal_slot_rate",
    "hd_optimal_rate",
]
