"""Randers/Finsler geodesics, stationary-spacetime light rays and causality."""

from ._core import (
    ConfigError,
    DomainError,
    FinslerError,
    Metric,
    NotAGeodesicError,
    Problem,
    Spacetime,
    load_config,
    parse_config,
)

__all__ = [
    "ConfigError",
    "DomainError",
    "FinslerError",
    "Metric",
    "NotAGeodesicError",
    "Problem",
    "Spacetime",
    "load_config",
    "parse_config",
]

__version__ = "0.1.0"
