"""Shared numerical substrate: quadrature, root finding and ODE integration."""

from .ode import (IntegrationError, IntegratorConfig, SettlingReport, Trajectory, Verdict,
                  integrate, settle_time_tolerance)
from .quadrature import QuadratureError, QuadratureResult, quad
from .roots import RootError, RootResult, root_bracketed

__all__ = [
    "IntegrationError",
    "IntegratorConfig",
    "SettlingReport",
    "Trajectory",
    "Verdict",
    "integrate",
    "settle_time_tolerance",
    "QuadratureError",
    "QuadratureResult",
    "quad",
    "RootError",
    "RootResult",
    "root_bracketed",
]
