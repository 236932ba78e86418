"""Reference metrics with known curvature, used to validate the engines."""

from __future__ import annotations

import numpy as np

from .diffengine import MetricField
from .errors import DomainError

__all__ = ["flat", "hyperbolic_half_plane", "round_sphere"]


def flat(dim: int = 2) -> MetricField:
    return MetricField(lambda p: np.eye(dim), dim, f"flat R^{dim}")


def _half_plane(p):
    x, y = p
    if not y > 0:
        raise DomainError(f"half-plane needs y > 0, got y = {y}")
    return np.eye(2) / y**2


def hyperbolic_half_plane() -> MetricField:
    """``(dx^2 + dy^2) / y^2`` in the chart ``(x, y)``, curvature -1."""
    return MetricField(_half_plane, 2, "hyperbolic half-plane")


def _sphere(p):
    theta, _ = p
    return np.diag([1.0, np.sin(theta) ** 2])


def round_sphere() -> MetricField:
    """Unit two-sphere in ``(theta, phi)``, scalar curvature +2."""
    return MetricField(_sphere, 2, "round sphere")
