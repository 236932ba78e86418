"""Geodesics and curve lengths, used as numerical completeness probes."""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from . import diffengine
from .cmap.metric import QkPoint, metric_field
from .curvature import christoffel
from .errors import DomainError, GeometryError, PreconditionError
from .special_kahler import PskPoint, base_metric_field, check_domain

__all__ = [
    "Termination",
    "GeodesicState",
    "Trajectory",
    "geodesic_integrate",
    "energy",
    "curve_length",
    "radial_samples",
    "radial_divergence_probe",
    "radial_length_exact",
    "base_boundary_length",
    "BASE_BOUNDARY_C",
]

# Offset in the base-boundary estimate length >= |log delta| / 2 - C.  On the
# complex hyperbolic line the exact length is log((2 - delta) / delta) / 2,
# so C = 0 already works.
BASE_BOUNDARY_C = 0.0


class Termination(enum.Enum):
    TIME_ELAPSED = "time elapsed"
    LEFT_DOMAIN = "left domain"
    STEP_UNDERFLOW = "step underflow"


@dataclass(frozen=True, eq=False)
class GeodesicState:
    position: np.ndarray
    velocity: np.ndarray
    t: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "position", diffengine.as_chart_point(self.position))
        v = np.array(self.velocity, dtype=float).reshape(-1)
        if v.shape != self.position.shape:
            raise ValueError("velocity and position must have the same dimension")
        object.__setattr__(self, "velocity", v)
        object.__setattr__(self, "t", float(self.t))


@dataclass(frozen=True, eq=False)
class Trajectory:
    samples: list
    termination: Termination

    @property
    def final(self) -> GeodesicState:
        return self.samples[-1]

    @property
    def times(self) -> np.ndarray:
        return np.array([s.t for s in self.samples])

    @property
    def positions(self) -> np.ndarray:
        return np.array([s.position for s in self.samples])


def energy(gf, state: GeodesicState) -> float:
    """``g(v, v)`` at the state's position."""
    return float(state.velocity @ gf(state.position) @ state.velocity)


def _acceleration(gf, x, v):
    gamma = christoffel(gf, x)
    return -np.einsum("ijk,j,k->i", gamma, v, v)


def geodesic_integrate(gf, state0: GeodesicState, T: float, steps: int) -> Trajectory:
    """Integrate ``x'' + Gamma(x', x') = 0`` with ``steps`` classical RK4 steps up to time ``T``.

    Integration stops early (``LEFT_DOMAIN``) when any stage, including its
    finite-difference stencil, hits a domain or evaluation error.
    """
    if steps < 1 or not T > 0:
        raise ValueError("need steps >= 1 and T > 0")
    try:
        gf(state0.position)
        acc = _acceleration(gf, state0.position, state0.velocity)
    except GeometryError as exc:
        raise DomainError(f"initial point is outside the domain: {exc}") from exc

    dt = T / steps
    samples = [state0]
    x, v, t = state0.position, state0.velocity, state0.t
    for _ in range(steps):
        if t + dt == t:
            return Trajectory(samples, Termination.STEP_UNDERFLOW)
        try:
            k1x, k1v = v, acc
            k2x = v + 0.5 * dt * k1v
            k2v = _acceleration(gf, x + 0.5 * dt * k1x, k2x)
            k3x = v + 0.5 * dt * k2v
            k3v = _acceleration(gf, x + 0.5 * dt * k2x, k3x)
            k4x = v + dt * k3v
            k4v = _acceleration(gf, x + dt * k3x, k4x)
            x_new = x + dt / 6.0 * (k1x + 2 * k2x + 2 * k3x + k4x)
            v_new = v + dt / 6.0 * (k1v + 2 * k2v + 2 * k3v + k4v)
            acc = _acceleration(gf, x_new, v_new)
        except GeometryError:
            return Trajectory(samples, Termination.LEFT_DOMAIN)
        x, v, t = x_new, v_new, t + dt
        samples.append(GeodesicState(x, v, t))
    return Trajectory(samples, Termination.TIME_ELAPSED)


def curve_length(gf, samples) -> float:
    """Trapezoidal length of the polygon through ``samples``.

    Each chord ``D = p_{a+1} - p_a`` contributes the mean of ``sqrt(g(D, D))``
    evaluated at its two endpoints.
    """
    pts = np.array(samples, dtype=float)
    if pts.ndim == 1:
        pts = pts[:, None]
    if len(pts) < 2:
        raise ValueError("need at least two samples")
    try:
        metrics = [gf(p) for p in pts]
    except GeometryError as exc:
        raise DomainError(f"a sample lies outside the domain: {exc}") from exc
    total = 0.0
    for a in range(len(pts) - 1):
        d = pts[a + 1] - pts[a]
        total += 0.5 * (np.sqrt(max(d @ metrics[a] @ d, 0.0)) + np.sqrt(max(d @ metrics[a + 1] @ d, 0.0)))
    return float(total)


def radial_samples(q_base: QkPoint, rho0: float, eps: float, count: int) -> np.ndarray:
    """Chart points along the rho-segment from ``rho0`` down to ``eps``, log-spaced."""
    L = q_base.layout
    out = np.tile(q_base.chart, (count, 1))
    out[:, L.rho] = np.geomspace(rho0, eps, count)
    return out


def radial_length_exact(c: float, rho0: float, eps: float) -> float:
    """Closed-form integral of ``sqrt((r + 2c) / (r + c)) / (2r)`` over ``[eps, rho0]``."""

    def antiderivative(r):
        s = np.sqrt((r + 2 * c) / (r + c))
        # log((s+1)/(s-1)) with the constant -log(c) dropped, so c -> 0 stays finite
        return 0.5 * (2 * np.log(s + 1) + np.log(r + c) + np.sqrt(2) * np.log((np.sqrt(2) - s) / (np.sqrt(2) + s)))

    return float(antiderivative(rho0) - antiderivative(eps))


def radial_divergence_probe(model, c: float, rho0: float, eps: float, q_base: QkPoint, count: int = 4001):
    """Length of the rho-segment ``rho0 -> eps`` and the bound ``log(rho0 / eps) / 2``.

    All other coordinates are taken from ``q_base``.  The metric's
    ``drho^2`` coefficient is ``(rho + 2c) / (4 rho^2 (rho + c))``, which is
    at least ``1 / 4rho^2`` for ``c >= 0``.
    """
    if not 0 < eps < rho0:
        raise PreconditionError(f"need 0 < eps < rho0, got eps = {eps}, rho0 = {rho0}")
    length = curve_length(metric_field(model, c), radial_samples(q_base, rho0, eps, count))
    bound = 0.5 * np.log(rho0 / eps)
    if length < bound - 1e-6:
        raise AssertionError(f"radial length {length} is below the bound {bound}")
    return length, float(bound)


def base_boundary_length(model, delta: float, direction=None, count: int = 4001) -> float:
    """Base-metric length of the straight segment ``X: 0 -> (1 - delta) e``.

    Samples accumulate towards the boundary: ``1 - t`` is log-spaced from
    ``1`` to ``delta``.
    """
    if not 0 < delta < 1:
        raise PreconditionError("delta must lie in (0, 1)")
    n = model.n
    e = np.zeros(n, complex) if direction is None else np.asarray(direction, complex)
    if direction is None:
        e[0] = 1.0
    e = e / np.linalg.norm(e)
    t = 1.0 - np.geomspace(1.0, delta, count)
    pts = [PskPoint(s * e).chart for s in t]
    check_domain(model, PskPoint(t[-1] * e))
    return curve_length(base_metric_field(model), pts)
