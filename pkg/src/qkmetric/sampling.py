"""Seeded random points inside the model domains."""

from __future__ import annotations

import numpy as np

from .cmap.metric import QkPoint
from .errors import ConfigError, DomainError
from .prepotential import Quadratic, special_matrices
from .special_kahler import PskPoint, base_metric, check_domain

__all__ = ["random_base_point", "random_base_points", "random_qk_points", "MAX_TRIES", "MAX_BASE_CONDITION", "MAX_FIBRE_CONDITION"]

MAX_TRIES = 10_000
# finite-difference tolerances assume well-conditioned metrics, so points
# hugging the boundary of the cubic cone are rejected
MAX_BASE_CONDITION = 100.0
MAX_FIBRE_CONDITION = 1e4


def random_base_point(model, rng: np.random.Generator, radius: float = 0.8) -> PskPoint:
    """A domain point; ``|X| < radius`` for quadratic models.

    Cubic models are rejection sampled with ``y`` in ``[-1, 1]^n`` and
    ``x`` in ``[-2, 2]^n``; ``|x| >= 0.3`` keeps away from the cone tip and
    the base metric and the fibre matrix ``Hhat`` must be well conditioned
    (``MAX_BASE_CONDITION``, ``MAX_FIBRE_CONDITION``).
    """
    n = model.n
    if n == 0:
        return PskPoint(np.zeros(0))
    if isinstance(model, Quadratic):
        v = rng.normal(size=2 * n)
        v *= radius * rng.uniform() ** (1 / (2 * n)) / np.linalg.norm(v)
        return PskPoint(v[:n] + 1j * v[n:])
    for _ in range(MAX_TRIES):
        y = rng.uniform(-1, 1, n)
        x = rng.uniform(-2, 2, n)
        if np.linalg.norm(x) < 0.3:
            continue
        try:
            p = check_domain(model, PskPoint(y + 1j * x))
        except DomainError:
            continue
        if (
            np.linalg.cond(base_metric(model, p)) <= MAX_BASE_CONDITION
            and np.linalg.cond(special_matrices(model, p.z).Hhat) <= MAX_FIBRE_CONDITION
        ):
            return p
    raise ConfigError(f"no domain point found in {MAX_TRIES} tries; is the cubic form hyperbolic anywhere?")


def random_base_points(model, count: int, rng, radius: float = 0.8) -> list[PskPoint]:
    return [random_base_point(model, rng, radius) for _ in range(count)]


def random_qk_points(model, count: int, rng, rho_range=(0.5, 2.0), fibre_box: float = 1.0, rho=None) -> list[QkPoint]:
    """Random chart points; ``rho`` (a number) overrides ``rho_range``."""
    out = []
    n1 = model.n + 1
    for _ in range(count):
        base = random_base_point(model, rng)
        r = float(rho) if rho is not None else rng.uniform(*rho_range)
        phi = rng.uniform(-fibre_box, fibre_box)
        zt = rng.uniform(-fibre_box, fibre_box, n1)
        z = rng.uniform(-fibre_box, fibre_box, n1)
        out.append(QkPoint(base.X, r, phi, zt, z))
    return out
