"""The projective special Kähler base in inhomogeneous coordinates.

Points are ``X in C^n`` with ``X^0 := 1``.  The real chart is ordered
``(y^1..y^n, x^1..x^n)`` with ``X = y + i x``.  The complex structure acts by
``J d/dy = d/dx``, and ``d^c = -J^* d`` on functions.

The Hermitian-to-real dictionary used throughout:
``g(d/dy_a, d/dy_b) = g(d/dx_a, d/dx_b) = Re K_{a b~}`` and
``g(d/dy_a, d/dx_b) = Im K_{a b~}``, where ``K_{a b~} = d^2 K / dX^a dconj(X^b)``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import diffengine
from .errors import DomainError, ModelViolationError, SingularityError
from .prepotential import CubicForm, Quadratic, VerySpecial, special_matrices

__all__ = [
    "PskPoint",
    "DC_SIGN",
    "check_domain",
    "kahler_potential",
    "kahler_potential_cubic",
    "holomorphic_gradient",
    "complex_hessian",
    "complex_hessian_cubic",
    "complex_hessian_fd",
    "hermitian_to_real",
    "base_metric",
    "base_metric_fd",
    "base_metric_field",
    "base_metric_chn",
    "base_metric_inverse_cubic",
    "dc_potential",
    "gtilde",
    "admissible_k",
    "base_bound_gap",
    "PSD_TOL",
]

# sign of d^c K relative to -J^* d with J d/dy = d/dx; see select_dc_sign in cmap
DC_SIGN = 1
PSD_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class PskPoint:
    X: np.ndarray

    def __post_init__(self):
        X = np.array(self.X, dtype=complex).reshape(-1)
        X.setflags(write=False)
        object.__setattr__(self, "X", X)

    @classmethod
    def from_chart(cls, yx) -> "PskPoint":
        yx = np.asarray(yx, dtype=float)
        n = yx.size // 2
        return cls(yx[:n] + 1j * yx[n:])

    @property
    def n(self) -> int:
        return self.X.size

    @property
    def y(self) -> np.ndarray:
        return self.X.real

    @property
    def x(self) -> np.ndarray:
        return self.X.imag

    @property
    def chart(self) -> np.ndarray:
        return np.concatenate([self.y, self.x])

    @property
    def z(self) -> np.ndarray:
        return np.concatenate([[1.0 + 0j], self.X])


def _as_point(p) -> PskPoint:
    return p if isinstance(p, PskPoint) else PskPoint(p)


def check_domain(model, p) -> PskPoint:
    """Raise :class:`DomainError` unless ``p`` is in the model's domain."""
    p = _as_point(p)
    if p.n != model.n:
        raise ValueError(f"point has {p.n} coordinates, model has n = {model.n}")
    if isinstance(model, Quadratic):
        if not np.sum(np.abs(p.X) ** 2) < 1.0:
            raise DomainError(f"|X| >= 1 outside the complex hyperbolic ball: X = {p.X}")
    elif isinstance(model, VerySpecial):
        _check_cubic_cone(model.cubic, p.x)
    return p


def _check_cubic_cone(cubic: CubicForm, x):
    hx = cubic.h(x)
    if not hx > 0:
        raise DomainError(f"h(x) = {hx} <= 0 at x = {x}")
    if cubic.n == 1:
        return
    # -d^2 h must be positive definite on the tangent space ker(dh) of {h = const}
    grad = cubic.grad(x)
    q, _ = np.linalg.qr(np.column_stack([grad, np.eye(cubic.n)]))
    tangent = q[:, 1:]
    restricted = -tangent.T @ cubic.hess(x) @ tangent
    if np.min(np.linalg.eigvalsh(restricted)) <= 0:
        raise ModelViolationError(f"-d^2 h is not definite on the level set at x = {x}")


def kahler_potential(model, p) -> float:
    """``K = -log sum X^I N_IJ conj(X^J)`` with ``X^0 = 1``."""
    p = check_domain(model, p)
    sm = special_matrices(model, p.z, check=False)
    return -np.log(sm.f)


def kahler_potential_cubic(cubic: CubicForm, x) -> float:
    hx = cubic.h(np.asarray(x, dtype=float))
    if not hx > 0:
        raise DomainError(f"log argument 8 h(x) = {8 * hx} is not positive")
    return -np.log(8.0 * hx)


def holomorphic_gradient(model, p) -> np.ndarray:
    """``dK/dX^mu = -(N conj z)_mu / f`` (uses Euler homogeneity of F)."""
    p = check_domain(model, p)
    sm = special_matrices(model, p.z, check=False)
    return -(sm.N @ np.conj(p.z))[1:] / sm.f


def complex_hessian(model, p) -> np.ndarray:
    """``K_{mu nu~}``; closed form for both prepotential families."""
    p = check_domain(model, p)
    if isinstance(model, VerySpecial):
        return complex_hessian_cubic(model.cubic, p.x).astype(complex)
    sm = special_matrices(model, p.z, check=False)
    z = p.z
    Nzb = sm.N @ np.conj(z)
    Nz = sm.N @ z
    K = -sm.N / sm.f + np.outer(Nzb, Nz) / sm.f**2
    return K[1:, 1:]


def complex_hessian_cubic(cubic: CubicForm, x) -> np.ndarray:
    """``K_{mu nu~} = -h_{mu nu} / 4h + h_mu h_nu / 4h^2`` (real)."""
    x = np.asarray(x, dtype=float)
    hx, h1, h2 = cubic.h(x), cubic.grad(x), cubic.hess(x)
    return -h2 / (4 * hx) + np.outer(h1, h1) / (4 * hx**2)


def complex_hessian_fd(model, p) -> np.ndarray:
    """``K_{mu nu~}`` from the finite-difference real Hessian of ``K``."""
    p = check_domain(model, p)
    n = p.n
    H = diffengine.hessian(lambda c: kahler_potential(model, PskPoint.from_chart(c)), p.chart)
    Kyy, Kyx = H[:n, :n], H[:n, n:]
    Kxy, Kxx = H[n:, :n], H[n:, n:]
    return 0.25 * (Kyy + Kxx + 1j * (Kyx - Kxy))


def hermitian_to_real(K: np.ndarray) -> np.ndarray:
    A, B = K.real, K.imag
    G = np.block([[A, B], [B.T, A]])
    return (G + G.T) / 2.0


def base_metric(model, p) -> np.ndarray:
    """Real ``2n x 2n`` base metric in the ``(y, x)`` chart."""
    return hermitian_to_real(complex_hessian(model, p))


def base_metric_fd(model, p) -> np.ndarray:
    return hermitian_to_real(complex_hessian_fd(model, p))


def base_metric_chn(p) -> np.ndarray:
    """Complex hyperbolic metric ``(|dX|^2 + |conj(X).dX|^2 / (1-|X|^2)) / (1-|X|^2)``."""
    p = _as_point(p)
    r2 = float(np.sum(np.abs(p.X) ** 2))
    if not r2 < 1:
        raise DomainError("|X| >= 1")
    K = np.eye(p.n) / (1 - r2) + np.outer(np.conj(p.X), p.X) / (1 - r2) ** 2
    return hermitian_to_real(K)


def base_metric_inverse_cubic(cubic: CubicForm, x) -> np.ndarray:
    """``K^{nu~ lambda} = -4 h h^{nu lambda} + 2 x^nu x^lambda``."""
    x = np.asarray(x, dtype=float)
    h2 = cubic.hess(x)
    cond = np.linalg.cond(h2)
    if not np.isfinite(cond) or cond > 1e12:
        raise SingularityError(f"h_mu_nu(x) is singular (condition number {cond:.3g})")
    return -4.0 * cubic.h(x) * np.linalg.inv(h2) + 2.0 * np.outer(x, x)


def dc_potential(model, p, sign: int = DC_SIGN) -> np.ndarray:
    """``d^c K`` as a covector on the ``(y, x)`` chart.

    ``(d^c K)(v) = -dK(Jv)``: the ``dy`` part is ``-dK/dx`` and the ``dx``
    part is ``dK/dy``, i.e. ``2 Im(dK/dX)`` and ``2 Re(dK/dX)``.
    """
    dK = holomorphic_gradient(model, p)
    return sign * np.concatenate([2.0 * dK.imag, 2.0 * dK.real])


def gtilde(cubic: CubicForm, x) -> np.ndarray:
    """``-sum (h_{mu nu} / h) dy^mu dy^nu`` embedded in the ``(y, x)`` chart."""
    x = np.asarray(x, dtype=float)
    n = cubic.n
    out = np.zeros((2 * n, 2 * n))
    out[:n, :n] = -cubic.hess(x) / cubic.h(x)
    return out


def base_metric_field(model) -> diffengine.MetricField:
    """The base metric as a field on the ``(y, x)`` chart."""
    return diffengine.MetricField(
        lambda yx: base_metric(model, PskPoint.from_chart(yx)), 2 * model.n, "base metric"
    )


def admissible_k(model, p) -> float:
    """Largest ``k`` with ``base_metric >= (k/4) (d^c K)^2`` at ``p``.

    That is ``4 / (d^cK . gbar^{-1} . d^cK)``; ``inf`` where ``d^c K = 0``.
    """
    p = check_domain(model, p)
    dc = dc_potential(model, p)
    norm2 = float(dc @ np.linalg.solve(base_metric(model, p), dc))
    return np.inf if norm2 <= 0 else 4.0 / norm2


def base_bound_gap(model, p, k: float) -> float:
    """Smallest eigenvalue of ``gbar - (k/4) (d^c K)^2``."""
    p = check_domain(model, p)
    dc = dc_potential(model, p)
    return float(np.min(np.linalg.eigvalsh(base_metric(model, p) - 0.25 * k * np.outer(dc, dc))))
