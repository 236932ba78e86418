"""Frame one-forms, the three Kähler two-forms and J1-holomorphic coordinates.

All forms are coefficient arrays on the 4n+4 chart of :mod:`.metric`.
Complex structures are matrices ``J[a, b]`` = component ``a`` of ``J(e_b)``,
and a two-form ``w`` is paired with ``J`` through ``w(u, v) = g(Ju, v)``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .. import diffengine
from ..diffengine import sym_product, wedge
from ..errors import DomainError
from ..special_kahler import DC_SIGN
from .metric import (
    Layout,
    QkPoint,
    _embed_base,
    base_data,
    deformed_fs_metric,
    eta_can,
    pairing_covector,
)

__all__ = [
    "FrameForms",
    "HoloCoords",
    "frame_forms",
    "frame_form_metric",
    "kahler_forms",
    "omega1_expanded",
    "pairing_form",
    "omega1_differential",
    "omega1_structure_rhs",
    "holomorphic_coords",
    "holomorphic_differentials",
    "j1_from_holomorphic",
    "complex_structure",
    "two_form_of",
    "select_dc_sign",
    "quaternion_sign",
]


@dataclass(frozen=True, eq=False)
class FrameForms:
    theta1: np.ndarray
    theta2: np.ndarray
    theta3: np.ndarray
    tau: np.ndarray
    A: np.ndarray  # (n+1, dim) complex, row I is A_I
    eta_can: np.ndarray

    @property
    def thetas(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        return self.theta1, self.theta2, self.theta3


@dataclass(frozen=True, eq=False)
class HoloCoords:
    chi: complex
    X: np.ndarray
    w: np.ndarray

    def as_vector(self) -> np.ndarray:
        return np.concatenate([[self.chi], self.X, self.w])


def _require_rho_c(q: QkPoint, c: float):
    if not q.rho + c > 0:
        raise DomainError(f"rho + c = {q.rho + c} must be positive")


def frame_forms(model, c: float, q: QkPoint, dc_sign: int = DC_SIGN) -> FrameForms:
    """theta_1, theta_2, theta_3, tau, A_I and eta_can at ``q``.

    ``theta1 = -(dphi~ + (rho+c) d^cK + eta_can) / 4rho``.  The ``+eta_can``
    sign is the one compatible with the expanded form of omega_1 and with
    the J1-holomorphic coordinates.
    """
    _require_rho_c(q, c)
    rho = q.rho
    L = q.layout
    bd = base_data(model, q.X, dc_sign)
    eta = eta_can(q)
    dc = _embed_base(L, bd.dcK)
    dphi = L.unit(L.phi)
    theta1 = -(dphi + (rho + c) * dc + eta) / (4 * rho)

    A = np.zeros((q.n + 1, L.dim), dtype=complex)
    A[:, L.zeta_t] = np.eye(q.n + 1)
    A[:, L.zeta] = bd.F_IJ
    t23 = 1j * np.sqrt(rho + c) / rho * np.exp(bd.K / 2) * (bd.z @ A)
    tau = dphi + eta + c * dc + 1j * (rho + 2 * c) / (rho + c) * L.unit(L.rho)
    return FrameForms(theta1, t23.real, t23.imag, tau, A, eta)


def frame_form_metric(model, c: float, q: QkPoint, dc_sign: int = DC_SIGN) -> np.ndarray:
    """The deformed metric rebuilt from ``tau``, ``A_I`` and the base metric."""
    rho = q.rho
    L = q.layout
    bd = base_data(model, q.X, dc_sign)
    ff = frame_forms(model, c, q, dc_sign)
    g = np.zeros((L.dim, L.dim))
    g[L.base, L.base] = (rho + c) / rho * bd.gbar
    g += (rho + c) / (rho + 2 * c) * sym_product(ff.tau) / (4 * rho**2)
    Ninv = bd.N_inv
    g -= sum(Ninv[i, j] * sym_product(ff.A[i], ff.A[j]) for i in range(q.n + 1) for j in range(q.n + 1)) / rho
    g += (2 * rho + 2 * c) / rho**2 * np.exp(bd.K) * sym_product(bd.z @ ff.A)
    return (g + g.T) / 2.0


def _theta_field(model, c, index, dc_sign):
    def field(coords):
        return frame_forms(model, c, QkPoint.from_chart(coords), dc_sign).thetas[index]

    return field


def kahler_forms(model, c: float, q: QkPoint, dc_sign: int = DC_SIGN):
    """``omega_i = -d theta_i + 2 theta_j ^ theta_k`` for cyclic ``(i, j, k)``."""
    ff = frame_forms(model, c, q, dc_sign)
    th = ff.thetas
    out = []
    for i in range(3):
        j, k = (i + 1) % 3, (i + 2) % 3
        d_theta = diffengine.exterior_derivative(_theta_field(model, c, i, dc_sign), q.chart)
        out.append(-d_theta + 2 * wedge(th[j], th[k]))
    return tuple(out)


def _dc_field(model, L: Layout, dc_sign):
    def field(coords):
        return _embed_base(L, base_data(model, QkPoint.from_chart(coords).X, dc_sign).dcK)

    return field


def _i_wedge_conj(a, b=None) -> np.ndarray:
    """Real two-form ``i a ^ conj(b)`` (``b`` defaults to ``a``)."""
    b = a if b is None else b
    return np.real(1j * wedge(a, np.conj(b)))


def pairing_form(model, q: QkPoint, dc_sign: int = DC_SIGN) -> np.ndarray:
    """``sum_IJ i N^{IJ} A_I ^ conj(A_J)``; equals ``sum_I dzeta~_I ^ dzeta^I``."""
    bd = base_data(model, q.X, dc_sign)
    ff = frame_forms(model, 0.0, q, dc_sign)
    Ninv = bd.N_inv
    n1 = q.n + 1
    return sum(Ninv[i, j] * _i_wedge_conj(ff.A[i], ff.A[j]) for i in range(n1) for j in range(n1))


def omega1_expanded(model, c: float, q: QkPoint, dc_sign: int = DC_SIGN) -> np.ndarray:
    """omega_1 as the sum of ``dd^cK``, ``tau ^ conj(tau)``, ``A ^ conj(A)`` terms."""
    rho = q.rho
    L = q.layout
    bd = base_data(model, q.X, dc_sign)
    ff = frame_forms(model, c, q, dc_sign)
    ddcK = diffengine.exterior_derivative(_dc_field(model, L, dc_sign), q.chart)
    w = (rho + c) / (4 * rho) * ddcK
    w = w + 0.5 / (4 * rho**2) * (rho + c) / (rho + 2 * c) * _i_wedge_conj(ff.tau)
    w = w - 0.5 / rho * pairing_form(model, q, dc_sign)
    w = w + 0.5 * (2 * rho + 2 * c) / rho**2 * np.exp(bd.K) * _i_wedge_conj(bd.z @ ff.A)
    return w


def omega1_differential(model, c: float, q: QkPoint, dc_sign: int = DC_SIGN) -> np.ndarray:
    """``d omega_1`` (rank-3 array) by differencing the expanded omega_1."""

    def field(coords):
        return omega1_expanded(model, c, QkPoint.from_chart(coords), dc_sign)

    return diffengine.exterior_derivative_2form(field, q.chart)


def omega1_structure_rhs(model, c: float, q: QkPoint, dc_sign: int = DC_SIGN) -> np.ndarray:
    """``2 (theta_2 ^ omega_3 - theta_3 ^ omega_2)``, which ``d omega_1`` must equal.

    Follows from ``omega_i = -d theta_i + 2 theta_j ^ theta_k``; omega_1 is
    therefore not closed, although J1 is integrable.
    """
    ff = frame_forms(model, c, q, dc_sign)
    _, w2, w3 = kahler_forms(model, c, q, dc_sign)
    return 2.0 * (diffengine.wedge_1_2(ff.theta2, w3) - diffengine.wedge_1_2(ff.theta3, w2))


def holomorphic_coords(model, c: float, q: QkPoint, dc_sign: int = DC_SIGN) -> HoloCoords:
    """``(chi, X, w)`` with ``w_I = (zeta~_I + F_IJ zeta^J) / 2``."""
    _require_rho_c(q, c)
    bd = base_data(model, q.X, dc_sign)
    zt, ze = q.zeta_t, q.zeta
    chi = (
        q.phi
        + 1j * (q.rho + c * (bd.K + np.log(q.rho + c)))
        - ze @ zt
        - ze @ bd.F_IJ @ ze
    )
    w = 0.5 * (zt + bd.F_IJ @ ze)
    return HoloCoords(complex(chi), q.X.copy(), w)


def holomorphic_differentials(model, c: float, q: QkPoint, dc_sign: int = DC_SIGN) -> np.ndarray:
    """Rows ``dchi, dX^mu, dw_I`` (complex), by finite differences."""

    def field(coords):
        return holomorphic_coords(model, c, QkPoint.from_chart(coords), dc_sign).as_vector()

    return diffengine.gradient(field, q.chart).T


def j1_from_holomorphic(model, c: float, q: QkPoint, dc_sign: int = DC_SIGN) -> np.ndarray:
    """The complex structure for which ``(chi, X, w)`` are holomorphic.

    Solves ``Theta J = i Theta`` for the stacked differentials ``Theta``.
    """
    theta = holomorphic_differentials(model, c, q, dc_sign)
    m = theta.shape[0]
    R = np.vstack([theta.real, theta.imag])
    rot = np.block([[np.zeros((m, m)), -np.eye(m)], [np.eye(m), np.zeros((m, m))]])
    return np.linalg.solve(R, rot @ R)


def complex_structure(g: np.ndarray, omega: np.ndarray) -> np.ndarray:
    """``J`` with ``omega(u, v) = g(Ju, v)``, i.e. ``J = -g^{-1} omega``."""
    return -np.linalg.solve(g, omega)


def two_form_of(g: np.ndarray, J: np.ndarray) -> np.ndarray:
    """``omega(u, v) = g(Ju, v)`` as a matrix."""
    return J.T @ g


def select_dc_sign(model, c: float, q: QkPoint) -> int:
    """Pick the sign of ``d^cK`` under which both omega_1 routes match ``g(J1 ., .)``."""
    residuals = {}
    for s in (1, -1):
        g = deformed_fs_metric(model, c, q, s)
        w_g = two_form_of(g, j1_from_holomorphic(model, c, q, s))
        w_theta = kahler_forms(model, c, q, s)[0]
        w_exp = omega1_expanded(model, c, q, s)
        residuals[s] = max(np.max(np.abs(w_theta - w_g)), np.max(np.abs(w_exp - w_g)))
    return min(residuals, key=residuals.get)


def quaternion_sign(J1, J2, J3) -> int:
    """``sigma`` with ``J1 J2 = sigma J3`` (the closer of the two signs)."""
    prod = J1 @ J2
    return 1 if np.max(np.abs(prod - J3)) <= np.max(np.abs(prod + J3)) else -1
