"""One-loop deformed Ferrara-Sabharwal metric on the 4n+4 dimensional chart.

Chart ordering (fixed everywhere)::

    (y^1..y^n, x^1..x^n, rho, phi~, zeta~_0..zeta~_n, zeta^0..zeta^n)

where ``X = y + i x`` are inhomogeneous coordinates on the special Kähler base.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from ..diffengine import MetricField, sym_product
from ..errors import AssemblyError, DomainError, PreconditionError
from ..prepotential import eval_jet, special_matrices
from ..special_kahler import DC_SIGN, PskPoint, base_metric, check_domain, dc_potential

__all__ = [
    "Layout",
    "QkPoint",
    "Domain",
    "BaseData",
    "base_data",
    "domain_classify",
    "fs_metric",
    "deformed_fs_metric",
    "metric_field",
    "chn_closed_form",
    "scaling_map",
    "scaling_jacobian",
    "lower_bound_gap",
]


@dataclass(frozen=True)
class Layout:
    """Index bookkeeping for the 4n+4 chart."""

    n: int

    @property
    def dim(self) -> int:
        return 4 * self.n + 4

    @property
    def y(self) -> slice:
        return slice(0, self.n)

    @property
    def x(self) -> slice:
        return slice(self.n, 2 * self.n)

    @property
    def base(self) -> slice:
        return slice(0, 2 * self.n)

    @property
    def rho(self) -> int:
        return 2 * self.n

    @property
    def phi(self) -> int:
        return 2 * self.n + 1

    @property
    def zeta_t(self) -> slice:
        return slice(2 * self.n + 2, 3 * self.n + 3)

    @property
    def zeta(self) -> slice:
        return slice(3 * self.n + 3, 4 * self.n + 4)

    @property
    def fibre_p(self) -> slice:
        """The ``p_a = (zeta~_I, zeta^J)`` block."""
        return slice(2 * self.n + 2, 4 * self.n + 4)

    def unit(self, index) -> np.ndarray:
        e = np.zeros(self.dim)
        e[index] = 1.0
        return e

    def labels(self) -> list[str]:
        n = self.n
        return (
            [f"y{m}" for m in range(1, n + 1)]
            + [f"x{m}" for m in range(1, n + 1)]
            + ["rho", "phi"]
            + [f"zt{i}" for i in range(n + 1)]
            + [f"z{i}" for i in range(n + 1)]
        )


@dataclass(frozen=True, eq=False)
class QkPoint:
    X: np.ndarray
    rho: float
    phi: float
    zeta_t: np.ndarray
    zeta: np.ndarray

    def __post_init__(self):
        X = np.array(self.X, dtype=complex).reshape(-1)
        zt = np.array(self.zeta_t, dtype=float).reshape(-1)
        z = np.array(self.zeta, dtype=float).reshape(-1)
        if zt.size != X.size + 1 or z.size != X.size + 1:
            raise ValueError("zeta~ and zeta must have n + 1 entries")
        for a in (X, zt, z):
            a.setflags(write=False)
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "zeta_t", zt)
        object.__setattr__(self, "zeta", z)
        object.__setattr__(self, "rho", float(self.rho))
        object.__setattr__(self, "phi", float(self.phi))

    @property
    def n(self) -> int:
        return self.X.size

    @property
    def layout(self) -> Layout:
        return Layout(self.n)

    @property
    def base(self) -> PskPoint:
        return PskPoint(self.X)

    @property
    def chart(self) -> np.ndarray:
        return np.concatenate(
            [self.X.real, self.X.imag, [self.rho, self.phi], self.zeta_t, self.zeta]
        )

    @classmethod
    def from_chart(cls, coords) -> "QkPoint":
        coords = np.asarray(coords, dtype=float).reshape(-1)
        if coords.size % 4:
            raise ValueError(f"chart dimension {coords.size} is not 4n + 4")
        L = Layout(coords.size // 4 - 1)
        X = coords[L.y] + 1j * coords[L.x]
        return cls(X, coords[L.rho], coords[L.phi], coords[L.zeta_t], coords[L.zeta])


class Domain(enum.Enum):
    POS_DEF = "PosDef(4n+4,0)"
    SIG_4N_4 = "Sig(4n,4)"
    SIG_4_4N = "Sig(4,4n)"
    OUTSIDE = "Outside"


def domain_classify(c: float, rho: float) -> Domain:
    """Which of the three domains of definition contains ``rho`` for ``c``."""
    if rho > -2 * c and rho > 0:
        return Domain.POS_DEF
    if -c < rho < -2 * c:
        return Domain.SIG_4N_4
    if -c < rho < 0:
        return Domain.SIG_4_4N
    return Domain.OUTSIDE


@dataclass(frozen=True, eq=False)
class BaseData:
    """Everything at ``z = (1, X)`` the fibre metric needs."""

    X: np.ndarray
    K: float
    gbar: np.ndarray
    dcK: np.ndarray
    F_I: np.ndarray
    F_IJ: np.ndarray
    F_IJK: np.ndarray
    N: np.ndarray
    R: np.ndarray
    I: np.ndarray  # noqa: E741
    Hhat: np.ndarray

    @cached_property
    def N_inv(self) -> np.ndarray:
        return np.linalg.inv(self.N)

    @property
    def z(self) -> np.ndarray:
        return np.concatenate([[1.0 + 0j], self.X])


def base_data(model, X, dc_sign: int = DC_SIGN) -> BaseData:
    p = check_domain(model, PskPoint(X))
    sm = special_matrices(model, p.z)
    jet = eval_jet(model, p.z)
    return BaseData(
        X=p.X,
        K=-np.log(sm.f),
        gbar=base_metric(model, p),
        dcK=dc_potential(model, p, sign=dc_sign),
        F_I=jet.F_I,
        F_IJ=jet.F_IJ,
        F_IJK=jet.F_IJK,
        N=sm.N,
        R=sm.R,
        I=sm.I,
        Hhat=sm.Hhat,
    )


def _embed_base(L: Layout, v) -> np.ndarray:
    out = np.zeros(L.dim, dtype=np.asarray(v).dtype)
    out[L.base] = v
    return out


def eta_can(q: QkPoint) -> np.ndarray:
    """``sum_I (zeta^I dzeta~_I - zeta~_I dzeta^I)`` as a chart covector."""
    L = q.layout
    eta = np.zeros(L.dim)
    eta[L.zeta_t] = q.zeta
    eta[L.zeta] = -q.zeta_t
    return eta


def pairing_covector(bd: BaseData, L: Layout) -> np.ndarray:
    """``sum_I (X^I dzeta~_I + F_I(X) dzeta^I)`` (complex)."""
    v = np.zeros(L.dim, dtype=complex)
    v[L.zeta_t] = bd.z
    v[L.zeta] = bd.F_I
    return v


def _require_posdef_domain(c, rho):
    dom = domain_classify(c, rho)
    if dom is not Domain.POS_DEF:
        raise DomainError(f"rho = {rho} with c = {c} lies in {dom.value}, not the positive branch")


def _checked(g: np.ndarray, what: str) -> np.ndarray:
    g = (g + g.T) / 2.0
    try:
        np.linalg.cholesky(g)
    except np.linalg.LinAlgError:
        ev = np.linalg.eigvalsh(g)
        raise AssemblyError(f"{what} is not positive definite (min eigenvalue {ev.min():.3e})")
    return g


def fs_metric(model, q: QkPoint, dc_sign: int = DC_SIGN) -> np.ndarray:
    """Undeformed Ferrara-Sabharwal metric."""
    if not q.rho > 0:
        raise DomainError(f"rho = {q.rho} must be positive")
    L = q.layout
    bd = base_data(model, q.X, dc_sign)
    g = np.zeros((L.dim, L.dim))
    g[L.base, L.base] = bd.gbar
    g += sym_product(L.unit(L.rho)) / (4 * q.rho**2)
    g += sym_product(L.unit(L.phi) + eta_can(q)) / (4 * q.rho**2)
    g[L.fibre_p, L.fibre_p] += bd.Hhat / (2 * q.rho)
    return _checked(g, "Ferrara-Sabharwal metric")


def deformed_fs_metric(model, c: float, q: QkPoint, dc_sign: int = DC_SIGN) -> np.ndarray:
    """One-loop deformed Ferrara-Sabharwal metric, assembled term by term."""
    rho = q.rho
    _require_posdef_domain(c, rho)
    L = q.layout
    bd = base_data(model, q.X, dc_sign)
    g = np.zeros((L.dim, L.dim))
    g[L.base, L.base] = (rho + c) / rho * bd.gbar
    g += (rho + 2 * c) / (rho + c) * sym_product(L.unit(L.rho)) / (4 * rho**2)
    theta0 = L.unit(L.phi) + eta_can(q) + c * _embed_base(L, bd.dcK)
    g += (rho + c) / (rho + 2 * c) * sym_product(theta0) / (4 * rho**2)
    g[L.fibre_p, L.fibre_p] += bd.Hhat / (2 * rho)
    g += 2 * c / rho**2 * np.exp(bd.K) * sym_product(pairing_covector(bd, L))
    return _checked(g, "deformed Ferrara-Sabharwal metric")


def metric_field(model, c: float, dc_sign: int = DC_SIGN) -> MetricField:
    """The deformed metric as a field on the 4n+4 chart."""
    n = model.n

    def g(coords):
        return deformed_fs_metric(model, c, QkPoint.from_chart(coords), dc_sign)

    return MetricField(g, 4 * n + 4, name=f"g_FS^c (c={c})")


def chn_closed_form(n: int, c: float, q: QkPoint) -> np.ndarray:
    """Deformed metric over complex hyperbolic space written in ``w`` coordinates.

    ``w_0 = (zeta~_0 + i zeta^0) / 2`` and ``w_mu = (zeta~_mu - i zeta^mu) / 2``.
    """
    if q.n != n:
        raise ValueError(f"point has n = {q.n}, expected {n}")
    rho = q.rho
    _require_posdef_domain(c, rho)
    X = q.X
    r2 = float(np.sum(np.abs(X) ** 2))
    if not r2 < 1:
        raise DomainError("|X| >= 1")
    L = q.layout
    zt, ze = q.zeta_t, q.zeta

    dX = np.zeros((n, L.dim), dtype=complex)
    for m in range(n):
        dX[m, m] = 1.0
        dX[m, n + m] = 1j
    sgn = np.array([1.0] + [-1.0] * n)  # +i for w_0, -i for w_mu
    w = 0.5 * (zt + 1j * sgn * ze)
    dw = np.zeros((n + 1, L.dim), dtype=complex)
    for i in range(n + 1):
        dw[i, L.zeta_t.start + i] = 0.5
        dw[i, L.zeta.start + i] = 0.5j * sgn[i]

    g = np.zeros((L.dim, L.dim))
    base = sum((sym_product(dX[m]) for m in range(n)), np.zeros((L.dim, L.dim)))
    xbar_dx = np.conj(X) @ dX if n else np.zeros(L.dim, complex)
    base = (base + sym_product(xbar_dx) / (1 - r2)) / (1 - r2)
    g += (rho + c) / rho * base
    g += (rho + 2 * c) / (rho + c) * sym_product(L.unit(L.rho)) / (4 * rho**2)
    g += -2 / rho * sum(sgn[i] * sym_product(dw[i]) for i in range(n + 1))
    combo = dw[0] + (X @ dw[1:] if n else 0)
    g += (rho + c) / rho**2 * 4 / (1 - r2) * sym_product(combo)
    one_form = (
        L.unit(L.phi)
        - 4 * np.imag(sum(sgn[i] * np.conj(w[i]) * dw[i] for i in range(n + 1)))
        + 2 * c / (1 - r2) * np.imag(xbar_dx)
    )
    g += (rho + c) / (rho + 2 * c) * sym_product(one_form) / (4 * rho**2)
    return (g + g.T) / 2.0


def scaling_map(lam: float, q: QkPoint) -> QkPoint:
    """Fibre scaling ``(rho, phi~, zeta~, zeta) -> (e^l rho, e^l phi~, e^(l/2) zeta~, e^(l/2) zeta)``."""
    s, r = np.exp(lam), np.exp(lam / 2)
    return QkPoint(q.X, s * q.rho, s * q.phi, r * q.zeta_t, r * q.zeta)


def scaling_jacobian(lam: float, n: int) -> np.ndarray:
    L = Layout(n)
    diag = np.ones(L.dim)
    diag[L.rho] = diag[L.phi] = np.exp(lam)
    diag[L.fibre_p] = np.exp(lam / 2)
    return np.diag(diag)


def lower_bound_gap(model, c: float, eps: float, k: float, q: QkPoint, dc_sign: int = DC_SIGN) -> float:
    """Smallest eigenvalue of ``g^c - (1/2) (k eps / (k eps + c)) g^0``."""
    if not q.rho > eps:
        raise PreconditionError(f"rho = {q.rho} must exceed eps = {eps}")
    delta = 0.5 * k * eps / (k * eps + c)
    diff = deformed_fs_metric(model, c, q, dc_sign) - delta * fs_metric(model, q, dc_sign)
    return float(np.min(np.linalg.eigvalsh(diff)))

