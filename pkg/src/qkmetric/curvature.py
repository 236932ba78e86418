"""Levi-Civita curvature of a metric field by finite differences.

Conventions::

    Gamma^i_{jk} = 1/2 g^{il} (d_j g_{lk} + d_k g_{jl} - d_l g_{jk})
    R^i_{jkl}    = d_k Gamma^i_{lj} - d_l Gamma^i_{kj}
                   + Gamma^i_{km} Gamma^m_{lj} - Gamma^i_{lm} Gamma^m_{kj}
    R_{ijkl}     = g_{im} R^m_{jkl},   Ric_{jl} = R^i_{jil}

so the round sphere has positive scalar curvature.  Second derivatives of
the metric come straight from the Richardson stencils of
:mod:`qkmetric.diffengine`; the covariant derivative of the curvature
differences the lowered Riemann tensor once more.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import diffengine
from .errors import SingularityError

__all__ = [
    "CurvatureReport",
    "christoffel",
    "riemann_lowered",
    "curvature_report",
    "covariant_riemann",
    "full_norm2",
    "MAX_CONDITION",
    "riem_norm2_cubic_line",
    "qk_scalar_curvature",
    "riemann_symmetry_defect",
]

MAX_CONDITION = 1e12
# nabla R differences the curvature, itself built from second differences; at
# the default step cancellation noise from the inner stencil dominates, so
# both levels use coarser steps (Richardson truncation stays below 1e-7)
NABLA_INNER_STEP = 1e-2
NABLA_OUTER_STEP = 3e-3


@dataclass(frozen=True, eq=False)
class CurvatureReport:
    point: np.ndarray
    metric: np.ndarray
    christoffel: np.ndarray
    riemann_low: np.ndarray
    ricci: np.ndarray
    scalar: float
    riem_norm2: float
    einstein_residual: float
    condition_number: float
    nabla_R_norm: float | None = None
    bianchi2_residual: float | None = None

    @property
    def dim(self) -> int:
        return self.metric.shape[0]

    @property
    def metric_norm(self) -> float:
        return float(np.max(np.abs(self.metric)))


def _inverse(g, p):
    cond = np.linalg.cond(g)
    if not np.isfinite(cond) or cond > MAX_CONDITION:
        raise SingularityError(f"metric is singular at {np.asarray(p).tolist()} (condition number {cond:.3g})")
    return np.linalg.inv(g), float(cond)


def _first_kind(dg):
    # dg[m, i, j] = d_m g_ij ;  G1[l, j, k] = 1/2 (d_j g_lk + d_k g_jl - d_l g_jk)
    return 0.5 * (dg.transpose(1, 0, 2) + dg.transpose(1, 2, 0) - dg)


def christoffel(gf, p) -> np.ndarray:
    """``Gamma[i, j, k] = Gamma^i_{jk}``."""
    p = diffengine.as_chart_point(p)
    g = gf(p)
    ginv, _ = _inverse(g, p)
    dg = diffengine.gradient(gf, p)
    return np.einsum("il,ljk->ijk", ginv, _first_kind(dg))


def _geometry(gf, p, rel_step=diffengine.REL_STEP):
    g, dg, ddg = diffengine.derivatives_upto_2(gf, p, rel_step)
    g = (g + g.T) / 2.0
    ginv, cond = _inverse(g, p)
    G1 = _first_kind(dg)
    gamma = np.einsum("il,ljk->ijk", ginv, G1)
    # d_m G1[l, j, k] from second derivatives ddg[m, n, a, b] = d_m d_n g_ab
    dG1 = 0.5 * (
        ddg.transpose(0, 2, 1, 3) + ddg.transpose(0, 2, 3, 1) - ddg
    )  # dG1[m, l, j, k]
    dginv = -np.einsum("ia,mab,bl->mil", ginv, dg, ginv)
    dgamma = np.einsum("mil,ljk->mijk", dginv, G1) + np.einsum("il,mljk->mijk", ginv, dG1)
    riem_up = (
        np.einsum("kilj->ijkl", dgamma)
        - np.einsum("likj->ijkl", dgamma)
        + np.einsum("ikm,mlj->ijkl", gamma, gamma)
        - np.einsum("ilm,mkj->ijkl", gamma, gamma)
    )
    riem_low = np.einsum("im,mjkl->ijkl", g, riem_up)
    return g, ginv, cond, gamma, riem_low


def riemann_lowered(gf, p) -> np.ndarray:
    return _geometry(gf, diffengine.as_chart_point(p))[4]


def full_norm2(tensor, ginv) -> float:
    """Contract a covariant tensor with itself using ``ginv`` on every slot."""
    raised = tensor
    for axis in range(tensor.ndim):
        raised = np.moveaxis(np.tensordot(ginv, raised, axes=([1], [axis])), 0, axis)
    return float(np.sum(raised * tensor))


def covariant_riemann(gf, p, gamma=None, riem_low=None) -> np.ndarray:
    """``nabla[m, i, j, k, l] = nabla_m R_{ijkl}``."""
    p = diffengine.as_chart_point(p)
    if gamma is None or riem_low is None:
        _, _, _, gamma, riem_low = _geometry(gf, p)
    dR = diffengine.gradient(lambda c: _geometry(gf, c, NABLA_INNER_STEP)[4], p, NABLA_OUTER_STEP)
    return (
        dR
        - np.einsum("pmi,pjkl->mijkl", gamma, riem_low)
        - np.einsum("pmj,ipkl->mijkl", gamma, riem_low)
        - np.einsum("pmk,ijpl->mijkl", gamma, riem_low)
        - np.einsum("pml,ijkp->mijkl", gamma, riem_low)
    )


def curvature_report(gf, p, covariant_derivative: bool = False) -> CurvatureReport:
    """Curvature quantities of the metric field ``gf`` at ``p``.

    With ``covariant_derivative`` the report also carries ``|nabla R|`` and
    the contracted second Bianchi residual ``|div Ric - d scal / 2|``
    (both normed with the inverse metric); this costs ``4 d`` further
    curvature evaluations.
    """
    p = diffengine.as_chart_point(p)
    g, ginv, cond, gamma, riem_low = _geometry(gf, p)
    d = g.shape[0]
    ricci = np.einsum("ab,ajbl->jl", ginv, riem_low)
    ricci = (ricci + ricci.T) / 2.0
    scalar = float(np.einsum("jl,jl->", ginv, ricci))
    residual = float(np.max(np.abs(ricci - scalar / d * g)))
    nabla_norm = bianchi = None
    if covariant_derivative:
        nabla = covariant_riemann(gf, p, gamma, riem_low)
        nabla_norm = float(np.sqrt(max(full_norm2(nabla, ginv), 0.0)))
        nabla_ric = np.einsum("ik,mijkl->mjl", ginv, nabla)
        d_scal = np.einsum("jl,mjl->m", ginv, nabla_ric)
        div_ric = np.einsum("mj,mjl->l", ginv, nabla_ric)
        defect = div_ric - 0.5 * d_scal
        bianchi = float(np.sqrt(max(defect @ g @ defect, 0.0)))
    return CurvatureReport(
        point=p,
        metric=g,
        christoffel=gamma,
        riemann_low=riem_low,
        ricci=ricci,
        scalar=scalar,
        riem_norm2=full_norm2(riem_low, ginv),
        einstein_residual=residual,
        condition_number=cond,
        nabla_R_norm=nabla_norm,
        bianchi2_residual=bianchi,
    )


def riemann_symmetry_defect(riem_low: np.ndarray) -> dict[str, float]:
    """Largest violation of each algebraic identity, relative to ``max |R|``."""
    R = riem_low
    scale = max(float(np.max(np.abs(R))), 1e-300)
    bianchi = R + R.transpose(0, 2, 3, 1) + R.transpose(0, 3, 1, 2)
    return {
        "antisym_12": float(np.max(np.abs(R + R.transpose(1, 0, 2, 3)))) / scale,
        "antisym_34": float(np.max(np.abs(R + R.transpose(0, 1, 3, 2)))) / scale,
        "pair_swap": float(np.max(np.abs(R - R.transpose(2, 3, 0, 1)))) / scale,
        "first_bianchi": float(np.max(np.abs(bianchi))) / scale,
    }


def qk_scalar_curvature(n: int) -> float:
    """Scalar curvature in dimension ``4n + 4`` for reduced scalar curvature -2."""
    return -8.0 * (n + 1) * (n + 3)


def riem_norm2_cubic_line(c: float, rho: float) -> float:
    """Closed form of ``|Riem|^2`` for the deformed metric built on ``h = x^3``."""
    num = (
        528 * c**7 + 2112 * c**6 * rho + 3664 * c**5 * rho**2 + 3568 * c**4 * rho**3
        + 2110 * c**3 * rho**4 + 764 * c**2 * rho**5 + 161 * c * rho**6 + 17 * rho**7
    )
    return 128.0 * num / (3.0 * (c + rho) * (2 * c + rho) ** 6)
