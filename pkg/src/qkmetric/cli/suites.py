"""Named checks grouped by subcommand.

Each task evaluates every check of one subcommand at one sample point and
returns plain :class:`Check` records; the report layer only sorts and
serialises them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .. import diffengine
from ..cmap import frames, metric
from ..cmap.metric import QkPoint
from ..curvature import curvature_report, qk_scalar_curvature, riem_norm2_cubic_line
from ..errors import GeometryError
from ..geodesics import (
    BASE_BOUNDARY_C,
    GeodesicState,
    base_boundary_length,
    energy,
    geodesic_integrate,
    radial_divergence_probe,
    radial_length_exact,
)
from ..prepotential import CubicForm, Quadratic, VerySpecial, special_matrices
from ..special_kahler import (
    PskPoint,
    base_bound_gap,
    base_metric,
    base_metric_fd,
    base_metric_inverse_cubic,
    complex_hessian_cubic,
    dc_potential,
    gtilde,
)

__all__ = ["Check", "DEFAULT_TOLERANCES", "rel_diff", "run_task", "Task"]

DEFAULT_TOLERANCES = {
    "frame.metric_identity": 1e-9,
    "frame.pairing_identity": 1e-10,
    "omega1.theta_vs_expanded": 1e-7,
    "omega1.theta_vs_holomorphic": 1e-7,
    "omega1.expanded_vs_holomorphic": 1e-7,
    "omega1.structure_equation": 1e-5,
    "holomorphic.closed": 1e-6,
    "holomorphic.eigenvector": 1e-7,
    "quaternion.square": 1e-7,
    "quaternion.product": 1e-7,
    "hermitian": 1e-8,
    "lower_bound.gap": 1e-9,
    "base.bound": 1e-10,
    "rmap.inverse": 1e-10,
    "rmap.euler": 1e-12,
    "rmap.potential": 1e-10,
    "rmap.hessian_fd": 1e-7,
    "rmap.gtilde_bound": 1e-10,
    "einstein.residual": 1e-4,
    "einstein.scalar": 1e-3,
    "einstein.nabla_R": 1e-3,
    "rnorm2": 1e-3,
    "rnorm2.variation": 1e-2,
    "isometry.chn_closed_form": 1e-10,
    "isometry.scaling": 1e-10,
    "geodesic.radial_length": 1e-3,
    "geodesic.radial_bound": 1e-6,
    "geodesic.base_boundary": 0.0,
    "geodesic.energy": 1e-5,
    "domain.assembly": 0.0,
}


@dataclass(frozen=True)
class Check:
    name: str
    point_index: int
    computed: object
    expected: object
    tolerance: float
    passed: bool
    note: str = ""

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "point_index": self.point_index,
            "computed": _jsonable(self.computed),
            "expected": _jsonable(self.expected),
            "tolerance": self.tolerance,
            "passed": bool(self.passed),
            "note": self.note,
        }


def _jsonable(v):
    if isinstance(v, (np.floating, float)):
        v = float(v)
        return v if math.isfinite(v) else None
    if isinstance(v, (np.integer,)):
        return int(v)
    return v


@dataclass(frozen=True)
class Task:
    command: str
    model: object
    c: float
    point_index: int
    point: QkPoint
    tol: dict
    dc_sign: int = 1
    sigma: int = 1
    k: float = 1.0
    steps: int = 40
    covariant: bool = False
    seed: int = 0


def rel_diff(a, b) -> float:
    a, b = np.asarray(a), np.asarray(b)
    scale = float(np.max(np.abs(b))) if b.size else 0.0
    return float(np.max(np.abs(a - b))) / max(scale, 1e-300)


def _residual(name, idx, value, tol, expected=0.0, note=""):
    return Check(name, idx, float(value), expected, tol, bool(value <= tol), note)


def _at_least(name, idx, value, bound, tol, note=""):
    return Check(name, idx, float(value), float(bound), tol, bool(value >= bound - tol), note)


def _relative(name, idx, value, expected, tol, note=""):
    ok = abs(value - expected) <= tol * abs(expected)
    return Check(name, idx, float(value), float(expected), tol, bool(ok), note)


# ---------------------------------------------------------------- verify


def _holo_field(model, c, s):
    return lambda coords: frames.holomorphic_differentials(model, c, QkPoint.from_chart(coords), s)


def _verify(t: Task):
    m, c, q, i, tol, s = t.model, t.c, t.point, t.point_index, t.tol, t.dc_sign
    L = q.layout
    out = []
    g = metric.deformed_fs_metric(m, c, q, s)
    out.append(_residual("frame.metric_identity", i, rel_diff(frames.frame_form_metric(m, c, q, s), g), tol["frame.metric_identity"]))

    canonical = np.zeros((L.dim, L.dim))
    canonical[L.zeta_t, L.zeta] = np.eye(q.n + 1)
    canonical -= canonical.T
    out.append(_residual("frame.pairing_identity", i, np.max(np.abs(frames.pairing_form(m, q, s) - canonical)), tol["frame.pairing_identity"]))

    w1, w2, w3 = frames.kahler_forms(m, c, q, s)
    w_exp = frames.omega1_expanded(m, c, q, s)
    J1h = frames.j1_from_holomorphic(m, c, q, s)
    w_hol = frames.two_form_of(g, J1h)
    out.append(_residual("omega1.theta_vs_expanded", i, np.max(np.abs(w1 - w_exp)), tol["omega1.theta_vs_expanded"]))
    out.append(_residual("omega1.theta_vs_holomorphic", i, np.max(np.abs(w1 - w_hol)), tol["omega1.theta_vs_holomorphic"]))
    out.append(_residual("omega1.expanded_vs_holomorphic", i, np.max(np.abs(w_exp - w_hol)), tol["omega1.expanded_vs_holomorphic"]))

    Js = [frames.complex_structure(g, w) for w in (w1, w2, w3)]
    eye = np.eye(L.dim)
    out.append(_residual("quaternion.square", i, max(np.max(np.abs(J @ J + eye)) for J in Js), tol["quaternion.square"]))
    out.append(_residual(
        "quaternion.product", i, np.max(np.abs(Js[0] @ Js[1] - t.sigma * Js[2])), tol["quaternion.product"],
        note=f"sigma = {t.sigma:+d}",
    ))
    out.append(_residual("hermitian", i, rel_diff(Js[0].T @ g @ Js[0], g), tol["hermitian"]))

    theta = frames.holomorphic_differentials(m, c, q, s)
    out.append(_residual("holomorphic.eigenvector", i, np.max(np.abs(theta @ Js[0] - 1j * theta)), tol["holomorphic.eigenvector"]))
    d_theta = diffengine.exterior_derivative(_holo_field(m, c, s), q.chart)
    out.append(_residual("holomorphic.closed", i, np.max(np.abs(d_theta)), tol["holomorphic.closed"]))
    dw = frames.omega1_differential(m, c, q, s)
    rhs = frames.omega1_structure_rhs(m, c, q, s)
    out.append(_residual("omega1.structure_equation", i, np.max(np.abs(dw - rhs)), tol["omega1.structure_equation"]))

    eps = min(0.5, 0.9 * q.rho)
    gap = metric.lower_bound_gap(m, c, eps, t.k, q, s)
    out.append(_at_least("lower_bound.gap", i, gap, 0.0, tol["lower_bound.gap"], note=f"k = {t.k:.6g}, eps = {eps:.6g}"))
    p = PskPoint(q.X)
    if q.n:
        out.append(_at_least("base.bound", i, base_bound_gap(m, p, t.k), 0.0, tol["base.bound"], note=f"k = {t.k:.6g}"))
    if isinstance(m, VerySpecial):
        out.extend(_rmap_checks(m.cubic, p, i, tol))
    return out


def _rmap_checks(cubic: CubicForm, p: PskPoint, i: int, tol):
    x = p.x
    out = []
    K = complex_hessian_cubic(cubic, x)
    Kinv = base_metric_inverse_cubic(cubic, x)
    out.append(_residual("rmap.inverse", i, np.max(np.abs(K @ Kinv - np.eye(cubic.n))), tol["rmap.inverse"]))
    h, h1, h2, h3 = cubic.h(x), cubic.grad(x), cubic.hess(x), cubic.third()
    euler = max(
        abs(h1 @ x - 3 * h) / abs(h),
        np.max(np.abs(h2 @ x - 2 * h1)) / np.max(np.abs(h1)),
        np.max(np.abs(h3 @ x - h2)) / np.max(np.abs(h2)),
    )
    out.append(_residual("rmap.euler", i, euler, tol["rmap.euler"]))
    f = special_matrices(VerySpecial(cubic), p.z, check=False).f
    out.append(_residual("rmap.potential", i, abs(8 * h - f) / abs(f), tol["rmap.potential"]))
    model = VerySpecial(cubic)
    out.append(_residual("rmap.hessian_fd", i, rel_diff(base_metric_fd(model, p), base_metric(model, p)), tol["rmap.hessian_fd"]))
    dc = dc_potential(model, p)
    ev = float(np.min(np.linalg.eigvalsh(gtilde(cubic, x) + (2.0 / 3.0) * np.outer(dc, dc))))
    out.append(_at_least("rmap.gtilde_bound", i, ev, 0.0, tol["rmap.gtilde_bound"]))
    return out


# ---------------------------------------------------------------- curvature


def _einstein(t: Task):
    gf = metric.metric_field(t.model, t.c, t.dc_sign)
    rep = curvature_report(gf, t.point.chart, covariant_derivative=t.covariant)
    i, tol = t.point_index, t.tol
    note = f"c = {t.c:g}, condition number {rep.condition_number:.3g}"
    out = [
        _residual("einstein.residual", i, rep.einstein_residual / rep.metric_norm, tol["einstein.residual"], note=note),
        _relative("einstein.scalar", i, rep.scalar, qk_scalar_curvature(t.model.n), tol["einstein.scalar"], note=note),
    ]
    if t.covariant and t.c == 0:
        # only the undeformed metrics are locally symmetric
        out.append(_residual("einstein.nabla_R", i, rep.nabla_R_norm, tol["einstein.nabla_R"], note=note))
    return out


def _rnorm2(t: Task):
    gf = metric.metric_field(t.model, t.c, t.dc_sign)
    rep = curvature_report(gf, t.point.chart)
    expected = riem_norm2_cubic_line(t.c, t.point.rho)
    return [_relative("rnorm2", t.point_index, rep.riem_norm2, expected, t.tol["rnorm2"], note=f"c = {t.c:g}, rho = {t.point.rho:g}")]


# ---------------------------------------------------------------- isometry


def _isometry(t: Task):
    m, c, q, i, tol, s = t.model, t.c, t.point, t.point_index, t.tol, t.dc_sign
    out = []
    if isinstance(m, Quadratic):
        err = rel_diff(metric.chn_closed_form(m.n, c, q), metric.deformed_fs_metric(m, c, q, s))
        out.append(_residual("isometry.chn_closed_form", i, err, tol["isometry.chn_closed_form"], note=f"c = {c:g}"))
    for lam in (math.log(2), -math.log(2)):
        J = metric.scaling_jacobian(lam, m.n)
        pulled = J.T @ metric.deformed_fs_metric(m, c, metric.scaling_map(lam, q), s) @ J
        target = metric.deformed_fs_metric(m, math.exp(-lam) * c, q, s)
        out.append(_residual("isometry.scaling", i, rel_diff(pulled, target), tol["isometry.scaling"], note=f"c = {c:g}, lambda = {lam:+.6f}"))
    return out


# ---------------------------------------------------------------- geodesic

RADIAL_EPS = math.exp(-4)
BOUNDARY_DELTAS = (1e-2, 1e-3, 1e-4)


def _geodesic(t: Task):
    m, c, q, i, tol, s = t.model, t.c, t.point, t.point_index, t.tol, t.dc_sign
    out = []
    rho0 = q.rho
    eps = RADIAL_EPS * rho0
    length, bound = radial_divergence_probe(m, c, rho0, eps, q)
    note = f"c = {c:g}, rho0 = {rho0:g}, eps = {eps:.6g}"
    out.append(_relative("geodesic.radial_length", i, length, radial_length_exact(c, rho0, eps), tol["geodesic.radial_length"], note=note))
    out.append(_at_least("geodesic.radial_bound", i, length, bound, tol["geodesic.radial_bound"], note=note))

    gf = metric.metric_field(m, c, s)
    rng = np.random.default_rng([t.seed, i])
    v = rng.normal(size=q.layout.dim)
    v /= math.sqrt(v @ gf(q.chart) @ v)
    s0 = GeodesicState(q.chart, v)
    traj = geodesic_integrate(gf, s0, 1.0, t.steps)
    drift = abs(energy(gf, traj.final) / energy(gf, s0) - 1.0)
    ok = drift <= tol["geodesic.energy"] and traj.termination.name == "TIME_ELAPSED"
    out.append(Check("geodesic.energy", i, drift, 0.0, tol["geodesic.energy"], ok,
                     f"c = {c:g}, T = 1, steps = {t.steps}, termination: {traj.termination.value}"))
    return out


def _base_boundary(model, tol):
    out = []
    for j, delta in enumerate(BOUNDARY_DELTAS):
        length = base_boundary_length(model, delta)
        bound = 0.5 * abs(math.log(delta)) - BASE_BOUNDARY_C
        out.append(_at_least("geodesic.base_boundary", j, length, bound, tol["geodesic.base_boundary"], note=f"delta = {delta:g}, C = {BASE_BOUNDARY_C:g}"))
    return out


# ---------------------------------------------------------------- domains


def _domains(t: Task):
    m, c, q = t.model, t.c, t.point
    dom = metric.domain_classify(c, q.rho)
    try:
        g = metric.deformed_fs_metric(m, c, q, t.dc_sign)
        outcome = "positive definite" if np.min(np.linalg.eigvalsh(g)) > 0 else "indefinite"
    except GeometryError:
        outcome = "refused"
    expected = "positive definite" if dom is metric.Domain.POS_DEF else "refused"
    return [Check("domain.assembly", t.point_index, outcome, expected, 0.0, outcome == expected,
                  f"c = {c:g}, rho = {q.rho:g}: {dom.value}")]


_SUITES = {
    "verify": _verify,
    "einstein": _einstein,
    "rnorm2": _rnorm2,
    "isometry": _isometry,
    "geodesic": _geodesic,
    "domains": _domains,
}


def run_task(t: Task) -> list[Check]:
    """Run one task; geometry errors become a single failed check."""
    if t.command == "geodesic.base_boundary":
        return _base_boundary(t.model, t.tol)
    try:
        return _SUITES[t.command](t)
    except (GeometryError, AssertionError, np.linalg.LinAlgError) as exc:
        return [Check(f"{t.command}.error", t.point_index, None, None, 0.0, False, f"{type(exc).__name__}: {exc}")]
