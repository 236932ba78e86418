"""Each acceptance criterion at its stated tolerance.

Every test records one PASS/FAIL line, printed in the terminal summary.
"""

import math

import numpy as np
import pytest

from conftest import cubic_x3, record_criterion
from qkmetric.cmap import (
    QkPoint,
    chn_closed_form,
    complex_structure,
    deformed_fs_metric,
    frame_form_metric,
    j1_from_holomorphic,
    kahler_forms,
    lower_bound_gap,
    metric_field,
    omega1_differential,
    omega1_expanded,
    omega1_structure_rhs,
    pairing_form,
    quaternion_sign,
    two_form_of,
)
from qkmetric.cmap.metric import scaling_jacobian, scaling_map
from qkmetric.curvature import curvature_report, qk_scalar_curvature, riem_norm2_cubic_line
from qkmetric.geodesics import (
    BASE_BOUNDARY_C,
    base_boundary_length,
    radial_divergence_probe,
    radial_length_exact,
)
from qkmetric.prepotential import Quadratic, special_matrices
from qkmetric.sampling import random_qk_points
from qkmetric.special_kahler import (
    PskPoint,
    base_bound_gap,
    base_metric,
    base_metric_fd,
    base_metric_inverse_cubic,
    complex_hessian_cubic,
    dc_potential,
)

SEED = 4242


def rel(a, b):
    return float(np.max(np.abs(a - b)) / np.max(np.abs(b)))


def points(model, count, seed, **kw):
    return random_qk_points(model, count, np.random.default_rng(seed), **kw)


def test_criterion_1_curvature_norm():
    worst = 0.0
    for j, (c, rho) in enumerate([(0, 1), (1, 1), (1, 2), (0.5, 0.7)]):
        (q,) = points(cubic_x3(), 1, SEED + j, rho=rho)
        rep = curvature_report(metric_field(cubic_x3(), c), q.chart)
        worst = max(worst, abs(rep.riem_norm2 / riem_norm2_cubic_line(c, rho) - 1))
    spots = (
        abs(riem_norm2_cubic_line(0, 1) - 2176 / 3) < 1e-9
        and abs(riem_norm2_cubic_line(0, 5) - 2176 / 3) < 1e-9
        and abs(riem_norm2_cubic_line(1, 1) - 1654272 / 4374) < 1e-9
    )
    ok = worst < 1e-3 and spots
    record_criterion("criterion 1", ok, f"|Riem|^2 worst relative error {worst:.2e} (tol 1e-3)")
    assert ok


def test_criterion_2_einstein():
    worst_res = worst_scal = 0.0
    for name, model in [("quadratic-0", Quadratic(0)), ("quadratic-1", Quadratic(1)), ("x3", cubic_x3())]:
        for c in (0.0, 0.5, 1.0):
            for q in points(model, 10, hash((name, c)) % 2**32):
                rep = curvature_report(metric_field(model, c), q.chart)
                worst_res = max(worst_res, rep.einstein_residual / rep.metric_norm)
                target = qk_scalar_curvature(model.n)
                worst_scal = max(worst_scal, abs(rep.scalar / target - 1))
    ok = worst_res < 1e-4 and worst_scal < 1e-3
    record_criterion(
        "criterion 2", ok,
        f"einstein residual / |g| {worst_res:.2e} (tol 1e-4), scalar relative error {worst_scal:.2e} (tol 1e-3)",
    )
    assert ok


def test_criterion_3_symmetric_space():
    worst = 0.0
    for model in (cubic_x3(), Quadratic(0)):
        for q in points(model, 5, SEED):
            rep = curvature_report(metric_field(model, 0.0), q.chart, covariant_derivative=True)
            worst = max(worst, rep.nabla_R_norm)
    (q,) = points(cubic_x3(), 1, SEED)
    gf = metric_field(cubic_x3(), 1.0)
    vals = []
    for rho in np.linspace(0.5, 2.0, 4):
        chart = q.chart.copy()
        chart[q.layout.rho] = rho
        vals.append(curvature_report(gf, chart).riem_norm2)
    spread = (max(vals) - min(vals)) / max(vals)
    ok = worst < 1e-3 and spread > 0.01
    record_criterion("criterion 3", ok, f"|nabla R| max {worst:.2e} (tol 1e-3); c=1 |Riem|^2 spread {spread:.1%} (> 1%)")
    assert ok


def test_criterion_4_closed_form():
    worst = 0.0
    for n in (0, 1):
        for c in (0.0, 1.0):
            for q in points(Quadratic(n), 20, SEED + n):
                worst = max(worst, rel(chn_closed_form(n, c, q), deformed_fs_metric(Quadratic(n), c, q)))
    ok = worst < 1e-10
    record_criterion("criterion 4", ok, f"closed form vs assembled metric {worst:.2e} (tol 1e-10)")
    assert ok


def test_criterion_5_scaling_isometry():
    worst = 0.0
    for model in (Quadratic(0), Quadratic(1), cubic_x3()):
        for q in points(model, 20, SEED):
            for lam in (math.log(2), -math.log(2)):
                J = scaling_jacobian(lam, model.n)
                for c in (0.0, 0.5, 1.0):
                    pulled = J.T @ deformed_fs_metric(model, c, scaling_map(lam, q)) @ J
                    worst = max(worst, rel(pulled, deformed_fs_metric(model, math.exp(-lam) * c, q)))
    ok = worst < 1e-10
    record_criterion("criterion 5", ok, f"pullback identity {worst:.2e} (tol 1e-10)")
    assert ok


FRAME_CASES = [(Quadratic(0), 0.0), (Quadratic(0), 1.0), (Quadratic(1), 0.5), (cubic_x3(), 0.0), (cubic_x3(), 1.0)]


def test_criterion_6_frame_identities():
    err = dict(metric=0.0, pairing=0.0, omega1=0.0, square=0.0, product=0.0)
    sigmas = set()
    for j, (model, c) in enumerate(FRAME_CASES):
        for q in points(model, 2, SEED + j):
            L = q.layout
            g = deformed_fs_metric(model, c, q)
            err["metric"] = max(err["metric"], rel(frame_form_metric(model, c, q), g))
            canonical = np.zeros((L.dim, L.dim))
            canonical[L.zeta_t, L.zeta] = np.eye(q.n + 1)
            canonical -= canonical.T
            err["pairing"] = max(err["pairing"], float(np.max(np.abs(pairing_form(model, q) - canonical))))
            w1, w2, w3 = kahler_forms(model, c, q)
            routes = (w1, omega1_expanded(model, c, q), two_form_of(g, j1_from_holomorphic(model, c, q)))
            err["omega1"] = max(err["omega1"], max(float(np.max(np.abs(a - b))) for a in routes for b in routes))
            Js = [complex_structure(g, w) for w in (w1, w2, w3)]
            err["square"] = max(err["square"], max(float(np.max(np.abs(J @ J + np.eye(L.dim)))) for J in Js))
            sigma = quaternion_sign(*Js)
            sigmas.add(sigma)
            err["product"] = max(err["product"], float(np.max(np.abs(Js[0] @ Js[1] - sigma * Js[2]))))
    tols = dict(metric=1e-9, pairing=1e-10, omega1=1e-7, square=1e-7, product=1e-7)
    ok = all(err[k] < tols[k] for k in tols) and len(sigmas) == 1
    detail = ", ".join(f"{k} {err[k]:.1e} (tol {tols[k]:g})" for k in tols) + f", sigma {sorted(sigmas)}"
    record_criterion("criterion 6 (identities)", ok, detail)
    assert ok


def test_criterion_6_omega1_structure_equation():
    # what omega_1 actually satisfies: d omega_1 = 2 (theta_2 ^ omega_3 - theta_3 ^ omega_2)
    worst = size = 0.0
    for j, (model, c) in enumerate(FRAME_CASES[:3]):
        (q,) = points(model, 1, SEED + j)
        dw = omega1_differential(model, c, q)
        worst = max(worst, float(np.max(np.abs(dw - omega1_structure_rhs(model, c, q)))))
        size = max(size, float(np.max(np.abs(dw))))
    ok = worst < 1e-5
    record_criterion("criterion 6 (d omega_1 structure equation)", ok, f"residual {worst:.2e} (tol 1e-5), |d omega_1| {size:.2f}")
    assert ok


@pytest.mark.xfail(strict=True, reason="omega_1 is not closed; d omega_1 equals 2(theta_2^omega_3 - theta_3^omega_2)")
def test_criterion_6_omega1_closed_literal():
    worst = 0.0
    for j, (model, c) in enumerate(FRAME_CASES[:3]):
        (q,) = points(model, 1, SEED + j)
        worst = max(worst, float(np.max(np.abs(omega1_differential(model, c, q)))))
    ok = worst < 1e-5
    record_criterion("criterion 6 (d omega_1 ~ 0, literal)", ok, f"max |d omega_1| {worst:.2f} (tol 1e-5); expected failure")
    assert ok


def test_criterion_7_lower_bounds():
    model = cubic_x3()
    rng = np.random.default_rng(SEED)
    base_min = []
    aligned = 0.0
    for _ in range(20):
        p = PskPoint([complex(rng.uniform(-2, 2), rng.uniform(0.2, 3))])
        base_min.append(base_bound_gap(model, p, 1 / 3))
        M = base_metric(model, p) - np.outer(dc_potential(model, p), dc_potential(model, p)) / 12
        _, vecs = np.linalg.eigh(M)
        aligned = max(aligned, 1 - abs(vecs[0, 0]))  # chart is (y, x): d/dy is index 0
    base_ok = -1e-10 <= min(base_min) and max(base_min) <= 1e-6 and aligned < 1e-8
    gaps = [lower_bound_gap(model, 1.0, 0.5, 1 / 3, q) for q in points(model, 50, SEED, rho_range=(0.61, 3.0))]
    gap_ok = min(gaps) >= -1e-10
    ok = base_ok and gap_ok
    record_criterion(
        "criterion 7", ok,
        f"base min eigenvalue in [{min(base_min):.1e}, {max(base_min):.1e}], kernel along d/dy (defect {aligned:.1e}); "
        f"fibre gap min eigenvalue {min(gaps):.2e}",
    )
    assert ok


def test_criterion_8_rmap_algebra():
    from conftest import cubic_n2, cubic_stu

    inv = euler = pot = fd = 0.0
    for model in (cubic_x3(), cubic_n2(), cubic_stu()):
        cubic = model.cubic
        for q in points(model, 5, SEED):
            p = PskPoint(q.X)
            x = p.x
            K = complex_hessian_cubic(cubic, x)
            inv = max(inv, float(np.max(np.abs(K @ base_metric_inverse_cubic(cubic, x) - np.eye(cubic.n)))))
            # integer-valued point so the Euler identities are exact in floating point
            xi = np.round(3 * x) + 1.0
            h, h1, h2, h3 = cubic.h(xi), cubic.grad(xi), cubic.hess(xi), cubic.third()
            euler = max(euler, abs(h1 @ xi - 3 * h), float(np.max(np.abs(h2 @ xi - 2 * h1))), float(np.max(np.abs(h3 @ xi - h2))))
            f = special_matrices(model, p.z, check=False).f
            pot = max(pot, abs(8 * cubic.h(x) - f) / abs(f))
            fd = max(fd, rel(base_metric_fd(model, p), base_metric(model, p)))
    ok = inv < 1e-10 and euler == 0.0 and pot < 1e-10 and fd < 1e-7
    record_criterion(
        "criterion 8", ok,
        f"inverse {inv:.1e} (1e-10), Euler {euler:g} (exact), 8h = f {pot:.1e} (1e-10), FD Hessian {fd:.1e} (1e-7)",
    )
    assert ok


def test_criterion_9_completeness_probes():
    q = QkPoint([], 1.0, 0.3, [0.2], [-0.4])
    eps = math.exp(-4)
    l0, b0 = radial_divergence_probe(Quadratic(0), 0.0, 1.0, eps, q)
    l1, b1 = radial_divergence_probe(Quadratic(0), 1.0, 1.0, eps, q)
    exact1 = radial_length_exact(1.0, 1.0, eps)
    radial_ok = abs(l0 - 2.0) < 1e-3 and abs(l1 - exact1) < 1e-3 and l1 > 2.0
    lengths = {d: base_boundary_length(Quadratic(1), d) for d in (1e-2, 1e-3, 1e-4)}
    base_ok = all(L > 0.5 * abs(math.log(d)) - BASE_BOUNDARY_C for d, L in lengths.items())
    ok = radial_ok and base_ok
    record_criterion(
        "criterion 9", ok,
        f"radial c=0 {l0:.6f} (2), c=1 {l1:.6f} vs quadrature {exact1:.6f}; base lengths "
        + ", ".join(f"{d:g}: {L:.4f} > {0.5 * abs(math.log(d)) - BASE_BOUNDARY_C:.4f}" for d, L in lengths.items()),
    )
    assert ok
