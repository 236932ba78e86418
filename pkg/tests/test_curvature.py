import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import cubic_x3
from qkmetric import standard_metrics as sm
from qkmetric.cmap import QkPoint, metric_field
from qkmetric.curvature import (
    christoffel,
    covariant_riemann,
    curvature_report,
    qk_scalar_curvature,
    riem_norm2_cubic_line,
    riemann_lowered,
    riemann_symmetry_defect,
)
from qkmetric.diffengine import MetricField
from qkmetric.errors import DomainError, SingularityError
from qkmetric.prepotential import Quadratic
from qkmetric.sampling import random_qk_points


def warped_3d():
    # a generic smooth metric with no symmetries to hide behind
    def g(p):
        x, y, z = p
        return np.array([
            [1 + 0.3 * y**2, 0.1 * np.sin(z), 0.05 * x],
            [0.1 * np.sin(z), 2 + 0.2 * np.cos(x), 0.1 * y * z],
            [0.05 * x, 0.1 * y * z, 1.5 + 0.25 * x * y],
        ])

    return MetricField(g, 3, "warped")


# --- reference metrics -------------------------------------------------------


def test_half_plane_christoffel(oracle):
    G = christoffel(sm.hyperbolic_half_plane(), [0.3, 2.0])
    ref = np.array(oracle["half_plane_christoffel_y2"])
    assert np.allclose(G, ref, atol=1e-9)
    assert G[0, 0, 1] == pytest.approx(-0.5, abs=1e-9)  # Gamma^x_xy
    assert G[1, 0, 0] == pytest.approx(0.5, abs=1e-9)  # Gamma^y_xx


def test_flat_christoffel_vanishes():
    assert np.max(np.abs(christoffel(sm.flat(3), [0.2, -1.0, 3.0]))) < 1e-9


def test_half_plane_curvature(oracle):
    rep = curvature_report(sm.hyperbolic_half_plane(), [0.3, 2.0])
    assert rep.scalar == pytest.approx(oracle["half_plane_curvature"]["scalar"], abs=1e-4)
    assert rep.riem_norm2 == pytest.approx(4.0, abs=1e-3)
    assert rep.riem_norm2 == pytest.approx(rep.scalar**2, rel=1e-6)


def test_sphere_has_positive_scalar():
    assert curvature_report(sm.round_sphere(), [1.0, 0.3]).scalar == pytest.approx(2.0, abs=1e-6)


def test_half_plane_domain_error():
    with pytest.raises(DomainError):
        sm.hyperbolic_half_plane()([0.0, -1.0])


def test_singular_metric_reports_condition_number():
    gf = MetricField(lambda p: np.diag([1.0, 0.0]), 2)
    with pytest.raises(SingularityError, match="condition number"):
        christoffel(gf, [0.0, 0.0])


# --- the deformed metrics ---------------------------------------------------


@pytest.mark.parametrize("c", [0.0, 0.5, 1.0])
def test_n0_curvature_against_symbolic_oracle(oracle, c):
    q = oracle["fs_n0_point"]
    ref = oracle[f"fs_n0_c{c:g}_curvature_at_point"]
    rep = curvature_report(metric_field(Quadratic(0), c), q)
    assert rep.scalar == pytest.approx(-24, abs=1e-3)
    assert rep.scalar == pytest.approx(ref["scalar"], rel=1e-6)
    assert rep.riem_norm2 == pytest.approx(ref["riem_norm2"], rel=1e-6)
    assert rep.einstein_residual < 1e-4


def test_x3_rnorm2_spot_values():
    assert riem_norm2_cubic_line(0, 1) == pytest.approx(2176 / 3)
    assert riem_norm2_cubic_line(0, 3.7) == pytest.approx(2176 / 3)
    assert riem_norm2_cubic_line(1, 1) == pytest.approx(1654272 / 4374)
    assert qk_scalar_curvature(0) == -24 and qk_scalar_curvature(1) == -64


@pytest.mark.parametrize("c,rho", [(0.0, 0.8), (1.0, 1.0), (0.3, 1.7)])
def test_x3_rnorm2_matches_closed_form(c, rho):
    q = QkPoint([0.4 + 1.2j], rho, -0.3, [0.2, 0.5], [-0.6, 0.1])
    rep = curvature_report(metric_field(cubic_x3(), c), q.chart)
    assert rep.riem_norm2 == pytest.approx(riem_norm2_cubic_line(c, rho), rel=1e-3)
    assert rep.scalar == pytest.approx(-64, rel=1e-3)


def test_x3_covariant_derivative_vanishes_at_c0():
    q = QkPoint([-0.2 + 0.9j], 1.4, 0.3, [0.1, -0.2], [0.4, 0.3])
    rep = curvature_report(metric_field(cubic_x3(), 0.0), q.chart, covariant_derivative=True)
    assert rep.nabla_R_norm < 1e-3


def test_covariant_derivative_nonzero_when_deformed():
    q = QkPoint([], 0.8, 0.3, [0.1], [0.4])
    rep = curvature_report(metric_field(Quadratic(0), 1.0), q.chart, covariant_derivative=True)
    assert rep.nabla_R_norm > 0.1


def test_rnorm2_varies_with_rho_when_deformed():
    vals = [riem_norm2_cubic_line(1.0, r) for r in (0.5, 1.0, 2.0)]
    assert (max(vals) - min(vals)) / max(vals) > 0.01


# --- identities -----------------------------------------------------------


def _check_symmetries(R):
    d = riemann_symmetry_defect(R)
    assert max(d.values()) < 1e-6, d


@settings(max_examples=10)
@given(st.integers(0, 2**32 - 1), st.sampled_from([0.0, 0.4, 1.5]))
def test_riemann_symmetries_n0(seed, c):
    q = random_qk_points(Quadratic(0), 1, np.random.default_rng(seed))[0]
    rep = curvature_report(metric_field(Quadratic(0), c), q.chart)
    _check_symmetries(rep.riemann_low)
    G = rep.christoffel
    assert np.max(np.abs(G - G.transpose(0, 2, 1))) < 1e-12 * max(1, np.max(np.abs(G)))


@given(st.lists(st.floats(-1, 1), min_size=3, max_size=3))
def test_riemann_symmetries_generic(p):
    _check_symmetries(riemann_lowered(warped_3d(), np.array(p)))


@pytest.mark.parametrize(
    "gf,p",
    [
        (sm.round_sphere(), [1.1, 0.2]),
        (warped_3d(), [0.3, -0.4, 0.8]),
        (metric_field(Quadratic(0), 0.5), [1.1, 0.2, 0.3, -0.5]),
    ],
)
def test_contracted_second_bianchi(gf, p):
    rep = curvature_report(gf, p, covariant_derivative=True)
    assert rep.bianchi2_residual < 1e-3


def test_covariant_derivative_shape_and_half_plane_zero():
    nab = covariant_riemann(sm.hyperbolic_half_plane(), [0.1, 1.5])
    assert nab.shape == (2, 2, 2, 2, 2)
    assert np.max(np.abs(nab)) < 1e-5


@settings(max_examples=6)
@given(st.integers(0, 2**32 - 1), st.sampled_from([0.0, 0.5, 1.0]))
def test_einstein_property_n1(seed, c):
    m = Quadratic(1)
    q = random_qk_points(m, 1, np.random.default_rng(seed))[0]
    rep = curvature_report(metric_field(m, c), q.chart)
    assert rep.einstein_residual < 1e-4 * rep.metric_norm
    assert rep.scalar == pytest.approx(qk_scalar_curvature(1), rel=1e-3)
