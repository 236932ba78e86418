import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from qkmetric import diffengine as D
from qkmetric.errors import EvaluationError

coords = st.floats(-2, 2, allow_nan=False)


def points(d):
    return st.lists(coords, min_size=d, max_size=d).map(np.array)


# --- examples ---------------------------------------------------------------


def test_cubic_first_derivative():
    assert D.partial_derivative(lambda p: p[0] ** 3, [2.0], 0) == pytest.approx(12, abs=1e-7)


def test_mixed_partial_of_x2y():
    assert D.partial_derivative(lambda p: p[0] ** 2 * p[1], [1.0, 2.0], 0, order=2, index2=1) == pytest.approx(2, abs=1e-6)


def test_second_derivative_of_exp():
    assert D.partial_derivative(lambda p: np.exp(p[0]), [0.0], 0, order=2) == pytest.approx(1, abs=1e-6)


def test_d_of_x_dy():
    dw = D.exterior_derivative(lambda p: np.array([0.0, p[0]]), [0.4, -1.2])
    assert dw[0, 1] == pytest.approx(1, abs=1e-9)
    assert dw[1, 0] == pytest.approx(-1, abs=1e-9)


def test_d_of_exact_form():
    dw = D.exterior_derivative(lambda p: np.array([p[1], p[0]]), [0.7, 0.3])
    assert np.max(np.abs(dw)) < 1e-7


def test_d_of_rotation_form():
    dw = D.exterior_derivative(lambda p: np.array([-p[1], p[0]]), [0.2, 0.9])
    assert dw[0, 1] == pytest.approx(2, abs=1e-9)


# --- errors and plumbing ----------------------------------------------------


def test_non_finite_value_reports_point():
    def field(p):
        return 1.0 / p[0] if p[0] > 0 else np.nan

    with pytest.raises(EvaluationError) as info:
        D.partial_derivative(field, [0.0005], 0)
    assert info.value.point is not None and info.value.point[0] <= 0


def test_rejects_order_three():
    with pytest.raises(ValueError):
        D.partial_derivative(lambda p: p[0], [0.0], 0, order=3)


def test_chart_point_validation():
    with pytest.raises(ValueError):
        D.as_chart_point([])
    with pytest.raises(ValueError):
        D.as_chart_point([1.0, np.inf])


def test_base_steps_scale_with_coordinates():
    assert np.allclose(D.base_steps(np.array([0.1, -4.0])), [1e-3, 4e-3])


def test_derivatives_upto_2_matches_separate_calls():
    f = lambda p: np.sin(p[0]) * p[1] ** 2 + p[2] * p[0]  # noqa: E731
    p = np.array([0.3, -0.8, 1.1])
    f0, g, H = D.derivatives_upto_2(f, p)
    assert f0 == pytest.approx(f(p))
    assert np.allclose(g, D.gradient(f, p), atol=1e-12)
    assert np.allclose(H, D.hessian(f, p), atol=1e-12)
    exact = np.array([
        [-np.sin(0.3) * 0.64, 2 * np.cos(0.3) * -0.8, 1],
        [2 * np.cos(0.3) * -0.8, 2 * np.sin(0.3), 0],
        [1, 0, 0],
    ])
    assert np.allclose(H, exact, atol=1e-8)


def test_gradient_of_matrix_field_has_leading_axis():
    f = lambda p: np.array([[p[0], p[1]], [p[1], p[0] * p[1]]])  # noqa: E731
    g = D.gradient(f, [2.0, 3.0])
    assert g.shape == (2, 2, 2)
    assert np.allclose(g[0], [[1, 0], [0, 3]], atol=1e-9)


def test_metric_field_symmetrises_and_checks_shape():
    gf = D.MetricField(lambda p: np.array([[1.0, 2.0], [2.0 + 1e-15, 3.0]]), 2)
    g = gf([0.0, 0.0])
    assert np.array_equal(g, g.T)
    bad = D.MetricField(lambda p: np.eye(3), 2)
    with pytest.raises(ValueError):
        bad([0.0, 0.0])


def test_wedge_and_symmetric_product_conventions():
    a, b = np.array([1.0, 0.0]), np.array([0.0, 1.0])
    assert np.array_equal(D.wedge(a, b), [[0, 1], [-1, 0]])
    v = np.array([1.0 + 2.0j, 0.0])
    assert np.allclose(D.sym_product(v), [[5, 0], [0, 0]])


def test_wedge_1_2_matches_leibniz_rule():
    f = lambda p: p[0] * p[1] + np.cos(p[2])  # noqa: E731
    w = lambda p: np.array([[0, p[2], 1], [-p[2], 0, p[0] ** 2], [-1, -p[0] ** 2, 0]])  # noqa: E731
    p = np.array([0.3, 0.5, -0.7])
    lhs = D.exterior_derivative_2form(lambda x: f(x) * w(x), p)
    rhs = D.wedge_1_2(D.gradient(f, p), w(p)) + f(p) * D.exterior_derivative_2form(w, p)
    assert np.max(np.abs(lhs - rhs)) < 1e-9


def test_wedge_2forms_is_antisymmetric_and_gives_volume():
    e = np.eye(4)
    w = D.wedge(e[0], e[1]) + D.wedge(e[2], e[3])
    ww = D.wedge_2forms(w, w)
    assert ww[0, 1, 2, 3] == pytest.approx(2.0)
    assert ww[1, 0, 2, 3] == pytest.approx(-2.0)
    assert ww[0, 2, 1, 3] == pytest.approx(-2.0)


# --- properties -------------------------------------------------------------


def _scalar(p):
    return np.sin(p[0] * p[1]) + p[2] ** 3 * p[0] - np.exp(0.3 * p[1]) * p[2]


@given(points(3))
def test_dd_is_zero(p):
    dd = D.exterior_derivative(lambda q: D.gradient(_scalar, q), p)
    assert np.max(np.abs(dd)) < 1e-6


@given(points(3))
def test_d_of_exact_two_form_is_zero(p):
    one = lambda q: np.array([q[1] * q[2], np.sin(q[0]), q[0] * q[1] ** 2])  # noqa: E731
    ddd = D.exterior_derivative_2form(lambda q: D.exterior_derivative(one, q), p)
    assert np.max(np.abs(ddd)) < 1e-6


@given(points(3), st.integers(0, 2), st.integers(0, 2))
def test_mixed_partials_commute(p, i, j):
    a = D.partial_derivative(_scalar, p, i, order=2, index2=j)
    b = D.partial_derivative(_scalar, p, j, order=2, index2=i)
    assert abs(a - b) < 1e-6


@given(
    st.lists(st.integers(-3, 3), min_size=7, max_size=7),
    st.floats(-2, 2),
    st.integers(1, 2),
)
def test_halving_step_is_stable_for_polynomials(coeffs, x, order):
    poly = np.polynomial.Polynomial(coeffs)
    f = lambda p: poly(p[0])  # noqa: E731
    a = D.partial_derivative(f, [x], 0, order=order)
    b = D.partial_derivative(f, [x], 0, order=order, rel_step=D.REL_STEP / 2)
    scale = max(1.0, abs(a))
    assert abs(a - b) / scale < 1e-6
    exact = poly.deriv(order)(x)
    assert abs(a - exact) / max(1.0, abs(exact)) < 1e-6


@given(points(2))
def test_first_derivative_relative_accuracy_on_analytic_field(p):
    f = lambda q: np.exp(q[0]) * np.cos(q[1])  # noqa: E731
    d0 = D.partial_derivative(f, p, 0)
    assert abs(d0 - f(p)) <= 1e-7 * max(1.0, abs(f(p)))
