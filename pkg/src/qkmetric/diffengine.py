"""Finite-difference calculus on real coordinate charts.

Every derivative is a central difference evaluated at two step sizes
``h`` and ``h/2`` and combined by one Richardson elimination, which removes
the ``O(h^2)`` truncation term.  The base step along coordinate ``i`` is
``1e-3 * max(1, |p_i|)``.  Fields are plain callables taking a 1-D float
array; they may return scalars or arrays of any shape (real or complex).

Two-forms are stored as antisymmetric matrices ``w[i, j]``, the coefficient
of ``dx^i ^ dx^j`` for ``i < j``.  Wedge products follow
``a ^ b = a (x) b - b (x) a``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import EvaluationError

__all__ = [
    "REL_STEP",
    "MetricField",
    "as_chart_point",
    "base_steps",
    "partial_derivative",
    "gradient",
    "hessian",
    "derivatives_upto_2",
    "exterior_derivative",
    "exterior_derivative_2form",
    "wedge",
    "wedge_1_2",
    "wedge_2forms",
    "sym_product",
]

REL_STEP = 1e-3

ScalarField = Callable[[np.ndarray], float]
OneFormField = Callable[[np.ndarray], np.ndarray]
TwoFormField = Callable[[np.ndarray], np.ndarray]


def as_chart_point(p) -> np.ndarray:
    p = np.array(p, dtype=float).reshape(-1)
    if p.size == 0:
        raise ValueError("chart point must have positive dimension")
    if not np.all(np.isfinite(p)):
        raise ValueError(f"chart point has non-finite entries: {p}")
    return p


def base_steps(p: np.ndarray, rel_step: float = REL_STEP) -> np.ndarray:
    return rel_step * np.maximum(1.0, np.abs(p))


def _evaluate(field, q: np.ndarray) -> np.ndarray:
    value = np.asarray(field(q))
    if not np.all(np.isfinite(value)):
        raise EvaluationError(
            f"field returned a non-finite value at {q.tolist()}", point=q.copy()
        )
    return value


def _richardson(coarse, fine):
    return (4.0 * fine - coarse) / 3.0


def partial_derivative(
    field: ScalarField,
    p,
    index: int,
    order: int = 1,
    index2: int | None = None,
    rel_step: float = REL_STEP,
):
    """Partial derivative of ``field`` at ``p``.

    ``order=1`` differentiates along ``index``; ``order=2`` gives
    ``d^2 f / dx_index dx_index2`` (``index2`` defaults to ``index``).
    """
    p = as_chart_point(p)
    if order not in (1, 2):
        raise ValueError(f"order must be 1 or 2, got {order}")
    steps = base_steps(p, rel_step)
    if order == 1:
        if index2 is not None:
            raise ValueError("index2 only applies to order=2")
        return _first(field, p, index, steps[index])
    if index2 is None or index2 == index:
        return _second_diag(field, p, index, steps[index], _evaluate(field, p))
    return _second_mixed(field, p, index, index2, steps[index], steps[index2])


def _shift(p, i, h):
    q = p.copy()
    q[i] += h
    return q


def _shift2(p, i, hi, j, hj):
    q = p.copy()
    q[i] += hi
    q[j] += hj
    return q


def _first(field, p, i, h):
    def central(s):
        return (_evaluate(field, _shift(p, i, s)) - _evaluate(field, _shift(p, i, -s))) / (2 * s)

    return _richardson(central(h), central(h / 2))


def _second_diag(field, p, i, h, f0):
    def central(s):
        plus = _evaluate(field, _shift(p, i, s))
        minus = _evaluate(field, _shift(p, i, -s))
        return (plus - 2.0 * f0 + minus) / (s * s)

    return _richardson(central(h), central(h / 2))


def _second_mixed(field, p, i, j, hi, hj):
    def central(si, sj):
        pp = _evaluate(field, _shift2(p, i, si, j, sj))
        pm = _evaluate(field, _shift2(p, i, si, j, -sj))
        mp = _evaluate(field, _shift2(p, i, -si, j, sj))
        mm = _evaluate(field, _shift2(p, i, -si, j, -sj))
        return (pp - pm - mp + mm) / (4.0 * si * sj)

    return _richardson(central(hi, hj), central(hi / 2, hj / 2))


def gradient(field, p, rel_step: float = REL_STEP) -> np.ndarray:
    """All first partials; output shape ``(d, *field_shape)``."""
    p = as_chart_point(p)
    steps = base_steps(p, rel_step)
    return np.stack([_first(field, p, i, steps[i]) for i in range(p.size)])


def hessian(field, p, rel_step: float = REL_STEP) -> np.ndarray:
    """All second partials; output shape ``(d, d, *field_shape)``, symmetric."""
    return derivatives_upto_2(field, p, rel_step)[2]


def derivatives_upto_2(field, p, rel_step: float = REL_STEP):
    """Value, gradient and Hessian of ``field`` at ``p`` sharing stencil points.

    Returns ``(f, df, ddf)`` with shapes ``field_shape``, ``(d, ...)`` and
    ``(d, d, ...)``.
    """
    p = as_chart_point(p)
    d = p.size
    steps = base_steps(p, rel_step)
    f0 = _evaluate(field, p)
    grad = np.empty((d,) + f0.shape, dtype=f0.dtype)
    hess = np.empty((d, d) + f0.shape, dtype=f0.dtype)
    for i in range(d):
        h = steps[i]
        first, second = [], []
        for s in (h, h / 2):
            plus = _evaluate(field, _shift(p, i, s))
            minus = _evaluate(field, _shift(p, i, -s))
            first.append((plus - minus) / (2 * s))
            second.append((plus - 2.0 * f0 + minus) / (s * s))
        grad[i] = _richardson(*first)
        hess[i, i] = _richardson(*second)
    for i in range(d):
        for j in range(i + 1, d):
            hess[i, j] = hess[j, i] = _second_mixed(field, p, i, j, steps[i], steps[j])
    return f0, grad, hess


def exterior_derivative(form: OneFormField, p, rel_step: float = REL_STEP) -> np.ndarray:
    """``d`` of a one-form field: ``(dw)_ij = d_i w_j - d_j w_i``."""
    jac = gradient(form, p, rel_step)  # jac[i, j] = d_i w_j
    return jac - jac.T


def exterior_derivative_2form(form: TwoFormField, p, rel_step: float = REL_STEP) -> np.ndarray:
    """``d`` of a two-form field as a totally antisymmetric rank-3 array."""
    jac = gradient(form, p, rel_step)  # jac[i, j, k] = d_i w_jk
    return jac + jac.transpose(1, 2, 0) + jac.transpose(2, 0, 1)


def wedge(a, b) -> np.ndarray:
    """Wedge product of two one-forms (real or complex coefficient vectors)."""
    a = np.asarray(a)
    b = np.asarray(b)
    return np.outer(a, b) - np.outer(b, a)


def wedge_1_2(a, b) -> np.ndarray:
    """Wedge of a one-form and a two-form, in the convention of :func:`exterior_derivative_2form`."""
    a = np.asarray(a)
    b = np.asarray(b)
    t = np.einsum("i,jk->ijk", a, b)
    return t + t.transpose(1, 2, 0) + t.transpose(2, 0, 1)


def wedge_2forms(a, b) -> np.ndarray:
    """Wedge product of two two-forms as a rank-4 antisymmetric array."""
    return (
        np.einsum("ij,kl->ijkl", a, b)
        - np.einsum("ik,jl->ijkl", a, b)
        + np.einsum("il,jk->ijkl", a, b)
        + np.einsum("jk,il->ijkl", a, b)
        - np.einsum("jl,ik->ijkl", a, b)
        + np.einsum("kl,ij->ijkl", a, b)
    )


def sym_product(a, b=None) -> np.ndarray:
    """Symmetric product ``a b`` as a real bilinear form.

    For complex covectors ``a b`` means ``a conj(b)`` symmetrised and the real
    part taken, so ``sym_product(v)`` is ``|v|^2 = (Re v)^2 + (Im v)^2``.
    """
    a = np.asarray(a)
    b = a if b is None else np.asarray(b)
    m = np.outer(a, np.conj(b))
    return np.real(m + m.T) / 2.0


@dataclass(frozen=True)
class MetricField:
    """Point -> symmetric matrix map on a ``dim``-dimensional chart."""

    func: Callable[[np.ndarray], np.ndarray]
    dim: int
    name: str = "metric"

    def __call__(self, p) -> np.ndarray:
        g = np.asarray(self.func(np.asarray(p, dtype=float)), dtype=float)
        if g.shape != (self.dim, self.dim):
            raise ValueError(f"{self.name}: expected {(self.dim, self.dim)} matrix, got {g.shape}")
        return (g + g.T) / 2.0
