"""Holomorphic prepotentials and the matrices built from them.

Two families are supported:

* ``Quadratic(n)``: ``F = (i/2) ((z^0)^2 - sum_mu (z^mu)^2)`` on
  ``|z^0|^2 > sum |z^mu|^2`` (complex hyperbolic space).
* ``VerySpecial(h)``: ``F = h(z^1, ..., z^n) / z^0`` for a real cubic form
  ``h`` (image of the r-map).

Indices ``I, J`` run over ``0..n``; homogeneous coordinates ``z`` are complex
vectors of length ``n + 1``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import permutations

import numpy as np

from .errors import DomainError, ModelViolationError, OutsideConeError

__all__ = [
    "CubicForm",
    "Quadratic",
    "VerySpecial",
    "PrepotentialJet",
    "SpecialMatrices",
    "eval_jet",
    "special_matrices",
    "signature",
    "SIGNATURE_TOL",
]

SIGNATURE_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class CubicForm:
    """Real cubic form ``h(x) = (1/6) sum h_{abc} x^a x^b x^c``.

    ``coefficients`` is the fully symmetric array of third derivatives
    ``h_{abc}``, so the Euler identities hold exactly for integer entries.
    """

    coefficients: np.ndarray

    def __post_init__(self):
        c = np.array(self.coefficients, dtype=float)
        if c.ndim != 3 or len(set(c.shape)) != 1 or c.shape[0] == 0:
            raise ValueError(f"cubic coefficients must be an n x n x n array, got shape {c.shape}")
        for perm in permutations(range(3)):
            if not np.array_equal(c, c.transpose(perm)):
                raise ValueError("cubic coefficients must be fully symmetric")
        c.setflags(write=False)
        object.__setattr__(self, "coefficients", c)

    @property
    def n(self) -> int:
        return self.coefficients.shape[0]

    @classmethod
    def from_entries(cls, n: int, entries) -> "CubicForm":
        """Build from ``(a, b, c, value)`` entries with 1-based indices.

        Each entry sets ``h_{abc}`` and all its permutations; two entries that
        name the same symmetric slot with different values are rejected.
        """
        coeffs = np.zeros((n, n, n))
        seen: dict[tuple, float] = {}
        for entry in entries:
            *idx, value = entry
            if len(idx) != 3:
                raise ValueError(f"cubic entry {entry!r} must be (a, b, c, value)")
            idx = tuple(int(i) for i in idx)
            if any(i < 1 or i > n for i in idx):
                raise ValueError(f"cubic entry {entry!r} has an index outside 1..{n}")
            key = tuple(sorted(idx))
            value = float(value)
            if key in seen and seen[key] != value:
                raise ValueError(
                    f"conflicting values for h_{key}: {seen[key]} vs {value} (entry {entry!r})"
                )
            seen[key] = value
            for perm in set(permutations(key)):
                coeffs[tuple(i - 1 for i in perm)] = value
        return cls(coeffs)

    @classmethod
    def from_monomials(cls, n: int, monomials) -> "CubicForm":
        """Build from ``{(a, b, c): coefficient}`` of ``x^a x^b x^c`` (1-based)."""
        coeffs = np.zeros((n, n, n))
        for idx, value in monomials.items():
            key = tuple(sorted(int(i) for i in idx))
            if len(key) != 3 or any(i < 1 or i > n for i in key):
                raise ValueError(f"bad cubic monomial index {idx!r}")
            perms = set(permutations(key))
            # (1/6) * len(perms) * h_abc must equal the monomial coefficient
            slot = 6.0 * float(value) / len(perms)
            for perm in perms:
                coeffs[tuple(i - 1 for i in perm)] += slot
        return cls(coeffs)

    def h(self, x):
        return np.einsum("abc,a,b,c->", self.coefficients, x, x, x) / 6.0

    def grad(self, x):
        return np.einsum("abc,b,c->a", self.coefficients, x, x) / 2.0

    def hess(self, x):
        return np.einsum("abc,c->ab", self.coefficients, x)

    def third(self):
        return self.coefficients


@dataclass(frozen=True)
class Quadratic:
    n: int

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("n must be non-negative")


@dataclass(frozen=True)
class VerySpecial:
    cubic: CubicForm
    n: int = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "n", self.cubic.n)


@dataclass(frozen=True, eq=False)
class PrepotentialJet:
    z: np.ndarray
    F: complex
    F_I: np.ndarray
    F_IJ: np.ndarray
    F_IJK: np.ndarray


@dataclass(frozen=True, eq=False)
class SpecialMatrices:
    N: np.ndarray
    f: float
    scriptN: np.ndarray
    R: np.ndarray
    I: np.ndarray  # noqa: E741
    Hhat: np.ndarray

    @property
    def I_inv(self) -> np.ndarray:
        return np.linalg.inv(self.I)


def _as_z(model, z) -> np.ndarray:
    z = np.asarray(z, dtype=complex).reshape(-1)
    if z.size != model.n + 1:
        raise ValueError(f"expected {model.n + 1} homogeneous coordinates, got {z.size}")
    return z


def eval_jet(model, z) -> PrepotentialJet:
    """``F`` and its holomorphic derivatives up to third order at ``z``."""
    z = _as_z(model, z)
    n1 = model.n + 1
    if isinstance(model, Quadratic):
        eta = np.diag([1.0] + [-1.0] * model.n).astype(complex)
        F = 0.5j * z @ eta @ z
        return PrepotentialJet(z, F, 1j * eta @ z, 1j * eta, np.zeros((n1, n1, n1), complex))
    if isinstance(model, VerySpecial):
        return _very_special_jet(model.cubic, z)
    raise TypeError(f"unknown prepotential model {model!r}")


def _very_special_jet(cubic: CubicForm, z) -> PrepotentialJet:
    z0, w = z[0], z[1:]
    if z0 == 0:
        raise DomainError("F = h(z')/z^0 is undefined at z^0 = 0")
    n1 = z.size
    c = cubic.coefficients.astype(complex)
    h = np.einsum("abc,a,b,c->", c, w, w, w) / 6.0
    h1 = np.einsum("abc,b,c->a", c, w, w) / 2.0
    h2 = np.einsum("abc,c->ab", c, w)

    F_I = np.empty(n1, complex)
    F_I[0] = -h / z0**2
    F_I[1:] = h1 / z0

    F_IJ = np.empty((n1, n1), complex)
    F_IJ[0, 0] = 2 * h / z0**3
    F_IJ[0, 1:] = F_IJ[1:, 0] = -h1 / z0**2
    F_IJ[1:, 1:] = h2 / z0

    F_IJK = np.empty((n1, n1, n1), complex)
    F_IJK[0, 0, 0] = -6 * h / z0**4
    F_IJK[0, 0, 1:] = F_IJK[0, 1:, 0] = F_IJK[1:, 0, 0] = 2 * h1 / z0**3
    F_IJK[0, 1:, 1:] = F_IJK[1:, 0, 1:] = F_IJK[1:, 1:, 0] = -h2 / z0**2
    F_IJK[1:, 1:, 1:] = c / z0
    return PrepotentialJet(z, h / z0, F_I, F_IJ, F_IJK)


def signature(matrix, tol: float = SIGNATURE_TOL) -> tuple[int, int]:
    """``(#positive, #negative)`` eigenvalues of a real symmetric matrix.

    Eigenvalues with magnitude below ``tol`` (relative to the largest) make
    the signature ill-defined and raise :class:`ModelViolationError`.
    """
    ev = np.linalg.eigvalsh(matrix)
    scale = max(1.0, float(np.max(np.abs(ev)))) if ev.size else 1.0
    if np.any(np.abs(ev) < tol * scale):
        raise ModelViolationError(f"near-degenerate matrix, eigenvalues {ev}")
    return int(np.sum(ev > 0)), int(np.sum(ev < 0))


def _hhat(R: np.ndarray, I: np.ndarray) -> np.ndarray:  # noqa: E741
    I_inv = np.linalg.inv(I)
    top = np.hstack([I_inv, I_inv @ R])
    bottom = np.hstack([R @ I_inv, I + R @ I_inv @ R])
    H = np.vstack([top, bottom])
    return (H + H.T) / 2.0


def special_matrices(model, z, check: bool = True) -> SpecialMatrices:
    """``N``, ``f``, the period matrix ``scriptN = R + iI`` and ``Hhat`` at ``z``.

    With ``check`` the signature of ``N`` and definiteness of ``I`` and
    ``Hhat`` are verified.
    """
    jet = eval_jet(model, z)
    z = jet.z
    N = 2.0 * jet.F_IJ.imag
    f = float(np.real(z @ N @ np.conj(z)))
    if not f > 0:
        raise OutsideConeError(f"f = z^T N conj(z) = {f} is not positive at z = {z}")
    Nz = N @ z
    scriptN = np.conj(jet.F_IJ) + 1j * np.outer(Nz, Nz) / (z @ N @ z)
    scriptN = (scriptN + scriptN.T) / 2.0
    R, I = scriptN.real.copy(), scriptN.imag.copy()  # noqa: E741
    if check:
        sig = signature(N)
        if sig != (1, model.n):
            raise ModelViolationError(f"N has signature {sig}, expected (1, {model.n})")
        if np.min(np.linalg.eigvalsh(I)) <= 0:
            raise ModelViolationError("Im(scriptN) is not positive definite")
    H = _hhat(R, I)
    if check and np.min(np.linalg.eigvalsh(H)) <= 0:
        raise ModelViolationError("Hhat is not positive definite")
    return SpecialMatrices(N=N, f=f, scriptN=scriptN, R=R, I=I, Hhat=H)
