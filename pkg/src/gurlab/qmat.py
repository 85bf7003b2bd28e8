"""Dense complex linear algebra for small quantum systems.

Matrices are plain ``numpy`` complex arrays. ``Observable`` wraps a Hermitian
matrix together with its spectral data, ``State`` wraps either a normalized
vector or a density matrix.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union

import numpy as np

from .errors import (
    DimensionError,
    EigenvalueOnBranchCut,
    InvalidState,
    NotDiagonalizable,
    NotHermitian,
    ValidationError,
)
from .tolerances import DEFAULT

__all__ = [
    "Observable",
    "State",
    "as_matrix",
    "observable",
    "pure_state",
    "density_state",
    "expectation",
    "mat_exp",
    "exp_scaled",
    "mat_log_principal",
    "tensor",
    "commutator",
    "anticommutator",
    "random_hermitian",
    "haar_state",
]


def _validate_square(m, name: str = "matrix") -> np.ndarray:
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
        raise ValidationError(f"{name} must be a non-empty square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValidationError(f"{name} has non-finite entries")
    return a


def _is_hermitian(a: np.ndarray, tol: float) -> bool:
    scale = max(float(np.max(np.abs(a))), 1.0)
    return float(np.max(np.abs(a - a.conj().T))) <= tol * scale


@dataclass(frozen=True, eq=False)
class Observable:
    """Hermitian matrix with cached eigendecomposition.

    ``sigma_max`` is the largest singular value, i.e. ``max |eigenvalue|``.
    """

    matrix: np.ndarray
    eigenvalues: np.ndarray = field(repr=False)
    eigenvectors: np.ndarray = field(repr=False)
    sigma_max: float = 0.0
    name: Optional[str] = None

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def __array__(self, dtype=None, copy=None):
        return self.matrix if dtype is None else self.matrix.astype(dtype)


@dataclass(frozen=True, eq=False)
class State:
    """Pure state vector or density matrix."""

    kind: str
    vector: Optional[np.ndarray] = None
    rho: Optional[np.ndarray] = None

    @property
    def dim(self) -> int:
        return self.vector.shape[0] if self.kind == "pure" else self.rho.shape[0]

    @property
    def is_pure(self) -> bool:
        return self.kind == "pure"

    def density(self) -> np.ndarray:
        if self.kind == "pure":
            return np.outer(self.vector, self.vector.conj())
        return self.rho


MatrixLike = Union[Observable, np.ndarray]


def as_matrix(m: MatrixLike) -> np.ndarray:
    if isinstance(m, Observable):
        return m.matrix
    return _validate_square(m)


def observable(m, name: Optional[str] = None, tol: float = DEFAULT.hermiticity) -> Observable:
    """Validate ``m`` as Hermitian and precompute its spectrum.

    The stored matrix is exactly Hermitized so that downstream results do not
    pick up spurious anti-Hermitian noise.
    """
    if isinstance(m, Observable):
        return m
    a = _validate_square(m, name or "observable")
    if not _is_hermitian(a, tol):
        raise NotHermitian(f"{name or 'observable'} is not Hermitian within {tol:g}")
    a = (a + a.conj().T) / 2
    w, v = np.linalg.eigh(a)
    return Observable(
        matrix=a,
        eigenvalues=w,
        eigenvectors=v,
        sigma_max=float(np.max(np.abs(w))),
        name=name,
    )


def pure_state(v, tol: float = DEFAULT.normalization) -> State:
    a = np.asarray(v, dtype=complex)
    if a.ndim != 1 or a.size < 1:
        raise InvalidState(f"state vector must be 1-D and non-empty, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise InvalidState("state vector has non-finite entries")
    norm = np.linalg.norm(a)
    if abs(norm - 1.0) > tol:
        raise InvalidState(f"state vector norm {norm!r} differs from 1 by more than {tol:g}")
    return State("pure", vector=a)


def density_state(rho, tol: float = DEFAULT.psd) -> State:
    a = _validate_square(rho, "density matrix")
    if not _is_hermitian(a, DEFAULT.hermiticity):
        raise InvalidState("density matrix is not Hermitian")
    a = (a + a.conj().T) / 2
    tr = np.trace(a).real
    if abs(tr - 1.0) > tol:
        raise InvalidState(f"density matrix trace {tr!r} differs from 1")
    if np.min(np.linalg.eigvalsh(a)) < -tol:
        raise InvalidState("density matrix is not positive semidefinite")
    return State("density", rho=a)


def expectation(state: State, m: MatrixLike) -> complex:
    """<psi|M|psi> for pure states, Tr(rho M) for density matrices."""
    a = as_matrix(m)
    if a.shape[0] != state.dim:
        raise DimensionError(f"state has dim {state.dim}, operator has dim {a.shape[0]}")
    if state.kind == "pure":
        v = state.vector
        return complex(np.vdot(v, a @ v))
    # Tr(rho M) without forming the product
    return complex(np.sum(state.rho.T * a))


def exp_scaled(x: Observable, s: complex) -> np.ndarray:
    """exp(s X) for Hermitian X and complex s, via the cached eigenbasis."""
    v = x.eigenvectors
    return (v * np.exp(s * x.eigenvalues)) @ v.conj().T


def _expm_series(a: np.ndarray, term_tol: float) -> np.ndarray:
    norm = np.linalg.norm(a, 1)
    squarings = 0
    if norm > 0.5:
        squarings = int(np.ceil(np.log2(norm / 0.5)))
    b = a / (2.0 ** squarings)
    result = np.eye(a.shape[0], dtype=complex)
    term = np.eye(a.shape[0], dtype=complex)
    for k in range(1, 60):
        term = term @ b / k
        result = result + term
        if np.linalg.norm(term, 1) <= term_tol * np.linalg.norm(result, 1):
            break
    for _ in range(squarings):
        result = result @ result
    return result


def mat_exp(m: MatrixLike, tol: float = DEFAULT.hermiticity) -> np.ndarray:
    """Matrix exponential.

    Hermitian input goes through the eigendecomposition; anything else uses
    scaling and squaring with a Taylor series truncated once the next term is
    below ``1e-16`` relative to the running sum.
    """
    if isinstance(m, Observable):
        return exp_scaled(m, 1.0)
    a = _validate_square(m)
    if not np.any(a):
        return np.eye(a.shape[0], dtype=complex)
    if _is_hermitian(a, tol):
        return exp_scaled(observable(a), 1.0)
    return _expm_series(a, DEFAULT.series_term)


def mat_log_principal(m, tols=DEFAULT) -> np.ndarray:
    """Principal logarithm of a diagonalizable matrix.

    Raises EigenvalueOnBranchCut when an eigenvalue is (numerically) zero or on
    the negative real axis, and NotDiagonalizable when the eigenvector matrix is
    too ill-conditioned to trust.
    """
    a = _validate_square(m)
    w, v = np.linalg.eig(a)
    if np.any(np.abs(w) < tols.branch_cut_modulus):
        raise EigenvalueOnBranchCut("matrix has an eigenvalue at zero")
    if np.any(np.pi - np.abs(np.angle(w)) < tols.branch_cut_angle):
        raise EigenvalueOnBranchCut("matrix has an eigenvalue on the negative real axis")
    cond = np.linalg.cond(v)
    if not np.isfinite(cond) or cond > tols.eigvec_condition:
        raise NotDiagonalizable(f"eigenvector matrix condition number {cond:.3g}")
    return (v * np.log(w)) @ np.linalg.inv(v)


def tensor(a, b) -> np.ndarray:
    return np.kron(as_matrix(a), as_matrix(b))


def commutator(a, b) -> np.ndarray:
    a, b = as_matrix(a), as_matrix(b)
    return a @ b - b @ a


def anticommutator(a, b) -> np.ndarray:
    a, b = as_matrix(a), as_matrix(b)
    return a @ b + b @ a


def random_hermitian(rng: np.random.Generator, dim: int, norm: Optional[float] = None) -> np.ndarray:
    """Hermitized standard complex Gaussian matrix, optionally rescaled to spectral norm ``norm``."""
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    h = (g + g.conj().T) / 2
    if norm is not None:
        h = h * (norm / np.max(np.abs(np.linalg.eigvalsh(h))))
    return h


def haar_state(rng: np.random.Generator, dim: int) -> State:
    v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return State("pure", vector=v / np.linalg.norm(v))
