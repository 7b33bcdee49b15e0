"""Dense complex-matrix substrate for N-particle spaces.

Basis convention: a product basis vector |k_1 ... k_N> sits at linear index
sum_n k_n d**(N-n), i.e. particle 1 is the most significant digit.  Every other
module relies on this ordering, which is also the one ``np.kron`` produces.

Operators and density operators are plain ``numpy`` arrays; the predicates and
``check_*`` helpers below validate the semantic flags (Hermitian, projector,
unitary, state) where an operation needs them.
"""

from __future__ import annotations

import enum
import os
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import (
    DimensionMismatch,
    DimensionTooLarge,
    NotADensityOperator,
    NotAProjector,
    NotHermitian,
    NotNormalized,
    NumericalDegradation,
)

DEFAULT_TOL = 1e-9
DEFAULT_MAX_DIM = 4096
MAX_DIM_ENV = "IDCLUSTERS_MAX_DIM"

# column-echelon pivots smaller than this are treated as structural zeros
_PIVOT_EPS = 1e-7


def max_dim() -> int:
    """Current dimension guard, overridable through ``IDCLUSTERS_MAX_DIM``."""
    raw = os.environ.get(MAX_DIM_ENV)
    if raw is None:
        return DEFAULT_MAX_DIM
    try:
        value = int(raw)
    except ValueError:
        raise ValueError(f"{MAX_DIM_ENV} must be a positive integer, got {raw!r}")
    if value < 1:
        raise ValueError(f"{MAX_DIM_ENV} must be a positive integer, got {raw!r}")
    return value


def check_dim(dim: int, limit: int | None = None) -> None:
    limit = max_dim() if limit is None else limit
    if dim > limit:
        raise DimensionTooLarge(f"dimension {dim} exceeds guard {limit}")


class Statistics(str, enum.Enum):
    BOSON = "boson"
    FERMION = "fermion"


@dataclass(frozen=True)
class SpaceSpec:
    """The arena H_1 x ... x H_N: ``N`` copies of a ``d``-dimensional space."""

    d: int
    N: int
    statistics: Statistics = Statistics.FERMION
    max_dim: int | None = None

    def __post_init__(self):
        if int(self.d) < 1 or int(self.N) < 1:
            raise ValueError(f"need d >= 1 and N >= 1, got d={self.d}, N={self.N}")
        object.__setattr__(self, "statistics", Statistics(self.statistics))
        check_dim(self.d**self.N, self.max_dim)

    @property
    def dim(self) -> int:
        return self.d**self.N

    @property
    def shape(self) -> tuple[int, ...]:
        return (self.d,) * self.N

    @property
    def is_fermion(self) -> bool:
        return self.statistics is Statistics.FERMION

    def label(self) -> str:
        return f"{self.statistics.value}-d{self.d}-N{self.N}"


def linear_index(digits, spec: SpaceSpec) -> int:
    """Position of the product basis vector |k_1 ... k_N> in the d**N basis."""
    digits = tuple(int(k) for k in digits)
    if len(digits) != spec.N:
        raise IndexError(f"expected {spec.N} single-particle indices, got {len(digits)}")
    index = 0
    for k in digits:
        if not 0 <= k < spec.d:
            raise IndexError(f"single-particle index {k} outside [0, {spec.d})")
        index = index * spec.d + k
    return index


def digits_of(index: int, spec: SpaceSpec) -> tuple[int, ...]:
    """Inverse of :func:`linear_index`."""
    if not 0 <= index < spec.dim:
        raise IndexError(f"index {index} outside [0, {spec.dim})")
    return tuple(int(k) for k in np.unravel_index(index, spec.shape))


def kron(A, B, limit: int | None = None) -> np.ndarray:
    """Tensor product with the first factor as the most significant index."""
    A = np.asarray(A)
    B = np.asarray(B)
    check_dim(A.shape[0] * B.shape[0], limit)
    return np.kron(A, B)


def kron_all(factors, limit: int | None = None) -> np.ndarray:
    factors = [np.asarray(f) for f in factors]
    check_dim(int(np.prod([f.shape[0] for f in factors])), limit)
    out = np.ones((1, 1), dtype=complex)
    for f in factors:
        out = np.kron(out, f)
    return out


def fro(A) -> float:
    return float(np.linalg.norm(A))


def rel_residual(A, B) -> float:
    """||A - B||_F / max(1, ||A||_F)."""
    A = np.asarray(A)
    B = np.asarray(B)
    if A.shape != B.shape:
        raise DimensionMismatch(f"shapes {A.shape} and {B.shape} differ")
    if A.size == 0:
        return 0.0
    return fro(A - B) / max(1.0, fro(A))


def op_equal(A, B, tol: float = DEFAULT_TOL) -> tuple[bool, float]:
    """Compare two operators in relative Frobenius norm.

    Returns ``(equal, residual)`` where the residual is
    ``||A - B||_F / max(1, ||A||_F)``; it is always reported.
    """
    residual = rel_residual(A, B)
    return residual <= tol, residual


def commutator(A, B) -> np.ndarray:
    return A @ B - B @ A


def hermiticity_residual(A) -> float:
    return rel_residual(A, np.conj(A).T)


def is_hermitian(A, tol: float = DEFAULT_TOL) -> bool:
    A = np.asarray(A)
    return A.ndim == 2 and A.shape[0] == A.shape[1] and hermiticity_residual(A) <= tol


def is_projector(P, tol: float = DEFAULT_TOL) -> bool:
    P = np.asarray(P)
    return is_hermitian(P, tol) and rel_residual(P, P @ P) <= tol


def is_unitary(U, tol: float = DEFAULT_TOL) -> bool:
    U = np.asarray(U)
    if U.ndim != 2 or U.shape[0] != U.shape[1]:
        return False
    return rel_residual(np.eye(U.shape[0]), np.conj(U).T @ U) <= tol


def as_square(A, name: str = "operator") -> np.ndarray:
    A = np.asarray(A, dtype=complex)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise DimensionMismatch(f"{name} must be square, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise ValueError(f"{name} has non-finite entries")
    return A


def check_hermitian(A, tol: float = DEFAULT_TOL, name: str = "operator") -> np.ndarray:
    A = as_square(A, name)
    if hermiticity_residual(A) > tol:
        raise NotHermitian(f"{name} is not Hermitian (residual {hermiticity_residual(A):.3e})")
    return A


def check_projector(P, tol: float = DEFAULT_TOL, name: str = "projector") -> np.ndarray:
    P = as_square(P, name)
    if not is_projector(P, tol):
        raise NotAProjector(f"{name} is not a Hermitian idempotent")
    return P


def check_density(rho, tol: float = DEFAULT_TOL, name: str = "state") -> np.ndarray:
    """Validate a density operator: Hermitian, eigenvalues >= -tol, unit trace."""
    rho = as_square(rho, name)
    if hermiticity_residual(rho) > tol:
        raise NotADensityOperator(f"{name} is not Hermitian")
    if abs(np.trace(rho) - 1.0) > tol:
        raise NotADensityOperator(f"{name} has trace {np.trace(rho).real:.12g}, expected 1")
    if np.linalg.eigvalsh((rho + rho.conj().T) / 2).min() < -tol:
        raise NotADensityOperator(f"{name} has a negative eigenvalue")
    return rho


def pure_state(psi) -> np.ndarray:
    """|psi><psi| for the normalized vector ``psi``."""
    psi = np.asarray(psi, dtype=complex).ravel()
    norm = np.linalg.norm(psi)
    if norm == 0:
        raise NotNormalized("zero vector has no pure state")
    psi = psi / norm
    return np.outer(psi, psi.conj())


@dataclass(frozen=True, eq=False)
class SubspaceBasis:
    """Isometry ``columns`` (dim x r) whose columns span a projector's range."""

    columns: np.ndarray

    @property
    def dim(self) -> int:
        return self.columns.shape[0]

    @property
    def rank(self) -> int:
        return self.columns.shape[1]

    @cached_property
    def projector(self) -> np.ndarray:
        V = self.columns
        return V @ V.conj().T

    def coords(self, A) -> np.ndarray:
        """Compression V^dagger A V of an operator to the subspace."""
        V = self.columns
        return V.conj().T @ A @ V

    def embed(self, a) -> np.ndarray:
        """Inverse of :meth:`coords` for operators supported on the subspace."""
        V = self.columns
        return V @ a @ V.conj().T


def _canonical_columns(B: np.ndarray) -> np.ndarray:
    # reduced echelon form of the span, then Gram-Schmidt in pivot order
    R = B.T.copy()
    r, n = R.shape
    row = 0
    for col in range(n):
        if row == r:
            break
        i = row + int(np.argmax(np.abs(R[row:, col])))
        if abs(R[i, col]) < _PIVOT_EPS:
            continue
        R[[row, i]] = R[[i, row]]
        R[row] /= R[row, col]
        others = np.arange(r) != row
        R[others] -= np.outer(R[others, col], R[row])
        row += 1
    if row != r:
        raise NumericalDegradation("could not find a full set of echelon pivots")
    Qm, _ = np.linalg.qr(R.T)
    for k in range(r):
        col = Qm[:, k]
        lead = int(np.flatnonzero(np.abs(col) > _PIVOT_EPS)[0])
        Qm[:, k] = col * (abs(col[lead]) / col[lead])
    return Qm


def orthonormal_range(P, tol: float = DEFAULT_TOL) -> SubspaceBasis:
    """Orthonormal frame for the range of a projector.

    The rank is the number of eigenvalues above 0.5.  Within the (degenerate)
    unit eigenspace the frame is made canonical: the span is brought to reduced
    echelon form, orthonormalised in pivot order, and every column is rotated
    so that its first nonzero component is positive real.  The result depends
    only on the subspace, not on the eigensolver's choice of eigenvectors.
    """
    P = check_projector(P, tol)
    w, vecs = np.linalg.eigh((P + P.conj().T) / 2)
    keep = w > 0.5
    r = int(np.count_nonzero(keep))
    if r == 0:
        return SubspaceBasis(np.zeros((P.shape[0], 0), dtype=complex))
    V = _canonical_columns(vecs[:, keep])
    basis = SubspaceBasis(V)
    if rel_residual(np.eye(r), V.conj().T @ V) > tol or rel_residual(P, basis.projector) > tol:
        raise NumericalDegradation("range frame does not reproduce the projector")
    return basis
