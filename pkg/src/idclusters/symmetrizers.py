"""Permutation operators on H_1 x ... x H_N and the symmetry projectors built from them.

``P_p`` acts on product vectors by moving the factor of particle n to slot
p(n):  P_p |k_1 ... k_N> = |k_{p^-1(1)} ... k_{p^-1(N)}>.  All single-particle
spaces share one basis, so the pairwise isomorphisms between them are the
identity matrix and never appear explicitly.

Each ``P_p`` is a 0/1 matrix, so products with it are row/column gathers.  The
helpers here use the gather form (``perm_source``) and keep the dense matrix
(``perm_operator``) as the reference it is tested against.
"""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np

from .errors import DimensionMismatch, NotASubgroup, NotNormalized
from .permutations import Perm, compose, enumerate_sn, inverse, is_subgroup, sign_of
from .tensor_space import DEFAULT_TOL, SpaceSpec, check_dim, fro, kron_all


@lru_cache(maxsize=4096)
def _source(image: tuple[int, ...], d: int) -> np.ndarray:
    N = len(image)
    inv = [0] * N
    for n, k in enumerate(image):
        inv[k] = n
    src = np.arange(d**N).reshape((d,) * N).transpose(inv).ravel()
    src.setflags(write=False)
    return src


def perm_source(p: Perm, d: int) -> np.ndarray:
    """Index map of ``P_p``: ``(P_p v)[j] == v[src[j]]``."""
    return _source(p.image, d)


def perm_operator(p: Perm, space: SpaceSpec) -> np.ndarray:
    """Dense unitary 0/1 matrix representing ``p`` on the N-particle space."""
    if p.N != space.N:
        raise DimensionMismatch(f"permutation of {p.N} labels on a {space.N}-particle space")
    check_dim(space.dim, space.max_dim)
    src = perm_source(p, space.d)
    P = np.zeros((space.dim, space.dim), dtype=complex)
    P[np.arange(space.dim), src] = 1.0
    return P


def apply_perm(p: Perm, d: int, psi) -> np.ndarray:
    return np.asarray(psi)[perm_source(p, d)]


def conjugate_by(p: Perm, d: int, A) -> np.ndarray:
    """P_p A P_p^-1."""
    src = perm_source(p, d)
    return np.asarray(A)[np.ix_(src, src)]


def group_sum(A, perms, d: int, weights=None) -> np.ndarray:
    """Sum over ``perms`` of ``w_p P_p A P_p^-1``."""
    A = np.asarray(A, dtype=complex)
    out = np.zeros_like(A)
    for i, p in enumerate(perms):
        term = conjugate_by(p, d, A)
        out += term if weights is None else weights[i] * term
    return out


def commutes_with_perms(A, perms, d: int, tol: float = DEFAULT_TOL) -> tuple[bool, float]:
    """Check [A, P_p] = 0 for every p; returns (ok, worst relative residual)."""
    A = np.asarray(A)
    scale = max(1.0, fro(A))
    worst = 0.0
    for p in perms:
        worst = max(worst, fro(conjugate_by(p, d, A) - A) / scale)
    return worst <= tol, worst


def conjugate_tensor_op(p: Perm, factors, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Conjugate a product of single-particle operators by ``P_p``.

    Returns ``P_p (O^1 x ... x O^N) P_p^-1`` and checks that it equals the
    product with factors relabelled, ``O^{p^-1(1)} x ... x O^{p^-1(N)}``.
    """
    factors = [np.asarray(f, dtype=complex) for f in factors]
    if len(factors) != p.N:
        raise DimensionMismatch(f"{len(factors)} factors for a permutation of {p.N} labels")
    d = factors[0].shape[0]
    if any(f.shape != (d, d) for f in factors):
        raise DimensionMismatch("all factors must be d x d with a common d")
    product = kron_all(factors)
    conj = conjugate_by(p, d, product)
    inv = inverse(p)
    relabelled = kron_all([factors[inv.image[n]] for n in range(p.N)])
    if fro(conj - relabelled) > tol * max(1.0, fro(product)):
        raise AssertionError("conjugated tensor product does not match relabelled factors")
    return conj


def _signed_projector(perms, space: SpaceSpec) -> np.ndarray:
    check_dim(space.dim, space.max_dim)
    S = np.zeros((space.dim, space.dim), dtype=complex)
    rows = np.arange(space.dim)
    for p in perms:
        S[rows, perm_source(p, space.d)] += sign_of(p, space.statistics)
    return S / len(perms)


def symmetrizer(space: SpaceSpec) -> np.ndarray:
    """Symmetrizer (bosons) or antisymmetrizer (fermions): (N!)^-1 sum sign(p) P_p."""
    return _signed_projector(enumerate_sn(space.N), space)


def subgroup_symmetrizer(subgroup, space: SpaceSpec) -> np.ndarray:
    """Signed average of ``P_p`` over a subgroup of S_N."""
    subgroup = list(subgroup)
    if any(p.N != space.N for p in subgroup):
        raise DimensionMismatch("subgroup elements must permute N labels")
    if not is_subgroup(subgroup):
        raise NotASubgroup("permutations are not closed under composition and inverse")
    return _signed_projector(subgroup, space)


def check_state_symmetry(psi, space: SpaceSpec, tol: float = DEFAULT_TOL) -> tuple[bool, float]:
    """Test whether a unit vector is (anti)symmetric under all permutations.

    Two criteria are evaluated separately: ``P_p psi == sign(p) psi`` for every
    p, and ``S psi == psi`` for the (anti)symmetrizer ``S``.  They are
    equivalent, so disagreement raises ``AssertionError``.  Returns the
    verdict and the worst residual over both criteria.
    """
    psi = np.asarray(psi, dtype=complex).ravel()
    if psi.shape[0] != space.dim:
        raise DimensionMismatch(f"vector of length {psi.shape[0]} on a {space.dim}-dim space")
    if abs(np.linalg.norm(psi) - 1.0) > tol:
        raise NotNormalized(f"state has norm {np.linalg.norm(psi):.12g}")
    worst_perm = 0.0
    for p in enumerate_sn(space.N):
        diff = apply_perm(p, space.d, psi) - sign_of(p, space.statistics) * psi
        worst_perm = max(worst_perm, float(np.linalg.norm(diff)))
    proj_res = float(np.linalg.norm(symmetrizer(space) @ psi - psi))
    by_perm = worst_perm <= tol
    by_proj = proj_res <= tol
    # the permutation criterion can be up to 2x the projector one for the same defect
    if by_perm != by_proj and min(worst_perm, proj_res) > tol / 4:
        raise AssertionError(
            f"symmetry criteria disagree: permutations {worst_perm:.3e}, projector {proj_res:.3e}"
        )
    return by_perm and by_proj, max(worst_perm, proj_res)


def symmetric_rank(space: SpaceSpec) -> int:
    """Closed-form dimension of the (anti)symmetric subspace."""
    if space.is_fermion:
        return math.comb(space.d, space.N)
    return math.comb(space.d + space.N - 1, space.N)


def representation_residuals(space: SpaceSpec, perms=None) -> dict[str, float]:
    """Worst residuals of the representation laws over all pairs of ``perms``.

    Uses dense matrices on purpose; this is the check the gather shortcut is
    measured against.
    """
    perms = enumerate_sn(space.N) if perms is None else list(perms)
    mats = {p: perm_operator(p, space) for p in perms}
    eye = np.eye(space.dim)
    hom = inv = unit = 0.0
    for p in perms:
        P = mats[p]
        unit = max(unit, fro(P.conj().T @ P - eye))
        inv = max(inv, fro(perm_operator(inverse(p), space) - P.conj().T))
        for q in perms:
            hom = max(hom, fro(perm_operator(compose(p, q), space) - P @ mats[q]))
    return {"homomorphism": hom, "inverse_is_adjoint": inv, "unitarity": unit}
