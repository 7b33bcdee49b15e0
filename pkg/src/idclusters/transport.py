"""Unitary maps between the identical-particle subspace and the distinct-cluster space.

The decoupling map sends H^Id to H^D as ``c * Q`` and the coupling map sends
H^D back as ``c * S``, with ``c = sqrt(N! / prod N_j!)``.  Everything is
checked in subspace coordinates: with orthonormal frames ``V_Id`` and ``V_D``
the decoupling map becomes the r x r matrix ``U = V_D^+ (c Q) V_Id``.  A
restriction of an operator to a subspace is its compression ``V^+ A V``.

Observables are moved in both directions with the explicit full-space
formulas and the result is compared against conjugation by ``U``.  States and
unitary evolutions are carried over the same way.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .cluster_model import ClusterModel
from .errors import (
    CompatibilityViolated,
    DegenerateSubspace,
    IsomorphismImpossible,
    PossessionViolated,
    VerificationError,
)
from .symmetrizers import commutes_with_perms
from .tensor_space import (
    DEFAULT_TOL,
    SubspaceBasis,
    check_density,
    check_hermitian,
    commutator,
    fro,
    rel_residual,
)


@dataclass(frozen=True, eq=False)
class IsoPair:
    """Coordinate matrices of the decoupling (``U``) and coupling (``U_inverse``) maps."""

    basis_Id: SubspaceBasis
    basis_D: SubspaceBasis
    U: np.ndarray
    U_inverse: np.ndarray
    degenerate: bool = False

    @property
    def rank(self) -> int:
        return self.U.shape[0]

    def to_d(self, a_Id) -> np.ndarray:
        """Carry a coordinate operator on H^Id over to H^D coordinates."""
        return self.U @ a_Id @ self.U.conj().T

    def to_id(self, a_D) -> np.ndarray:
        return self.U.conj().T @ a_D @ self.U


def build_isomorphisms(model: ClusterModel, allow_degenerate: bool = False,
                       tol: float | None = None) -> IsoPair:
    """Build and validate the decoupling/coupling pair for ``model``.

    Raises
    ------
    IsomorphismImpossible
        If the two subspaces differ in dimension.
    DegenerateSubspace
        If both subspaces are zero-dimensional and ``allow_degenerate`` is
        false; otherwise a pair flagged ``degenerate`` is returned.
    VerificationError
        If ``U`` is not unitary or the coupling map is not its adjoint.
    """
    tol = model.tol if tol is None else tol
    dims = model.dims
    if dims.dim_HD != dims.dim_HId:
        raise IsomorphismImpossible(
            f"dim H^D = {dims.dim_HD} but dim H^Id = {dims.dim_HId} for {model.label()}"
        )
    V_Id, V_D = model.basis_Id, model.basis_D
    if dims.dim_HD == 0:
        if not allow_degenerate:
            raise DegenerateSubspace(f"both subspaces are zero-dimensional for {model.label()}")
        empty = np.zeros((0, 0), dtype=complex)
        return IsoPair(V_Id, V_D, empty, empty, degenerate=True)
    c = model.scale
    U = c * (V_D.columns.conj().T @ model.Q @ V_Id.columns)
    U_inv = c * (V_Id.columns.conj().T @ model.S @ V_D.columns)
    r = U.shape[0]
    if rel_residual(np.eye(r), U.conj().T @ U) > tol:
        raise VerificationError("decoupling map is not unitary in coordinates")
    if rel_residual(U.conj().T, U_inv) > tol:
        raise VerificationError("coupling map is not the adjoint of the decoupling map")
    return IsoPair(V_Id, V_D, U, U_inv)


def _iso(model: ClusterModel) -> IsoPair:
    return model.iso


@dataclass
class IsomorphismReport:
    label: str
    dim_Id: int
    dim_D: int
    degenerate: bool
    residuals: dict[str, float] = field(default_factory=dict)
    tol: float = DEFAULT_TOL

    @property
    def passed(self) -> bool:
        return self.dim_Id == self.dim_D and all(v <= self.tol for v in self.residuals.values())


def _random_unit_columns(rng, V: np.ndarray, count: int) -> np.ndarray:
    r = V.shape[1]
    z = rng.standard_normal((r, count)) + 1j * rng.standard_normal((r, count))
    z /= np.linalg.norm(z, axis=0)
    return V @ z


def verify_isomorphisms(model: ClusterModel, rng=None, n_pairs: int = 20,
                        tol: float = 1e-10) -> IsomorphismReport:
    """Numerically confirm that the two maps are mutually inverse unitaries.

    Residual entries: unitarity of ``U``, adjointness of the coupling map,
    range containment in both directions, both compositions against the
    identity, and preservation of inner products on ``n_pairs`` random vector
    pairs in each subspace.  Failures are reported, never raised.
    Zero-dimensional subspaces give a vacuous pass flagged ``degenerate``.
    """
    rng = np.random.default_rng(0) if rng is None else rng
    dims = model.dims
    report = IsomorphismReport(model.label(), dims.dim_HId, dims.dim_HD, False, tol=tol)
    if dims.dim_HD != dims.dim_HId:
        return report
    if dims.dim_HD == 0:
        report.degenerate = True
        return report
    iso = _iso(model)
    c = model.scale
    V_Id, V_D = model.basis_Id.columns, model.basis_D.columns
    cQ, cS = c * model.Q, c * model.S
    eye_full = np.eye(model.space.dim)
    r = iso.rank
    to_D = cQ @ V_Id
    to_Id = cS @ V_D
    res = report.residuals
    res["unitarity"] = rel_residual(np.eye(r), iso.U.conj().T @ iso.U)
    res["coupling_is_adjoint"] = rel_residual(iso.U.conj().T, iso.U_inverse)
    res["range_Id_to_D"] = fro((eye_full - model.P_D) @ to_D) / max(1.0, fro(to_D))
    res["range_D_to_Id"] = fro((eye_full - model.P_Id) @ to_Id) / max(1.0, fro(to_Id))
    res["compose_on_D"] = rel_residual(V_D, cQ @ (cS @ V_D))
    res["compose_on_Id"] = rel_residual(V_Id, cS @ (cQ @ V_Id))
    worst = 0.0
    for V, M in ((V_Id, cQ), (V_D, cS)):
        x = _random_unit_columns(rng, V, n_pairs)
        y = _random_unit_columns(rng, V, n_pairs)
        before = np.einsum("ik,ik->k", x.conj(), y)
        after = np.einsum("ik,ik->k", (M @ x).conj(), M @ y)
        worst = max(worst, float(np.max(np.abs(before - after))))
    res["scalar_products"] = worst
    return report


def _require_commutes(A, B, tol, what: str) -> None:
    res = fro(commutator(A, B)) / max(1.0, fro(A))
    if res > tol:
        raise CompatibilityViolated(f"{what} (residual {res:.3e})")


def check_admissible_distinct(A_D, model: ClusterModel, tol: float | None = None,
                              hermitian: bool = True) -> np.ndarray:
    """Validate an operator for the distinct-cluster side.

    It must commute with every cluster-preserving permutation and with Q.
    """
    tol = model.tol if tol is None else tol
    A_D = check_hermitian(A_D, tol, "distinct-cluster observable") if hermitian else np.asarray(A_D, dtype=complex)
    ok, res = commutes_with_perms(A_D, model.subgroup, model.d, tol)
    if not ok:
        raise CompatibilityViolated(f"operator does not commute with cluster permutations ({res:.3e})")
    _require_commutes(A_D, model.Q, tol, "operator does not commute with Q")
    return A_D


def check_admissible_identical(B_Id, model: ClusterModel, tol: float | None = None,
                               hermitian: bool = True) -> np.ndarray:
    """Validate an operator for the identical-particle side.

    It must commute with every permutation and with Q_sym.
    """
    tol = model.tol if tol is None else tol
    B_Id = check_hermitian(B_Id, tol, "identical-particle observable") if hermitian else np.asarray(B_Id, dtype=complex)
    ok, res = commutes_with_perms(B_Id, model.sn, model.d, tol)
    if not ok:
        raise CompatibilityViolated(f"operator is not symmetric under permutations ({res:.3e})")
    _require_commutes(B_Id, model.Q_sym, tol, "operator does not commute with Q_sym")
    return B_Id


def d_to_id_residuals(A_D, model: ClusterModel) -> tuple[np.ndarray, dict[str, float]]:
    """Symmetrize a distinct-cluster observable and measure the transport identities.

    Returns ``A_sym = (prod N_j!)^-1 sum_p P_p A_D Q P_p^-1`` together with
    residuals for ``[A_sym, Q_sym] = 0`` and for the coordinate identity
    ``V_Id^+ A_sym V_Id == U^+ (V_D^+ A_D V_D) U``.
    """
    A_D = check_admissible_distinct(A_D, model)
    A_sym = model.symmetrize_sn(A_D @ model.Q) * (len(model.sn) / model.subgroup_order)
    res = {"commutes_Q_sym": fro(commutator(A_sym, model.Q_sym)) / max(1.0, fro(A_sym))}
    if model.degenerate:
        res["reducee_equivalence"] = 0.0
        return A_sym, res
    iso = _iso(model)
    lhs = model.basis_Id.coords(A_sym)
    rhs = iso.to_id(model.basis_D.coords(A_D))
    res["reducee_equivalence"] = rel_residual(lhs, rhs)
    return A_sym, res


def transport_observable_d_to_id(A_D, model: ClusterModel, tol: float | None = None) -> np.ndarray:
    """Identical-particle counterpart of a distinct-cluster observable.

    Raises ``CompatibilityViolated`` for inadmissible input and
    ``VerificationError`` if the transported reducee does not match.
    """
    tol = model.tol if tol is None else tol
    A_sym, res = d_to_id_residuals(A_D, model)
    bad = {k: v for k, v in res.items() if v > tol}
    if bad:
        raise VerificationError(f"distinct-to-identical transport failed: {bad}")
    return A_sym


def id_to_d_residuals(B_Id, model: ClusterModel, hermitian: bool = True
                      ) -> tuple[np.ndarray, dict[str, float]]:
    """Decouple an identical-particle observable: ``B_D = c^2 Q B_Id S Q``.

    Residuals cover commutation of ``B_D`` with the cluster permutations and
    with ``Q``, and ``V_D^+ B_D V_D == U (V_Id^+ B_Id V_Id) U^+``.
    """
    B_Id = check_admissible_identical(B_Id, model, hermitian=hermitian)
    Q = model.Q
    B_D = model.coset_count * (Q @ B_Id @ model.S @ Q)
    _, perm_res = commutes_with_perms(B_D, model.subgroup, model.d)
    res = {
        "commutes_cluster_perms": perm_res,
        "commutes_Q": fro(commutator(B_D, Q)) / max(1.0, fro(B_D)),
    }
    if model.degenerate:
        res["reducee_equivalence"] = 0.0
        return B_D, res
    iso = _iso(model)
    lhs = model.basis_D.coords(B_D)
    rhs = iso.to_d(model.basis_Id.coords(B_Id))
    res["reducee_equivalence"] = rel_residual(lhs, rhs)
    return B_D, res


def transport_observable_id_to_d(B_Id, model: ClusterModel, tol: float | None = None) -> np.ndarray:
    """Distinct-cluster counterpart of an identical-particle observable."""
    tol = model.tol if tol is None else tol
    B_D, res = id_to_d_residuals(B_Id, model)
    bad = {k: v for k, v in res.items() if v > tol}
    if bad:
        raise VerificationError(f"identical-to-distinct transport failed: {bad}")
    return B_D


def symmetrize_distinct_obs(B_D, model: ClusterModel, tol: float | None = None) -> np.ndarray:
    """(prod N_j!)^-1 sum over S_N of P_p B_D P_p^-1 for a cluster-symmetric B_D."""
    tol = model.tol if tol is None else tol
    B_D = np.asarray(B_D, dtype=complex)
    ok, res = commutes_with_perms(B_D, model.subgroup, model.d, tol)
    if not ok:
        raise CompatibilityViolated(f"operator does not commute with cluster permutations ({res:.3e})")
    out = model.symmetrize_sn(B_D) * (len(model.sn) / model.subgroup_order)
    ok, res = commutes_with_perms(out, model.sn, model.d, tol)
    if not ok:
        raise VerificationError(f"symmetrized operator is not symmetric ({res:.3e})")
    return out


def roundtrip_residual(B_Id, model: ClusterModel, B_D=None) -> float:
    """Decouple ``B_Id``, symmetrize the result, and compare reducees on H^Id.

    ``B_D`` may be passed when the decoupled observable is already known.
    """
    if B_D is None:
        B_D, _ = id_to_d_residuals(B_Id, model)
    B_sym = symmetrize_distinct_obs(B_D, model)
    if model.degenerate:
        return 0.0
    V = model.basis_Id
    return rel_residual(V.coords(B_Id), V.coords(B_sym))


def check_possesses(rho, P, tol: float, what: str) -> None:
    res = fro(P @ rho - rho) / max(1.0, fro(rho))
    if res > tol:
        raise PossessionViolated(f"state does not possess {what} (residual {res:.3e})")


def check_identical_state(rho, model: ClusterModel, tol: float | None = None) -> np.ndarray:
    """Validate a density operator on H^Id: it must possess Q_sym and be (anti)symmetric."""
    tol = model.tol if tol is None else tol
    rho = check_density(rho, tol)
    check_possesses(rho, model.Q_sym, tol, "the distinguishing property Q_sym")
    check_possesses(rho, model.S, tol, "full (anti)symmetry")
    return rho


def transport_state(rho_Id, model: ClusterModel) -> np.ndarray:
    """Decoupled state I rho I^-1 as a full-space density operator on H^D."""
    rho_Id = check_identical_state(rho_Id, model)
    iso = _iso(model)
    return model.basis_D.embed(iso.to_d(model.basis_Id.coords(rho_Id)))


def transport_state_to_id(rho_D, model: ClusterModel) -> np.ndarray:
    rho_D = check_density(rho_D, model.tol)
    check_possesses(rho_D, model.P_D, model.tol, "the distinct-cluster projector")
    iso = _iso(model)
    return model.basis_Id.embed(iso.to_id(model.basis_D.coords(rho_D)))


@dataclass(frozen=True)
class ExpectationRecord:
    val_Id: float
    val_D: float
    residual: float


def expectation_check(rho_Id, B_Id, model: ClusterModel, B_D=None) -> ExpectationRecord:
    """Compare tr(rho_Id B_Id) with tr(rho_D B_D) for the decoupled pair."""
    rho_D = transport_state(rho_Id, model)
    if B_D is None:
        B_D, _ = id_to_d_residuals(B_Id, model)
    val_Id = complex(np.trace(rho_Id @ B_Id))
    val_D = complex(np.trace(rho_D @ B_D))
    return ExpectationRecord(val_Id.real, val_D.real, abs(val_Id - val_D))


def exp_i_hermitian(H, t: float) -> np.ndarray:
    """exp(i t H) for Hermitian ``H`` via its eigendecomposition."""
    H = check_hermitian(H)
    w, V = np.linalg.eigh((H + H.conj().T) / 2)
    return (V * np.exp(1j * t * w)) @ V.conj().T


@dataclass(frozen=True, eq=False)
class EvolutionRecord:
    rho_f_Id: np.ndarray
    rho_f_D: np.ndarray
    U_D: np.ndarray
    residual: float


def transfer_evolution(U_Id, rho_i, model: ClusterModel, tol: float | None = None) -> EvolutionRecord:
    """Evolve a possessing state by ``U_Id`` and replay the step on H^D.

    The distinct-cluster evolution ``U_D`` is built independently from the
    decoupling formula ``c^2 Q U_Id S Q`` compressed to H^D.  The residual
    compares the transported final state with ``U_D`` applied to the
    transported initial state.

    Raises
    ------
    CompatibilityViolated
        If ``U_Id`` is not unitary, not symmetric, or fails to commute with Q_sym.
    PossessionViolated
        If the initial (or, numerically, the final) state leaves H^Id.
    """
    tol = model.tol if tol is None else tol
    U_Id = np.asarray(U_Id, dtype=complex)
    if rel_residual(np.eye(U_Id.shape[0]), U_Id.conj().T @ U_Id) > tol:
        raise CompatibilityViolated("evolution operator is not unitary")
    check_admissible_identical(U_Id, model, tol, hermitian=False)
    rho_i = check_identical_state(rho_i, model, tol)
    rho_f = U_Id @ rho_i @ U_Id.conj().T
    check_identical_state(rho_f, model, tol)
    U_D_full, _ = id_to_d_residuals(U_Id, model, hermitian=False)
    U_D = model.basis_D.coords(U_D_full)
    if rel_residual(np.eye(U_D.shape[0]), U_D.conj().T @ U_D) > tol:
        raise VerificationError("decoupled evolution is not unitary on H^D")
    rho_i_D = model.basis_D.coords(transport_state(rho_i, model))
    rho_f_D = transport_state(rho_f, model)
    residual = rel_residual(model.basis_D.coords(rho_f_D), U_D @ rho_i_D @ U_D.conj().T)
    return EvolutionRecord(rho_f, rho_f_D, model.basis_D.embed(U_D), residual)
