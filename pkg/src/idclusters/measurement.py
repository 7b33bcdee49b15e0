"""Possession and compatibility of properties, and ideal (Lüders) measurement.

A state possesses a property F when ``F rho = rho``; it is merely compatible
with it when ``[rho, F] = 0``.  For observables the analogous relations are
``F A = A`` and ``[F, A] = 0``.

Lüders updates are provided on the full space, reduced to the
identical-particle subspace H^Id (in its coordinates), and carried over to the
distinct-cluster space H^D through the coupling isomorphism.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .cluster_model import ClusterModel
from .errors import (
    NotAProjector,
    NumericalDegradation,
    UndetectableOutcome,
    VerificationError,
    ZeroReducee,
)
from .transport import (
    check_admissible_identical,
    check_identical_state,
    check_possesses,
    transport_state,
)
from .tensor_space import (
    DEFAULT_TOL,
    as_square,
    check_density,
    check_hermitian,
    check_projector,
    commutator,
    fro,
    rel_residual,
)

DEFAULT_CLUSTER_EPS = 1e-8


@dataclass(frozen=True, eq=False)
class SpectralDecomposition:
    """Distinct eigenvalues (ascending) and their eigenprojectors."""

    eigenvalues: tuple[float, ...]
    projectors: tuple[np.ndarray, ...]

    def __len__(self):
        return len(self.eigenvalues)

    @property
    def ranks(self) -> tuple[int, ...]:
        return tuple(int(round(np.trace(E).real)) for E in self.projectors)

    def reconstruct(self) -> np.ndarray:
        return sum(a * E for a, E in zip(self.eigenvalues, self.projectors))


def spectral_decompose(A, cluster_eps: float = DEFAULT_CLUSTER_EPS,
                       tol: float = DEFAULT_TOL) -> SpectralDecomposition:
    """Spectral form of a Hermitian operator.

    Sorted eigenvalues closer than ``cluster_eps`` to their neighbour are
    chained into one cluster; the cluster's eigenvalue is the mean and its
    projector spans all the cluster's eigenvectors.
    """
    A = check_hermitian(A, tol)
    w, V = np.linalg.eigh((A + A.conj().T) / 2)
    starts = [0] + [i + 1 for i in range(len(w) - 1) if w[i + 1] - w[i] > cluster_eps]
    bounds = list(zip(starts, starts[1:] + [len(w)]))
    values = tuple(float(np.mean(w[a:b])) for a, b in bounds)
    projs = tuple(V[:, a:b] @ V[:, a:b].conj().T for a, b in bounds)
    dec = SpectralDecomposition(values, projs)
    eye = np.eye(A.shape[0])
    if rel_residual(eye, sum(projs)) > tol or rel_residual(A, dec.reconstruct()) > tol:
        raise NumericalDegradation("spectral decomposition does not reproduce the operator")
    return dec


def possesses_property(rho, F, tol: float = DEFAULT_TOL) -> bool:
    """True iff ``F rho = rho``.

    The equivalent trace criterion ``tr(F rho) = 1`` is evaluated as well;
    if the two verdicts disagree by more than rounding, ``NumericalDegradation``
    is raised.
    """
    F = check_projector(F, tol, "property")
    rho = check_density(rho, tol)
    residual = fro(F @ rho - rho) / max(1.0, fro(rho))
    defect = 1.0 - float(np.trace(F @ rho).real)
    by_product = residual <= tol
    by_trace = defect <= tol
    # ||(1-F) rho|| <= sqrt(1 - tr(F rho)) for states, so a tiny defect may
    # still leave a product residual up to sqrt(tol)
    if (by_product and not by_trace) or (by_trace and residual > 1.01 * np.sqrt(tol)):
        raise NumericalDegradation(
            f"possession criteria disagree: ||F rho - rho|| = {residual:.3e}, 1 - tr(F rho) = {defect:.3e}"
        )
    return by_product


def compatible_state(rho, F, tol: float = DEFAULT_TOL) -> bool:
    """True iff ``[rho, F] = 0``."""
    F = check_projector(F, tol, "property")
    rho = as_square(rho, "state")
    return fro(commutator(rho, F)) / max(1.0, fro(rho)) <= tol


def possession_defect(rho, F, tol: float = DEFAULT_TOL) -> float:
    """Probability shortfall ``1 - tr(F rho)``, clipped into [0, 1]."""
    F = check_projector(F, tol, "property")
    value = 1.0 - float(np.trace(F @ np.asarray(rho)).real)
    return min(1.0, max(0.0, value))


@dataclass
class EigenCheck:
    eigenvalue: float
    residual: float
    ok: bool
    null: bool = False


@dataclass
class ObservablePossession:
    """Outcome of :func:`observable_possesses`."""

    possesses: bool
    residual: float
    eigen: list[EigenCheck] = field(default_factory=list)

    @property
    def offending(self) -> list[int]:
        return [i for i, e in enumerate(self.eigen) if not e.ok]


def observable_possesses(A, F, tol: float = DEFAULT_TOL,
                         cluster_eps: float = DEFAULT_CLUSTER_EPS) -> ObservablePossession:
    """Check ``F A = A`` and report on every eigenprojector of ``A``.

    Nonzero eigenvalues need ``F E_i = E_i``; the null projector, if present,
    needs ``E_0 = F E_0 + (1 - F)``.  When the observable possesses F all
    per-eigenprojector checks must pass, otherwise ``VerificationError``.
    """
    A = check_hermitian(A, tol)
    F = check_projector(F, tol, "property")
    residual = fro(F @ A - A) / max(1.0, fro(A))
    possesses = residual <= tol
    dec = spectral_decompose(A, cluster_eps, tol)
    Fperp = np.eye(F.shape[0]) - F
    checks = []
    for a, E in zip(dec.eigenvalues, dec.projectors):
        if abs(a) > cluster_eps:
            res = fro(F @ E - E) / max(1.0, fro(E))
            checks.append(EigenCheck(a, res, res <= tol))
        else:
            res = fro(E - (F @ E + Fperp)) / max(1.0, fro(E))
            checks.append(EigenCheck(a, res, res <= tol, null=True))
    report = ObservablePossession(possesses, residual, checks)
    if possesses and report.offending:
        raise VerificationError(f"observable possesses F but eigenprojectors {report.offending} do not")
    return report


def luders_nonselective(rho, A, cluster_eps: float = DEFAULT_CLUSTER_EPS) -> np.ndarray:
    """sum_i E_i rho E_i over the eigenprojectors of ``A``."""
    rho = as_square(rho, "state")
    dec = spectral_decompose(A, cluster_eps)
    return sum(E @ rho @ E for E in dec.projectors)


def luders_selective(rho, A, outcome: int, tol: float = DEFAULT_TOL,
                     cluster_eps: float = DEFAULT_CLUSTER_EPS) -> tuple[np.ndarray, float]:
    """Post-measurement state for the eigenvalue with index ``outcome``.

    Returns ``(E rho E / tr(E rho), tr(E rho))``; raises ``UndetectableOutcome``
    when the probability does not exceed ``tol``.
    """
    rho = as_square(rho, "state")
    dec = spectral_decompose(A, cluster_eps)
    E = dec.projectors[outcome]
    prob = float(np.trace(E @ rho).real)
    if prob <= tol:
        raise UndetectableOutcome(f"outcome {outcome} has probability {prob:.3e}")
    return E @ rho @ E / prob, prob


def _reduced_projectors(A_Id, model: ClusterModel, cluster_eps: float):
    dec = spectral_decompose(A_Id, cluster_eps, model.tol)
    V = model.basis_Id
    return dec, [V.coords(E) for E in dec.projectors]


def _check_measurement_input(rho_Id, A_Id, model: ClusterModel):
    A_Id = check_admissible_identical(A_Id, model)
    if model.degenerate or fro(model.basis_Id.coords(A_Id)) <= model.tol * max(1.0, fro(A_Id)):
        raise ZeroReducee("observable has no nonzero reducee on the identical-particle subspace")
    rho_Id = check_identical_state(rho_Id, model)
    return rho_Id, A_Id


def luders_reduced(rho_Id, A_Id, model: ClusterModel, outcome: int | None = None,
                   cluster_eps: float = DEFAULT_CLUSTER_EPS) -> np.ndarray:
    """Lüders update computed inside H^Id using the reducees of the eigenprojectors.

    ``outcome=None`` selects the nonselective update, where reducees that
    vanish are dropped from the sum; an integer selects that eigenvalue.  The
    result is returned as a full-space operator supported on H^Id.
    """
    rho_Id, A_Id = _check_measurement_input(rho_Id, A_Id, model)
    V = model.basis_Id
    r = V.coords(rho_Id)
    _, reduced = _reduced_projectors(A_Id, model, cluster_eps)
    if outcome is None:
        kept = [e for e in reduced if fro(e) > model.tol]
        out = sum(e @ r @ e for e in kept)
    else:
        e = reduced[outcome]
        prob = float(np.trace(e @ r).real)
        if prob <= model.tol:
            raise UndetectableOutcome(f"outcome {outcome} has probability {prob:.3e}")
        out = e @ r @ e / prob
    state = V.embed(out)
    check_possesses(state, model.Q_sym, model.tol, "the distinguishing property after measurement")
    return state


def transport_measurement(E, model: ClusterModel) -> np.ndarray:
    """Distinct-cluster counterpart of an eigenprojector, as a full-space operator on H^D."""
    E = check_admissible_identical(E, model)
    if rel_residual(E, E @ E) > model.tol:
        raise NotAProjector("measurement operator is not an eigenprojector")
    iso = model.iso
    return model.basis_D.embed(iso.to_d(model.basis_Id.coords(E)))


@dataclass(frozen=True, eq=False)
class DiagramRecord:
    """Both routes around the measure/transport square and their disagreement."""

    state_via_Id: np.ndarray
    state_via_D: np.ndarray
    probability_Id: float
    probability_D: float
    residual: float


def measurement_diagram(rho_Id, A_Id, model: ClusterModel, outcome: int | None = None,
                        cluster_eps: float = DEFAULT_CLUSTER_EPS) -> DiagramRecord:
    """Compare "measure in H^Id, then decouple" with "decouple, then measure in H^D"."""
    rho_Id, A_Id = _check_measurement_input(rho_Id, A_Id, model)
    after_Id = luders_reduced(rho_Id, A_Id, model, outcome, cluster_eps)
    route_1 = transport_state(after_Id, model)

    rho_D = transport_state(rho_Id, model)
    dec = spectral_decompose(A_Id, cluster_eps, model.tol)
    E_D = [transport_measurement(E, model) for E in dec.projectors]
    if outcome is None:
        kept = [e for e in E_D if fro(e) > model.tol]
        route_2 = sum(e @ rho_D @ e for e in kept)
        p_Id = p_D = 1.0
    else:
        e = E_D[outcome]
        p_D = float(np.trace(e @ rho_D).real)
        if p_D <= model.tol:
            raise UndetectableOutcome(f"outcome {outcome} has probability {p_D:.3e}")
        route_2 = e @ rho_D @ e / p_D
        p_Id = float(np.trace(dec.projectors[outcome] @ rho_Id).real)
    residual = max(rel_residual(route_1, route_2), abs(p_Id - p_D))
    return DiagramRecord(route_1, route_2, p_Id, p_D, residual)


def reduced_vs_full_residual(rho_Id, A_Id, model: ClusterModel, outcome: int | None = None,
                             cluster_eps: float = DEFAULT_CLUSTER_EPS) -> float:
    """Distance between the reduced update and the full-space update, in H^Id coordinates."""
    reduced = luders_reduced(rho_Id, A_Id, model, outcome, cluster_eps)
    if outcome is None:
        full = luders_nonselective(rho_Id, A_Id, cluster_eps)
    else:
        full, _ = luders_selective(rho_Id, A_Id, outcome, model.tol, cluster_eps)
    V = model.basis_Id
    return rel_residual(V.coords(reduced), V.coords(full))
