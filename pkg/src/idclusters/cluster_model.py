"""Distinguishing projectors and the two subspaces they single out.

Given clusters of sizes N_1..N_J marked by orthogonal single-particle
projectors Q^1..Q^J this module builds

* ``Q``      the product projector, particle n carrying the projector of its cluster;
* ``Q_sym``  its symmetrized form, the sum of the distinct conjugates P_p Q P_p^-1;
* ``P_D``    Q times the product of per-cluster (anti)symmetrizers: the
             distinct-cluster space;
* ``P_Id``   Q_sym times the full (anti)symmetrizer: the identical-particle
             subspace that possesses the distinguishing property.

:class:`ClusterModel` caches all of them, plus orthonormal frames, for one
(clusters, space) pair.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import NumericalDegradation, SizesMismatch, VerificationError
from .permutations import ClusterSpec, cluster_subgroup, coset_representatives, enumerate_sn
from .symmetrizers import conjugate_by, group_sum, subgroup_symmetrizer, symmetrizer
from .tensor_space import (
    DEFAULT_TOL,
    SpaceSpec,
    check_dim,
    commutator,
    fro,
    is_projector,
    kron_all,
    orthonormal_range,
    rel_residual,
)


def validate_clusters(clusters: ClusterSpec, space: SpaceSpec, tol: float = DEFAULT_TOL,
                      allow_single: bool = False) -> None:
    """Raise unless ``clusters`` is a valid split of ``space``'s particles.

    Completeness of the projectors (summing to the identity) is not required.
    """
    if clusters.N != space.N:
        raise SizesMismatch(f"cluster sizes {clusters.sizes} sum to {clusters.N}, not N={space.N}")
    clusters.validate(N=space.N, d=space.d, tol=tol, allow_single=allow_single)


def build_Q(clusters: ClusterSpec, space: SpaceSpec) -> np.ndarray:
    check_dim(space.dim, space.max_dim)
    return kron_all([clusters.projectors[j] for j in clusters.cluster_of])


def q_sym_terms(clusters: ClusterSpec, space: SpaceSpec) -> list[np.ndarray]:
    """The distinct conjugates of Q, one per left coset of the cluster subgroup."""
    Q = build_Q(clusters, space)
    return [conjugate_by(g, space.d, Q) for g in coset_representatives(clusters)]


def build_Q_sym_averaged(clusters: ClusterSpec, space: SpaceSpec) -> np.ndarray:
    """Q_sym as the full average over S_N divided by the cluster subgroup order."""
    Q = build_Q(clusters, space)
    return group_sum(Q, enumerate_sn(space.N), space.d) / clusters.subgroup_order


def build_Q_sym(clusters: ClusterSpec, space: SpaceSpec, tol: float = DEFAULT_TOL,
                cross_check: bool = True) -> np.ndarray:
    """Symmetrized distinguishing projector as a sum over coset representatives.

    With ``cross_check`` the result is compared against the full S_N average
    and tested for idempotency; a mismatch raises ``VerificationError``.
    """
    Q_sym = sum(q_sym_terms(clusters, space))
    if cross_check:
        if rel_residual(build_Q_sym_averaged(clusters, space), Q_sym) > tol:
            raise VerificationError("coset sum and S_N average of Q disagree")
        if not is_projector(Q_sym, tol):
            raise VerificationError("symmetrized distinguishing operator is not a projector")
    return Q_sym


def cluster_symmetrizer(clusters: ClusterSpec, space: SpaceSpec) -> np.ndarray:
    """Product of the (anti)symmetrizers of the individual clusters."""
    return subgroup_symmetrizer(cluster_subgroup(clusters), space)


def build_HD_projector(clusters: ClusterSpec, space: SpaceSpec,
                       tol: float = DEFAULT_TOL) -> np.ndarray:
    Q = build_Q(clusters, space)
    S_c = cluster_symmetrizer(clusters, space)
    if fro(commutator(Q, S_c)) > tol * max(1.0, fro(Q)):
        raise VerificationError("Q does not commute with the cluster symmetrizer")
    P = Q @ S_c
    if not is_projector(P, tol):
        raise VerificationError("distinct-cluster projector is not a projector")
    return P


def build_HId_projector(clusters: ClusterSpec, space: SpaceSpec,
                        tol: float = DEFAULT_TOL) -> np.ndarray:
    Q_sym = build_Q_sym(clusters, space, tol)
    S = symmetrizer(space)
    P = Q_sym @ S
    if rel_residual(P, S @ Q_sym) > tol:
        raise VerificationError("Q_sym does not commute with the symmetrizer")
    if not is_projector(P, tol):
        raise VerificationError("identical-particle projector is not a projector")
    return P


@dataclass(frozen=True)
class DimsReport:
    dim_HD: int
    dim_HId: int
    coset_count: int
    scale_factor: float


def _integral_trace(P, what: str) -> int:
    t = float(np.trace(P).real)
    n = int(round(t))
    if abs(t - n) > 1e-6:
        raise NumericalDegradation(f"trace of {what} is {t!r}, not near an integer")
    return n


def dims_report(clusters: ClusterSpec, space: SpaceSpec, tol: float = DEFAULT_TOL) -> DimsReport:
    coset_count = clusters.coset_count
    return DimsReport(
        dim_HD=_integral_trace(build_HD_projector(clusters, space, tol), "distinct-cluster projector"),
        dim_HId=_integral_trace(build_HId_projector(clusters, space, tol), "identical projector"),
        coset_count=coset_count,
        scale_factor=math.sqrt(coset_count),
    )


def expected_dim_HD(clusters: ClusterSpec, space: SpaceSpec) -> int:
    """Closed-form dimension: product over clusters of the (anti)symmetric rank."""
    out = 1
    for n, q in zip(clusters.sizes, clusters.ranks):
        out *= math.comb(q, n) if space.is_fermion else math.comb(q + n - 1, n)
    return out


class ClusterModel:
    """All projectors, frames and group data for one cluster configuration.

    Properties are computed lazily and cached; the instance is treated as
    immutable once built.
    """

    def __init__(self, clusters: ClusterSpec, space: SpaceSpec, tol: float = DEFAULT_TOL,
                 allow_single: bool = False):
        validate_clusters(clusters, space, tol, allow_single=allow_single)
        self.clusters = clusters
        self.space = space
        self.tol = tol

    def label(self) -> str:
        return f"{self.space.label()}-{self.clusters.label()}"

    @property
    def d(self) -> int:
        return self.space.d

    @cached_property
    def sn(self):
        return enumerate_sn(self.space.N)

    @cached_property
    def subgroup(self):
        return cluster_subgroup(self.clusters)

    @cached_property
    def coset_reps(self):
        return coset_representatives(self.clusters)

    @cached_property
    def subgroup_order(self) -> int:
        return self.clusters.subgroup_order

    @cached_property
    def coset_count(self) -> int:
        return self.clusters.coset_count

    @cached_property
    def scale(self) -> float:
        """sqrt(N! / prod N_j!), the factor making the coupling maps unitary."""
        return math.sqrt(self.coset_count)

    @cached_property
    def Q(self) -> np.ndarray:
        return build_Q(self.clusters, self.space)

    @cached_property
    def Q_terms(self) -> list[np.ndarray]:
        return [conjugate_by(g, self.d, self.Q) for g in self.coset_reps]

    @cached_property
    def Q_sym(self) -> np.ndarray:
        Q_sym = sum(self.Q_terms)
        averaged = group_sum(self.Q, self.sn, self.d) / self.subgroup_order
        if rel_residual(averaged, Q_sym) > self.tol:
            raise VerificationError("coset sum and S_N average of Q disagree")
        if not is_projector(Q_sym, self.tol):
            raise VerificationError("symmetrized distinguishing operator is not a projector")
        return Q_sym

    @cached_property
    def S(self) -> np.ndarray:
        return symmetrizer(self.space)

    @cached_property
    def S_clusters(self) -> np.ndarray:
        return subgroup_symmetrizer(self.subgroup, self.space)

    @cached_property
    def P_D(self) -> np.ndarray:
        Q, S_c = self.Q, self.S_clusters
        if fro(commutator(Q, S_c)) > self.tol * max(1.0, fro(Q)):
            raise VerificationError("Q does not commute with the cluster symmetrizer")
        P = Q @ S_c
        if not is_projector(P, self.tol):
            raise VerificationError("distinct-cluster projector is not a projector")
        return P

    @cached_property
    def P_Id(self) -> np.ndarray:
        P = self.Q_sym @ self.S
        if rel_residual(P, self.S @ self.Q_sym) > self.tol:
            raise VerificationError("Q_sym does not commute with the symmetrizer")
        if not is_projector(P, self.tol):
            raise VerificationError("identical-particle projector is not a projector")
        return P

    @cached_property
    def basis_D(self):
        return orthonormal_range(self.P_D, self.tol)

    @cached_property
    def basis_Id(self):
        return orthonormal_range(self.P_Id, self.tol)

    @cached_property
    def dims(self) -> DimsReport:
        return DimsReport(
            dim_HD=_integral_trace(self.P_D, "distinct-cluster projector"),
            dim_HId=_integral_trace(self.P_Id, "identical projector"),
            coset_count=self.coset_count,
            scale_factor=self.scale,
        )

    @property
    def degenerate(self) -> bool:
        return self.dims.dim_HD == 0 and self.dims.dim_HId == 0

    def symmetrize_sn(self, A) -> np.ndarray:
        """(N!)^-1 sum over S_N of P_p A P_p^-1."""
        return group_sum(A, self.sn, self.d) / len(self.sn)

    def symmetrize_subgroup(self, A) -> np.ndarray:
        return group_sum(A, self.subgroup, self.d) / len(self.subgroup)

    @cached_property
    def iso(self):
        """Coordinate form of the coupling/decoupling maps (see ``transport``)."""
        from .transport import build_isomorphisms

        return build_isomorphisms(self)
