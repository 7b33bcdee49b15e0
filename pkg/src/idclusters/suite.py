"""Configuration sweeps that exercise every identity the library relies on.

A sweep walks over single-particle dimensions ``d``, particle numbers ``N``,
both statistics, every ordered split of ``N`` into at least two clusters, and
every assignment of projector ranks to the clusters that fits inside ``d``.
Each identity becomes one :class:`~idclusters.report.CheckRecord`.  Randomized
checks draw from a generator seeded by ``sha256(seed:check-name)``, so a sweep
is reproducible check by check.
"""

from __future__ import annotations

import itertools
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from . import measurement as meas
from . import transport as tr
from .cluster_model import ClusterModel, expected_dim_HD
from .errors import (
    DimensionTooLarge,
    GroupTooLarge,
    IdClustersError,
    IsomorphismImpossible,
    UndetectableOutcome,
)
from .permutations import (
    ClusterSpec,
    Perm,
    compose,
    enumerate_sn,
    inverse,
    is_subgroup,
    parity,
    sign_of,
)
from .report import CheckRecord, Report
from .sampling import (
    coarse_grained,
    compress,
    random_admissible_distinct,
    random_admissible_identical,
    random_hermitian,
    random_state_in,
    random_unitary,
    rng_for,
)
from .symmetrizers import (
    conjugate_by,
    group_sum,
    perm_operator,
    perm_source,
    representation_residuals,
    symmetric_rank,
)
from .tensor_space import DEFAULT_TOL, SpaceSpec, commutator, fro, kron_all, rel_residual

SECTIONS = ("groups", "symmetrizers", "clusters", "isomorphism", "transport",
            "measurement", "possession")

# pass thresholds; checks not listed fall back to the sweep tolerance
THRESHOLDS = {
    "representation": 1e-10,
    "symmetrizer.rank": 0.0,
    "symmetrizer": 1e-10,
    "groups": 0.0,
    "clusters": 1e-10,
    "qsym": 1e-10,
    "dims": 0.0,
    "isomorphism": 1e-10,
    "transport": 1e-9,
    "expectation": 1e-9,
    "evolution": 1e-8,
    "measurement.trace": 1e-12,
    "measurement": 1e-9,
    "possession": 1e-10,
}

IDENTITIES = {
    "groups.closure": "p*q lies in S_N for all p, q",
    "groups.parity_homomorphism": "parity(p*q) = parity(p) parity(q)",
    "groups.parity_inverse": "parity(p^-1) = parity(p); parity(e) = +1",
    "groups.inverse_antihomomorphism": "(p*q)^-1 = q^-1 * p^-1",
    "groups.left_translation": "{g*p : p in S_N} = S_N",
    "groups.conjugation": "{g p g^-1 : p in S_N} = S_N",
    "representation.homomorphism": "P_(p*q) = P_p P_q",
    "representation.inverse_is_adjoint": "P_(p^-1) = P_p^+",
    "representation.unitarity": "P_p^+ P_p = 1",
    "symmetrizer.rank": "rank S = C(d,N) (fermions) or C(d+N-1,N) (bosons)",
    "symmetrizer.projector": "S = S^+ = S^2",
    "symmetrizer.symmetric": "[S, P_p] = 0 for all p",
    "symmetrizer.tensor_average": "S (x O) S = (N!)^-1 S (sum_p P_p (x O) P_p^-1) S",
    "clusters.subgroup": "cluster subgroup closed, of order prod N_j!",
    "clusters.coset_tiling": "coset representatives times cluster subgroup tile S_N",
    "clusters.subgroup_sign_absorption": "sign(p) P_p S_G = S_G = S_G sign(p) P_p for p in G",
    "clusters.symmetrizer_absorption": "S_G S = S = S S_G",
    "clusters.subgroup_fixes_Q": "P_p Q P_p^-1 = Q for p in the cluster subgroup",
    "qsym.coset_vs_average": "coset sum of Q conjugates = (prod N_j!)^-1 sum_{S_N} P Q P^-1",
    "qsym.terms_orthogonal": "distinct conjugates of Q are mutually orthogonal projectors",
    "qsym.term_count": "number of distinct conjugates = N!/prod N_j!",
    "qsym.absorbs_Q": "Q Q_sym = Q = Q_sym Q",
    "qsym.projector": "Q_sym = Q_sym^+ = Q_sym^2",
    "qsym.symmetric": "[Q_sym, P_p] = 0 for all p",
    "dims.HD_formula": "dim H^D = prod_j C(q_j, N_j) or C(q_j+N_j-1, N_j)",
    "dims.equal": "dim H^Id = dim H^D",
    "isomorphism.unitarity": "U^+ U = 1 on H^Id coordinates",
    "isomorphism.coupling_is_adjoint": "coupling map = decoupling map^+",
    "isomorphism.range_Id_to_D": "c Q maps H^Id into H^D",
    "isomorphism.range_D_to_Id": "c S maps H^D into H^Id",
    "isomorphism.compose_on_D": "(c Q)(c S) = 1 on H^D",
    "isomorphism.compose_on_Id": "(c S)(c Q) = 1 on H^Id",
    "isomorphism.scalar_products": "inner products preserved by both maps",
    "transport.d_to_id": "reducee of A_sym on H^Id = U^+ (reducee of A_D) U",
    "transport.d_to_id_commutes": "[A_sym, Q_sym] = 0",
    "transport.id_to_d": "reducee of c^2 Q B S Q on H^D = U (reducee of B) U^+",
    "transport.id_to_d_commutes": "c^2 Q B S Q commutes with Q and cluster permutations",
    "transport.roundtrip": "symmetrized decoupled observable has the original reducee on H^Id",
    "expectation.equal": "tr(rho_Id B_Id) = tr(rho_D B_D)",
    "evolution.transfer": "decoupled final state = U_D (decoupled initial state) U_D^+",
    "measurement.trace": "nonselective update preserves the trace",
    "measurement.nonselective_laws": "nonselective update: Hermitian, positive, idempotent, commutes with E_i",
    "measurement.selective_possession": "selective output possesses its eigenprojector",
    "measurement.reduced_vs_full": "reduced update = compression of the full-space update",
    "measurement.diagram_nonselective": "measure-then-decouple = decouple-then-measure (nonselective)",
    "measurement.diagram_selective": "measure-then-decouple = decouple-then-measure (selective)",
    "measurement.undetectable": "zero-probability outcome is rejected",
    "possession.state_implies_compatibility": "F rho = rho implies [rho, F] = 0",
    "possession.observable_implies_compatibility": "F A = A implies [F, A] = 0",
    "possession.closure": "[F, B] = 0 implies F (F B) = F B",
    "possession.eigenprojectors": "F A = A implies F E_i = E_i for a_i != 0",
    "possession.null_projector": "F A = A implies E_0 = F E_0 + (1 - F)",
}


def threshold_for(name: str, default: float) -> float:
    parts = name.split(".")
    for k in range(len(parts), 0, -1):
        key = ".".join(parts[:k])
        if key in THRESHOLDS:
            return THRESHOLDS[key]
    return default


@dataclass(frozen=True)
class SweepConfig:
    d_values: tuple[int, ...] = (2, 3, 4)
    N_values: tuple[int, ...] = (2, 3, 4)
    statistics: tuple[str, ...] = ("boson", "fermion")
    seed: int = 0
    tol: float = DEFAULT_TOL
    max_dim: int | None = None
    samples: int = 20
    evolution_samples: int = 5
    sections: tuple[str, ...] = SECTIONS
    rotate_projectors: bool = True
    workers: int = 1

    def to_dict(self) -> dict:
        out = asdict(self)
        out.pop("workers")
        return out


def compositions(N: int, min_parts: int = 2):
    """Ordered splits of N into at least ``min_parts`` positive parts."""
    for J in range(min_parts, N + 1):
        for cuts in itertools.combinations(range(1, N), J - 1):
            bounds = (0,) + cuts + (N,)
            yield tuple(b - a for a, b in zip(bounds, bounds[1:]))


def rank_assignments(d: int, J: int):
    """Positive projector ranks for J clusters with total at most d."""
    for ranks in itertools.product(range(1, d + 1), repeat=J):
        if sum(ranks) <= d:
            yield ranks


def cluster_configurations(d: int, N: int):
    for sizes in compositions(N):
        for ranks in rank_assignments(d, len(sizes)):
            yield sizes, ranks


def block_projectors(d: int, ranks, rotation=None) -> tuple[np.ndarray, ...]:
    """Orthogonal projectors onto consecutive basis blocks, optionally rotated."""
    out = []
    start = 0
    for q in ranks:
        diag = np.zeros(d)
        diag[start:start + q] = 1.0
        start += q
        P = np.diag(diag).astype(complex)
        if rotation is not None:
            P = rotation @ P @ rotation.conj().T
            P = (P + P.conj().T) / 2
        out.append(P)
    return tuple(out)


class _Recorder:
    def __init__(self, config: SweepConfig, label: str):
        self.config = config
        self.label = label
        self.records: list[CheckRecord] = []

    def rng(self, name: str):
        return rng_for(self.config.seed, f"{name}@{self.label}")

    def run(self, name: str, fn, degenerate: bool = False, samples: int = 1):
        """Evaluate ``fn() -> residual | (residual, samples)`` into a record."""
        threshold = threshold_for(name, self.config.tol)
        rec = CheckRecord(name, IDENTITIES.get(name, name), self.label, False,
                          threshold=threshold, samples=samples, degenerate=degenerate)
        start = time.perf_counter()
        try:
            if degenerate:
                rec.passed = True
            else:
                out = fn()
                if isinstance(out, tuple):
                    out, rec.samples = out
                rec.residual = float(out)
                rec.passed = bool(rec.residual <= threshold)
        except IdClustersError as exc:
            rec.error = f"{type(exc).__name__}: {exc}"
        except AssertionError as exc:
            rec.error = f"AssertionError: {exc}"
        rec.elapsed = time.perf_counter() - start
        self.records.append(rec)
        return rec


def _group_checks(N: int, config: SweepConfig) -> list[CheckRecord]:
    rec = _Recorder(config, f"S{N}")
    sn = enumerate_sn(N)
    members = set(sn)
    e = Perm.identity(N)

    def closure():
        return float(sum(compose(p, q) not in members for p in sn for q in sn))

    def parity_hom():
        return float(sum(parity(compose(p, q)) != parity(p) * parity(q) for p in sn for q in sn))

    def parity_inv():
        return float(sum(parity(inverse(p)) != parity(p) for p in sn) + (parity(e) != 1))

    def anti():
        return float(sum(inverse(compose(p, q)) != compose(inverse(q), inverse(p))
                         for p in sn for q in sn))

    def left():
        return float(sum(sorted(compose(g, p) for p in sn) != sn for g in sn))

    def conj():
        return float(sum(sorted(compose(compose(g, p), inverse(g)) for p in sn) != sn for g in sn))

    rec.run("groups.closure", closure, samples=len(sn) ** 2)
    rec.run("groups.parity_homomorphism", parity_hom, samples=len(sn) ** 2)
    rec.run("groups.parity_inverse", parity_inv, samples=len(sn))
    rec.run("groups.inverse_antihomomorphism", anti, samples=len(sn) ** 2)
    rec.run("groups.left_translation", left, samples=len(sn))
    rec.run("groups.conjugation", conj, samples=len(sn))
    return rec.records


def _space_checks(space: SpaceSpec, config: SweepConfig) -> list[CheckRecord]:
    rec = _Recorder(config, space.label())
    sn = enumerate_sn(space.N)
    d = space.d

    if space.dim <= 64:
        reps = {}

        def rep(key):
            if not reps:
                reps.update(representation_residuals(space, sn))
            return reps[key]
    else:
        # same laws through the index maps: composition of gathers and inversion
        def rep(key):
            worst = 0
            for p in sn:
                sp = perm_source(p, d)
                if key == "homomorphism":
                    for q in sn:
                        worst = max(worst, int(np.any(perm_source(compose(p, q), d) != perm_source(q, d)[sp])))
                elif key == "inverse_is_adjoint":
                    inv_map = np.empty_like(sp)
                    inv_map[sp] = np.arange(sp.size)
                    worst = max(worst, int(np.any(perm_source(inverse(p), d) != inv_map)))
                else:
                    worst = max(worst, int(np.unique(sp).size != sp.size))
            return float(worst)

    for key in ("homomorphism", "inverse_is_adjoint", "unitarity"):
        rec.run(f"representation.{key}", lambda key=key: rep(key), samples=len(sn))

    from .symmetrizers import symmetrizer

    S = symmetrizer(space)

    def rank():
        w = np.linalg.eigvalsh(S)
        return float(abs(int(np.count_nonzero(w > 0.5)) - symmetric_rank(space)))

    def projector():
        return max(rel_residual(S, S.conj().T), rel_residual(S, S @ S))

    def symmetric():
        return max(fro(conjugate_by(p, d, S) - S) for p in sn) / max(1.0, fro(S))

    def tensor_average():
        rng = rec.rng("symmetrizer.tensor_average")
        worst = 0.0
        for _ in range(3):
            factors = [random_hermitian(d, rng) + 1j * random_hermitian(d, rng) for _ in range(space.N)]
            O = kron_all(factors)
            lhs = S @ O @ S
            rhs = S @ group_sum(O, sn, d) @ S / len(sn)
            worst = max(worst, rel_residual(lhs, rhs))
        return worst, 3

    rec.run("symmetrizer.rank", rank)
    rec.run("symmetrizer.projector", projector)
    rec.run("symmetrizer.symmetric", symmetric, samples=len(sn))
    rec.run("symmetrizer.tensor_average", tensor_average)
    return rec.records


def _coset_tiling(model: ClusterModel) -> float:
    covered = [compose(g, h) for g in model.coset_reps for h in model.subgroup]
    bad = len(model.coset_reps) != model.coset_count
    bad |= sorted(covered) != model.sn
    bad |= not model.coset_reps[0].is_identity()
    return float(bad)


def _cluster_checks(model: ClusterModel, rec: _Recorder) -> None:
    d = model.d
    cl = model.clusters

    def subgroup():
        ok = is_subgroup(model.subgroup) and len(model.subgroup) == cl.subgroup_order
        return float(not ok)

    def sign_absorption():
        S_G = model.S_clusters
        worst = 0.0
        for p in model.subgroup:
            sP = sign_of(p, model.space.statistics) * perm_operator(p, model.space)
            worst = max(worst, rel_residual(S_G, sP @ S_G), rel_residual(S_G, S_G @ sP))
        return worst, len(model.subgroup)

    def absorption():
        S, S_G = model.S, model.S_clusters
        return max(rel_residual(S, S_G @ S), rel_residual(S, S @ S_G))

    def fixes_Q():
        Q = model.Q
        return max(rel_residual(Q, conjugate_by(p, d, Q)) for p in model.subgroup), len(model.subgroup)

    def coset_vs_average():
        averaged = group_sum(model.Q, model.sn, d) / model.subgroup_order
        return rel_residual(averaged, sum(model.Q_terms))

    def orthogonal():
        terms = model.Q_terms
        worst = 0.0
        for a, b in itertools.combinations(range(len(terms)), 2):
            worst = max(worst, fro(terms[a] @ terms[b]))
        for T in terms:
            worst = max(worst, rel_residual(T, T @ T))
        return worst / max(1.0, fro(model.Q)), len(terms)

    def term_count():
        terms = model.Q_terms
        distinct = []
        for T in terms:
            if all(fro(T - U) > 1e-8 for U in distinct):
                distinct.append(T)
        return float(abs(len(distinct) - model.coset_count))

    def absorbs_Q():
        Q, Qs = model.Q, model.Q_sym
        return max(rel_residual(Q, Q @ Qs), rel_residual(Q, Qs @ Q))

    def qsym_projector():
        Qs = model.Q_sym
        return max(rel_residual(Qs, Qs.conj().T), rel_residual(Qs, Qs @ Qs))

    def qsym_symmetric():
        Qs = model.Q_sym
        return max(rel_residual(Qs, conjugate_by(p, d, Qs)) for p in model.sn), len(model.sn)

    def hd_formula():
        return float(abs(model.dims.dim_HD - expected_dim_HD(cl, model.space)))

    def dims_equal():
        return float(abs(model.dims.dim_HD - model.dims.dim_HId))

    rec.run("clusters.subgroup", subgroup)
    rec.run("clusters.coset_tiling", lambda: _coset_tiling(model))
    rec.run("clusters.subgroup_sign_absorption", sign_absorption)
    rec.run("clusters.symmetrizer_absorption", absorption)
    rec.run("clusters.subgroup_fixes_Q", fixes_Q)
    rec.run("qsym.coset_vs_average", coset_vs_average)
    rec.run("qsym.terms_orthogonal", orthogonal)
    rec.run("qsym.term_count", term_count)
    rec.run("qsym.absorbs_Q", absorbs_Q)
    rec.run("qsym.projector", qsym_projector)
    rec.run("qsym.symmetric", qsym_symmetric)
    rec.run("dims.HD_formula", hd_formula)
    rec.run("dims.equal", dims_equal)


def _isomorphism_checks(model: ClusterModel, rec: _Recorder, config: SweepConfig) -> None:
    report = None

    def get(key):
        nonlocal report
        if report is None:
            report = tr.verify_isomorphisms(model, rec.rng("isomorphism"), n_pairs=config.samples)
        if report.dim_Id != report.dim_D:
            raise IsomorphismImpossible(f"dim H^Id = {report.dim_Id}, dim H^D = {report.dim_D}")
        return report.residuals[key]

    keys = ("unitarity", "coupling_is_adjoint", "range_Id_to_D", "range_D_to_Id",
            "compose_on_D", "compose_on_Id", "scalar_products")
    for key in keys:
        samples = 2 * config.samples if key == "scalar_products" else 1
        rec.run(f"isomorphism.{key}", lambda key=key: get(key), degenerate=model.degenerate,
                samples=samples)


def _transport_checks(model: ClusterModel, rec: _Recorder, config: SweepConfig) -> None:
    n = config.samples
    degenerate = model.degenerate
    memo = {}

    def worst(rows, keys):
        return max(max(r[k] for k in keys) for r in rows), len(rows)

    def d_to_id_rows():
        if "d_to_id" not in memo:
            rng = rec.rng("transport.d_to_id")
            memo["d_to_id"] = [tr.d_to_id_residuals(random_admissible_distinct(model, rng), model)[1]
                               for _ in range(n)]
        return memo["d_to_id"]

    def id_to_d_rows():
        # one batch of observables feeds decoupling, round trip and expectations
        if "id_to_d" not in memo:
            rng = rec.rng("transport.id_to_d")
            rows = []
            for k in range(n):
                B = random_admissible_identical(model, rng)
                B_D, row = tr.id_to_d_residuals(B, model)
                row["roundtrip"] = tr.roundtrip_residual(B, model, B_D)
                if not degenerate:
                    rho = random_state_in(model.basis_Id, rng, pure=(k % 2 == 0))
                    row["expectation"] = tr.expectation_check(rho, B, model, B_D).residual
                rows.append(row)
            memo["id_to_d"] = rows
        return memo["id_to_d"]

    def evolution():
        rng = rec.rng("evolution.transfer")
        out = 0.0
        for _ in range(config.evolution_samples):
            U = tr.exp_i_hermitian(random_admissible_identical(model, rng), 0.7)
            rho = random_state_in(model.basis_Id, rng)
            out = max(out, tr.transfer_evolution(U, rho, model).residual)
        return out, config.evolution_samples

    rec.run("transport.d_to_id", lambda: worst(d_to_id_rows(), ["reducee_equivalence"]), degenerate, n)
    rec.run("transport.d_to_id_commutes", lambda: worst(d_to_id_rows(), ["commutes_Q_sym"]), False, n)
    rec.run("transport.id_to_d", lambda: worst(id_to_d_rows(), ["reducee_equivalence"]), degenerate, n)
    rec.run("transport.id_to_d_commutes",
            lambda: worst(id_to_d_rows(), ["commutes_cluster_perms", "commutes_Q"]), False, n)
    rec.run("transport.roundtrip", lambda: worst(id_to_d_rows(), ["roundtrip"]), degenerate, n)
    rec.run("expectation.equal", lambda: worst(id_to_d_rows(), ["expectation"]), degenerate, n)
    rec.run("evolution.transfer", evolution, degenerate, config.evolution_samples)


def _measurement_checks(model: ClusterModel, rec: _Recorder, config: SweepConfig) -> None:
    degenerate = model.degenerate
    n_inst = 3
    cache = {}

    def instances():
        if "inst" not in cache:
            rng = rec.rng("measurement")
            out = []
            for k in range(n_inst):
                A = coarse_grained(random_admissible_identical(model, rng), rng)
                if fro(model.basis_Id.coords(A)) < 1e-6:
                    # zero happened to land on all of H^Id; P_Id commutes with A
                    A = A + model.P_Id
                rho = random_state_in(model.basis_Id, rng, pure=(k == 0))
                out.append((rho, A))
            cache["inst"] = out
        return cache["inst"]

    def trace():
        worst = 0.0
        for rho, A in instances():
            worst = max(worst, abs(np.trace(meas.luders_reduced(rho, A, model)) - 1.0),
                        abs(np.trace(meas.luders_nonselective(rho, A)) - 1.0))
        return worst, n_inst

    def laws():
        worst = 0.0
        for rho, A in instances():
            out = meas.luders_nonselective(rho, A)
            dec = meas.spectral_decompose(A)
            worst = max(worst, rel_residual(out, out.conj().T),
                        max(0.0, -float(np.linalg.eigvalsh((out + out.conj().T) / 2).min())),
                        rel_residual(out, meas.luders_nonselective(out, A)),
                        max(fro(commutator(out, E)) for E in dec.projectors))
        return worst, n_inst

    def outcomes(rho, A):
        dec = meas.spectral_decompose(A)
        return [i for i, E in enumerate(dec.projectors)
                if float(np.trace(E @ rho).real) > 1e-6]

    def selective():
        worst = 0.0
        count = 0
        for rho, A in instances():
            dec = meas.spectral_decompose(A)
            for i in outcomes(rho, A):
                out, _ = meas.luders_selective(rho, A, i)
                E = dec.projectors[i]
                if not meas.possesses_property(out, E):
                    worst = max(worst, fro(E @ out - out))
                count += 1
        return worst, count

    def reduced_vs_full():
        worst = 0.0
        for rho, A in instances():
            worst = max(worst, meas.reduced_vs_full_residual(rho, A, model))
            for i in outcomes(rho, A):
                worst = max(worst, meas.reduced_vs_full_residual(rho, A, model, i))
        return worst, n_inst

    def diagram(selective_mode):
        worst = 0.0
        count = 0
        for rho, A in instances():
            targets = outcomes(rho, A) if selective_mode else [None]
            for i in targets:
                worst = max(worst, meas.measurement_diagram(rho, A, model, i).residual)
                count += 1
        return worst, count

    def undetectable():
        rng = rec.rng("measurement.undetectable")
        _, A = instances()[0]
        dec = meas.spectral_decompose(A)
        V = model.basis_Id
        live = [i for i, E in enumerate(dec.projectors) if fro(V.coords(E)) > 1e-6]
        if len(live) < 2:
            # with one live outcome pick a dead one among all eigenprojectors
            dead = [i for i in range(len(dec)) if i not in live]
            if not live or not dead:
                return 0.0
            keep, probe = live[0], dead[0]
        else:
            keep, probe = live[0], live[1]
        e = V.coords(dec.projectors[keep])
        w, vecs = np.linalg.eigh(e)
        psi = vecs[:, w > 0.5] @ (rng.standard_normal(int(np.sum(w > 0.5))) + 0j)
        psi /= np.linalg.norm(psi)
        rho = V.embed(np.outer(psi, psi.conj()))
        try:
            meas.luders_reduced(rho, A, model, probe)
        except UndetectableOutcome:
            return 0.0
        return 1.0

    rec.run("measurement.trace", trace, degenerate)
    rec.run("measurement.nonselective_laws", laws, degenerate)
    rec.run("measurement.selective_possession", selective, degenerate)
    rec.run("measurement.reduced_vs_full", reduced_vs_full, degenerate)
    rec.run("measurement.diagram_nonselective", lambda: diagram(False), degenerate)
    rec.run("measurement.diagram_selective", lambda: diagram(True), degenerate)
    rec.run("measurement.undetectable", undetectable, degenerate)


def _possession_checks(model: ClusterModel, rec: _Recorder, config: SweepConfig) -> None:
    F = model.Q_sym
    degenerate = model.degenerate
    n = 3

    def state_implies():
        rng = rec.rng("possession.state")
        worst = 0.0
        for k in range(n):
            rho = random_state_in(model.basis_Id, rng, pure=(k == 0))
            if not meas.possesses_property(rho, F):
                return 1.0, k + 1
            worst = max(worst, fro(commutator(rho, F)))
        return worst, n

    def observables(rng):
        return [F @ random_admissible_identical(model, rng) @ F for _ in range(n)]

    def obs_implies():
        worst = 0.0
        for A in observables(rec.rng("possession.observable")):
            if fro(F @ A - A) > 1e-10 * max(1.0, fro(A)):
                return 1.0, n
            worst = max(worst, fro(commutator(F, A)) / max(1.0, fro(A)))
        return worst, n

    def closure():
        rng = rec.rng("possession.closure")
        worst = 0.0
        for _ in range(n):
            B = compress(random_hermitian(model.space.dim, rng), F)
            FB = F @ B
            worst = max(worst, rel_residual(FB, F @ FB))
        return worst, n

    def eigen(null: bool):
        rng = rec.rng("possession.eigen")
        worst = 0.0
        for A in observables(rng):
            A = coarse_grained(A, rng)
            A = F @ A @ F
            report = meas.observable_possesses(A, F)
            for e in report.eigen:
                if e.null == null:
                    worst = max(worst, e.residual)
        return worst, n

    rec.run("possession.state_implies_compatibility", state_implies, degenerate)
    rec.run("possession.observable_implies_compatibility", obs_implies)
    rec.run("possession.closure", closure)
    rec.run("possession.eigenprojectors", lambda: eigen(False))
    rec.run("possession.null_projector", lambda: eigen(True))


def _configuration_checks(space: SpaceSpec, sizes, ranks, config: SweepConfig) -> list[CheckRecord]:
    label = f"{space.label()}-sizes({','.join(map(str, sizes))})-ranks({','.join(map(str, ranks))})"
    rec = _Recorder(config, label)
    rotation = random_unitary(space.d, rec.rng("projectors")) if config.rotate_projectors else None
    clusters = ClusterSpec(sizes, block_projectors(space.d, ranks, rotation))
    try:
        model = ClusterModel(clusters, space, config.tol)
        model.dims
    except IdClustersError as exc:
        rec.records.append(CheckRecord("clusters.build", "cluster model construction", label,
                                       False, error=f"{type(exc).__name__}: {exc}"))
        return rec.records
    sections = set(config.sections)
    if "clusters" in sections:
        _cluster_checks(model, rec)
    if "isomorphism" in sections:
        _isomorphism_checks(model, rec, config)
    if "transport" in sections:
        _transport_checks(model, rec, config)
    if "measurement" in sections:
        _measurement_checks(model, rec, config)
    if "possession" in sections:
        _possession_checks(model, rec, config)
    return rec.records


def _guarded(label: str, fn, *args):
    try:
        return fn(*args)
    except (DimensionTooLarge, GroupTooLarge) as exc:
        return [CheckRecord("guard", "configuration within size guards", label, False,
                            skipped=True, error=f"{type(exc).__name__}: {exc}")]


def plan(config: SweepConfig) -> list[tuple]:
    """Ordered list of work items ``(label, function, args)`` for a sweep."""
    sections = set(config.sections)
    jobs = []
    if "groups" in sections:
        for N in sorted(set(config.N_values)):
            jobs.append((f"S{N}", _group_checks, (N, config)))
    for stat in config.statistics:
        for d in config.d_values:
            for N in config.N_values:
                label = f"{stat}-d{d}-N{N}"
                try:
                    space = SpaceSpec(d, N, stat, max_dim=config.max_dim)
                except DimensionTooLarge as exc:
                    jobs.append((label, _skip, (label, exc)))
                    continue
                if "symmetrizers" in sections:
                    jobs.append((label, _space_checks, (space, config)))
                if sections & {"clusters", "isomorphism", "transport", "measurement", "possession"}:
                    for sizes, ranks in cluster_configurations(d, N):
                        jobs.append((label, _configuration_checks, (space, sizes, ranks, config)))
    return jobs


def _skip(label, exc):
    return [CheckRecord("guard", "configuration within size guards", label, False,
                        skipped=True, error=f"{type(exc).__name__}: {exc}")]


def run_verification_suite(config: SweepConfig | None = None) -> Report:
    """Run every check of the sweep described by ``config``.

    Work items are independent; with ``workers > 1`` they run on a thread
    pool, and results are assembled in plan order so the report does not
    depend on scheduling.
    """
    config = SweepConfig() if config is None else config
    jobs = plan(config)
    report = Report("verify-suite", config.to_dict())
    if config.workers > 1:
        with ThreadPoolExecutor(config.workers) as pool:
            results = list(pool.map(lambda job: _guarded(job[0], job[1], *job[2]), jobs))
    else:
        results = [_guarded(label, fn, *args) for label, fn, args in jobs]
    for records in results:
        report.extend(records)
    return report
