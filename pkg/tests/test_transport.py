import math

import numpy as np
import pytest

from idclusters import ClusterModel, SpaceSpec
from idclusters.cluster_model import DimsReport
from idclusters.errors import (
    CompatibilityViolated,
    DegenerateSubspace,
    IsomorphismImpossible,
    PossessionViolated,
)
from idclusters.sampling import (
    random_admissible_distinct,
    random_admissible_identical,
    random_hermitian,
    random_state_in,
    random_unitary,
)
from idclusters.symmetrizers import perm_operator
from idclusters.tensor_space import kron_all, rel_residual
from idclusters.transport import (
    build_isomorphisms,
    exp_i_hermitian,
    expectation_check,
    roundtrip_residual,
    symmetrize_distinct_obs,
    transfer_evolution,
    transport_observable_d_to_id,
    transport_observable_id_to_d,
    transport_state,
    transport_state_to_id,
    verify_isomorphisms,
)

from conftest import block_clusters


def dense_average(A, model, perms):
    mats = [perm_operator(p, model.space) for p in perms]
    return sum(P @ A @ P.conj().T for P in mats)


def test_pair_singlet_decouples_to_product(pair_model):
    singlet = np.array([0, 1, -1, 0]) / np.sqrt(2)
    v = pair_model.scale * pair_model.Q @ singlet
    # E x F |singlet> * sqrt(2) = |e f>
    assert np.allclose(v, [0, 1, 0, 0])
    assert np.linalg.norm(v) == pytest.approx(1.0, abs=1e-15)


@pytest.mark.parametrize("model_name", ["fermion_21", "boson_21", "pair_model"])
def test_isomorphism_laws(model_name, request):
    model = request.getfixturevalue(model_name)
    rep = verify_isomorphisms(model, np.random.default_rng(1))
    assert rep.passed and not rep.degenerate
    assert max(rep.residuals.values()) < 1e-12
    assert set(rep.residuals) == {"unitarity", "coupling_is_adjoint", "range_Id_to_D", "range_D_to_Id",
                                  "compose_on_D", "compose_on_Id", "scalar_products"}


def test_decoupling_preserves_norm_and_inverts(fermion_21, rng):
    V = fermion_21.basis_Id.columns
    psi = V @ (rng.standard_normal(V.shape[1]) + 1j * rng.standard_normal(V.shape[1]))
    c = math.sqrt(3)
    v = c * fermion_21.Q @ psi
    assert np.linalg.norm(v) == pytest.approx(np.linalg.norm(psi))
    assert np.allclose(fermion_21.P_D @ v, v)
    assert np.allclose(c * fermion_21.S @ v, psi)


def test_degenerate_and_impossible_isomorphisms():
    model = ClusterModel(block_clusters(2, (2, 1), (1, 1)), SpaceSpec(2, 3, "fermion"))
    with pytest.raises(DegenerateSubspace):
        build_isomorphisms(model)
    pair = build_isomorphisms(model, allow_degenerate=True)
    assert pair.degenerate and pair.rank == 0
    assert verify_isomorphisms(model).degenerate

    broken = ClusterModel(block_clusters(3, (1, 1), (1, 2)), SpaceSpec(3, 2))
    broken.__dict__["dims"] = DimsReport(2, 1, 2, math.sqrt(2))
    with pytest.raises(IsomorphismImpossible):
        build_isomorphisms(broken)
    assert not verify_isomorphisms(broken).passed


def test_distinct_to_identical_matches_explicit_average(fermion_21, rng):
    A = random_admissible_distinct(fermion_21, rng)
    expected = dense_average(A @ fermion_21.Q, fermion_21, fermion_21.sn) / fermion_21.subgroup_order
    got = transport_observable_d_to_id(A, fermion_21)
    assert rel_residual(got, expected) < 1e-13
    V_Id, V_D, U = fermion_21.basis_Id, fermion_21.basis_D, fermion_21.iso.U
    assert rel_residual(V_Id.coords(got), U.conj().T @ V_D.coords(A) @ U) < 1e-12


def test_identical_to_distinct_matches_formula(boson_21, rng):
    B = random_admissible_identical(boson_21, rng)
    B_D = transport_observable_id_to_d(B, boson_21)
    expected = boson_21.coset_count * boson_21.Q @ B @ boson_21.S @ boson_21.Q
    assert rel_residual(B_D, expected) < 1e-13
    assert roundtrip_residual(B, boson_21) < 1e-12


def test_symmetrize_distinct_obs_is_symmetric(fermion_21, rng):
    A = random_admissible_distinct(fermion_21, rng)
    out = symmetrize_distinct_obs(A, fermion_21)
    for p in fermion_21.sn:
        P = perm_operator(p, fermion_21.space)
        assert np.allclose(P @ out, out @ P)


def test_inadmissible_observables_are_rejected(fermion_21, rng):
    H = random_hermitian(fermion_21.space.dim, rng)
    with pytest.raises(CompatibilityViolated):
        transport_observable_id_to_d(H, fermion_21)
    with pytest.raises(CompatibilityViolated):
        transport_observable_d_to_id(H, fermion_21)
    # symmetric but not compatible with Q_sym
    with pytest.raises(CompatibilityViolated):
        transport_observable_id_to_d(fermion_21.symmetrize_sn(H), fermion_21)


def test_state_round_trip_and_expectation(fermion_21, rng):
    rho = random_state_in(fermion_21.basis_Id, rng)
    rho_D = transport_state(rho, fermion_21)
    assert np.trace(rho_D).real == pytest.approx(1.0)
    assert np.allclose(fermion_21.P_D @ rho_D, rho_D)
    assert rel_residual(transport_state_to_id(rho_D, fermion_21), rho) < 1e-12
    for _ in range(5):
        B = random_admissible_identical(fermion_21, rng)
        rec = expectation_check(rho, B, fermion_21)
        assert rec.residual < 1e-12
        assert rec.val_Id == pytest.approx(float(np.trace(rho @ B).real))


def test_state_outside_h_id_is_rejected(fermion_21):
    psi = np.zeros(fermion_21.space.dim)
    psi[0] = 1
    with pytest.raises(PossessionViolated):
        transport_state(np.outer(psi, psi), fermion_21)


def test_evolution_transfer(boson_21, rng):
    H = random_admissible_identical(boson_21, rng)
    rho = random_state_in(boson_21.basis_Id, rng, pure=True)
    rec = transfer_evolution(exp_i_hermitian(H, 0.7), rho, boson_21)
    assert rec.residual < 1e-10
    # U_D agrees with the coordinate conjugate of the same step
    U_Id = boson_21.basis_Id.coords(exp_i_hermitian(H, 0.7))
    U = boson_21.iso.U
    assert rel_residual(boson_21.basis_D.coords(rec.U_D), U @ U_Id @ U.conj().T) < 1e-10


def test_evolution_with_inadmissible_unitary(boson_21, rng):
    rho = random_state_in(boson_21.basis_Id, rng)
    with pytest.raises(CompatibilityViolated):
        transfer_evolution(random_unitary(boson_21.space.dim, rng), rho, boson_21)
    with pytest.raises(CompatibilityViolated):
        transfer_evolution(2 * np.eye(boson_21.space.dim), rho, boson_21)


def test_exp_i_hermitian_oracle():
    H = np.diag([1.0, -2.0])
    assert np.allclose(exp_i_hermitian(H, 0.5), np.diag(np.exp(1j * 0.5 * np.array([1.0, -2.0]))))
    X = np.array([[0, 1], [1, 0]])
    t = 0.3
    assert np.allclose(exp_i_hermitian(X, t), np.cos(t) * np.eye(2) + 1j * np.sin(t) * X)


def test_pair_model_product_observables(pair_model, rng):
    # a one-body observable a x 1 + 1 x a with a diagonal in (E, F) is admissible
    a = np.diag([0.4, -1.3])
    B = kron_all([a, np.eye(2)]) + kron_all([np.eye(2), a])
    B_D = transport_observable_id_to_d(B, pair_model)
    assert rel_residual(pair_model.basis_D.coords(B_D), np.array([[0.4 - 1.3]])) < 1e-14
