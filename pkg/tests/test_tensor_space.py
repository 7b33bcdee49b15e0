import itertools

import numpy as np
import pytest

from idclusters.errors import (
    DimensionMismatch,
    DimensionTooLarge,
    NotADensityOperator,
    NotAProjector,
    NotHermitian,
)
from idclusters.tensor_space import (
    SpaceSpec,
    Statistics,
    check_density,
    check_hermitian,
    check_projector,
    digits_of,
    kron_all,
    linear_index,
    max_dim,
    op_equal,
    orthonormal_range,
    pure_state,
    rel_residual,
)


def test_first_particle_is_most_significant():
    sp = SpaceSpec(3, 3)
    # |k1 k2 k3> sits at 9 k1 + 3 k2 + k3
    for digits in itertools.product(range(3), repeat=3):
        assert linear_index(digits, sp) == 9 * digits[0] + 3 * digits[1] + digits[2]
        assert digits_of(linear_index(digits, sp), sp) == digits


def test_index_matches_kron_of_basis_vectors():
    sp = SpaceSpec(2, 3)
    e = np.eye(2)
    for digits in itertools.product(range(2), repeat=3):
        v = kron_all([e[:, [k]] for k in digits]).ravel()
        assert np.argmax(v) == linear_index(digits, sp)


def test_index_errors():
    sp = SpaceSpec(2, 2)
    with pytest.raises(IndexError):
        linear_index((0, 2), sp)
    with pytest.raises(IndexError):
        linear_index((0,), sp)
    with pytest.raises(IndexError):
        digits_of(4, sp)


def test_space_spec_basics():
    sp = SpaceSpec(4, 3, "boson")
    assert sp.dim == 64 and sp.shape == (4, 4, 4)
    assert sp.statistics is Statistics.BOSON and not sp.is_fermion
    assert sp.label() == "boson-d4-N3"
    with pytest.raises(ValueError):
        SpaceSpec(0, 2)


def test_dimension_guard(monkeypatch):
    with pytest.raises(DimensionTooLarge):
        SpaceSpec(4, 4, max_dim=100)
    monkeypatch.setenv("IDCLUSTERS_MAX_DIM", "50")
    assert max_dim() == 50
    with pytest.raises(DimensionTooLarge):
        SpaceSpec(4, 3)
    monkeypatch.setenv("IDCLUSTERS_MAX_DIM", "-3")
    with pytest.raises(ValueError):
        max_dim()


def test_rel_residual_and_op_equal():
    A = np.eye(3)
    assert rel_residual(A, A) == 0
    assert rel_residual(np.zeros((2, 2)), 1e-3 * np.eye(2)) == pytest.approx(np.sqrt(2) * 1e-3)
    ok, res = op_equal(A, A + 1e-12)
    assert ok and res < 1e-11
    with pytest.raises(DimensionMismatch):
        rel_residual(np.eye(2), np.eye(3))


def test_validators():
    with pytest.raises(NotHermitian):
        check_hermitian(np.array([[0, 1], [0, 0]]))
    with pytest.raises(NotAProjector):
        check_projector(2 * np.eye(2))
    with pytest.raises(NotADensityOperator):
        check_density(np.diag([1.5, -0.5]))
    with pytest.raises(NotADensityOperator):
        check_density(np.eye(2))
    rho = pure_state(np.array([1, 1j]))
    assert np.trace(rho).real == pytest.approx(1)
    check_density(rho)


def test_orthonormal_range_is_canonical(rng):
    # the same subspace written with two different projector round-offs gives the same frame
    X = rng.standard_normal((6, 3)) + 1j * rng.standard_normal((6, 3))
    Qm, _ = np.linalg.qr(X)
    P = Qm @ Qm.conj().T
    U = np.linalg.qr(rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3)))[0]
    Qm2 = Qm @ U
    P2 = Qm2 @ Qm2.conj().T
    b1, b2 = orthonormal_range(P), orthonormal_range(P2)
    assert b1.rank == 3
    assert np.allclose(b1.columns, b2.columns, atol=1e-10)
    assert np.allclose(b1.columns.conj().T @ b1.columns, np.eye(3))
    assert rel_residual(b1.projector, P) < 1e-12


def test_subspace_coords_embed_roundtrip(rng):
    P = np.diag([1, 0, 1, 0]).astype(complex)
    b = orthonormal_range(P)
    a = rng.standard_normal((2, 2))
    assert np.allclose(b.coords(b.embed(a)), a)
    # columns of a coordinate projector come out as the unit vectors in order
    assert np.allclose(np.abs(b.columns), np.eye(4)[:, [0, 2]])


def test_empty_range():
    b = orthonormal_range(np.zeros((3, 3)))
    assert b.rank == 0 and b.columns.shape == (3, 0)


def test_orthonormal_range_rejects_non_projector():
    with pytest.raises(NotAProjector):
        orthonormal_range(np.diag([1.0, 0.5]))
