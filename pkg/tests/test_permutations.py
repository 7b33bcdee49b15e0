import itertools
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from idclusters.errors import BadClusterCount, GroupTooLarge, NotAProjector, NotOrthogonal, SizesMismatch
from idclusters.permutations import (
    ClusterSpec,
    Perm,
    cluster_subgroup,
    compose,
    coset_representatives,
    enumerate_sn,
    inverse,
    is_subgroup,
    parity,
    sign_of,
)

from conftest import block_clusters


def inversion_parity(p):
    # independent oracle: parity from the inversion count
    img = p.image
    inv = sum(1 for i, j in itertools.combinations(range(len(img)), 2) if img[i] > img[j])
    return -1 if inv % 2 else 1


perms = st.integers(1, 6).flatmap(lambda n: st.permutations(list(range(n))).map(lambda x: Perm(tuple(x))))


def same_size_pair(n_max=6):
    return st.integers(1, n_max).flatmap(
        lambda n: st.tuples(st.permutations(list(range(n))), st.permutations(list(range(n))))
    ).map(lambda t: (Perm(tuple(t[0])), Perm(tuple(t[1]))))


def test_enumeration_is_lexicographic_and_complete():
    s3 = enumerate_sn(3)
    assert [p.image for p in s3] == sorted(itertools.permutations(range(3)))
    assert len(enumerate_sn(5)) == 120
    with pytest.raises(GroupTooLarge):
        enumerate_sn(9)


def test_perm_constructors():
    t = Perm.transposition(4, 0, 2)
    assert t.image == (2, 1, 0, 3)
    assert Perm.from_one_based((2, 3, 1)).image == (1, 2, 0)
    c = Perm.from_cycles(4, (0, 1, 2))
    assert c(0) == 1 and c(2) == 0 and c(3) == 3
    assert c.cycles() == [(0, 1, 2), (3,)]
    assert Perm.identity(3).is_identity()
    assert repr(Perm((1, 0))) == "Perm((1, 0))"
    assert eval(repr(Perm((2, 0, 1)))) == Perm((2, 0, 1))
    assert str(Perm((1, 0))) == "[2 1]"
    with pytest.raises(ValueError):
        Perm((0, 0))


def test_composition_applies_right_factor_first():
    p = Perm.from_cycles(3, (0, 1))
    q = Perm.from_cycles(3, (1, 2))
    pq = compose(p, q)
    assert all(pq(n) == p(q(n)) for n in range(3))
    assert p * q == pq


@given(perms)
def test_parity_matches_inversion_count(p):
    assert parity(p) == inversion_parity(p)


@given(same_size_pair())
def test_parity_is_a_homomorphism(pq):
    p, q = pq
    assert parity(compose(p, q)) == parity(p) * parity(q)
    assert inverse(compose(p, q)) == compose(inverse(q), inverse(p))


@given(perms)
def test_inverse(p):
    assert compose(p, inverse(p)).is_identity()
    assert parity(inverse(p)) == parity(p)


def test_sign_of_statistics():
    t = Perm.transposition(3, 0, 1)
    assert sign_of(t, "boson") == 1
    assert sign_of(t, "fermion") == -1


def test_cluster_subgroup_and_cosets():
    cl = block_clusters(4, (2, 1), (2, 2))
    G = cluster_subgroup(cl)
    assert len(G) == cl.subgroup_order == 2
    assert is_subgroup(G)
    reps = coset_representatives(cl)
    assert len(reps) == cl.coset_count == 3
    assert reps[0].is_identity()
    tiles = sorted(compose(g, h) for g in reps for h in G)
    assert tiles == enumerate_sn(3)


@pytest.mark.parametrize("sizes", [(1, 1), (2, 1), (1, 2, 1), (2, 2), (1, 3), (1, 1, 1, 1)])
def test_coset_count_formula(sizes):
    cl = block_clusters(len(sizes), sizes, (1,) * len(sizes))
    N = sum(sizes)
    assert cl.coset_count == math.factorial(N) // math.prod(math.factorial(s) for s in sizes)
    assert len(coset_representatives(cl)) == cl.coset_count


def test_cluster_labels_and_layout():
    cl = block_clusters(5, (2, 1, 2), (1, 2, 2))
    assert cl.N == 5 and cl.J == 3 and cl.d == 5
    assert cl.offsets == (0, 2, 3)
    assert cl.cluster_of == (0, 0, 1, 2, 2)
    assert cl.ranks == (1, 2, 2)
    assert cl.label() == "sizes(2,1,2)-ranks(1,2,2)"


def test_cluster_validation_errors():
    cl = block_clusters(4, (2, 1), (2, 2))
    with pytest.raises(SizesMismatch):
        cl.validate(N=4, d=4)
    with pytest.raises(BadClusterCount):
        block_clusters(4, (3,), (2,)).validate(N=3, d=4)
    block_clusters(4, (3,), (2,)).validate(N=3, d=4, allow_single=True)
    with pytest.raises(NotAProjector):
        ClusterSpec((1, 1), (np.diag([1.0, 0.5]), np.diag([0.0, 1.0]))).validate(N=2, d=2)
    with pytest.raises(NotOrthogonal):
        ClusterSpec((1, 1), (np.diag([1.0, 1.0]), np.diag([0.0, 1.0]))).validate(N=2, d=2)
    with pytest.raises(BadClusterCount):
        ClusterSpec((1, 1), (np.eye(2),))
    with pytest.raises(SizesMismatch):
        ClusterSpec((0, 1), (np.eye(2), np.eye(2)))


def test_is_subgroup_rejects_non_closed_set():
    assert not is_subgroup([Perm.identity(3), Perm.from_cycles(3, (0, 1, 2))])
