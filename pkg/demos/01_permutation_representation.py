"""Permutations of particle labels acting on (C^d)^N.

Builds the operators P_p for every p in S_3 on three qubits, shows how a
product basis vector moves, and confirms the representation laws.
"""

import numpy as np

from idclusters import Perm, SpaceSpec, apply_perm, enumerate_sn, perm_operator
from idclusters.permutations import compose, inverse
from idclusters.tensor_space import linear_index, digits_of

space = SpaceSpec(d=2, N=3)

# particle m's state moves to slot p(m): the cycle 1 -> 2 -> 3 -> 1
p = Perm.from_one_based([2, 3, 1])
ket = np.zeros(space.dim)
ket[linear_index((0, 0, 1), space)] = 1.0
moved = apply_perm(p, space.d, ket)
print(f"{p} sends |001> to |{''.join(map(str, digits_of(int(np.argmax(moved)), space)))}>")

sn = enumerate_sn(space.N)
ops = {q: perm_operator(q, space) for q in sn}
hom = max(np.abs(ops[compose(a, b)] - ops[a] @ ops[b]).max() for a in sn for b in sn)
adj = max(np.abs(ops[inverse(a)] - ops[a].T.conj()).max() for a in sn)
print(f"|S_3| = {len(sn)}, homomorphism residual {hom:.1e}, inverse = adjoint residual {adj:.1e}")
