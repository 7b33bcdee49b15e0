"""Fermionic and bosonic symmetrizers and their ranks."""

import math

import numpy as np

from idclusters import SpaceSpec, symmetrizer

print(" d  N   fermion rank  C(d,N)   boson rank  C(d+N-1,N)")
for d, N in [(2, 2), (3, 2), (3, 3), (4, 2), (2, 4)]:
    ranks = []
    for stats in ("fermion", "boson"):
        S = symmetrizer(SpaceSpec(d, N, stats))
        # S is an orthogonal projector, so its rank is its trace
        assert np.allclose(S, S @ S) and np.allclose(S, S.conj().T)
        ranks.append(int(round(np.trace(S).real)))
    print(f"{d:2d} {N:2d} {ranks[0]:12d} {math.comb(d, N):8d} {ranks[1]:12d} {math.comb(d + N - 1, N):11d}")
