"""Clusters of identical fermions and the two spaces they define.

Three fermions with d=4: a pair confined to span{|0>, |1>} and a single
particle in span{|2>, |3>}.  Q asks particles 1,2 to sit in the first block
and particle 3 in the second; Q_sym forgets which particles were chosen.
"""

import numpy as np

from idclusters import ClusterModel, ClusterSpec, SpaceSpec

E = np.diag([1, 1, 0, 0]).astype(complex)
F = np.diag([0, 0, 1, 1]).astype(complex)
model = ClusterModel(ClusterSpec((2, 1), (E, F)), SpaceSpec(4, 3, "fermion"))

print(f"cluster subgroup order {model.subgroup_order}, coset count {model.coset_count}")
print(f"distinct conjugates of Q: {len(model.Q_terms)}")
overlap = max(np.abs(a @ b).max() for i, a in enumerate(model.Q_terms)
              for b in model.Q_terms[i + 1:])
print(f"largest product of two distinct terms: {overlap:.1e}")

dims = model.dims
print(f"dim H^D = {dims.dim_HD} (pair antisymmetric in 2 levels x single in 2 levels)")
print(f"dim H^Id = {dims.dim_HId}")
