"""The coupling and decoupling maps between H^Id and H^D are unitary."""

import numpy as np

from idclusters import ClusterModel, ClusterSpec, SpaceSpec, build_isomorphisms, verify_isomorphisms
from idclusters.sampling import random_unitary

rng = np.random.default_rng(3)
# tilted projectors: the cluster blocks are not aligned with the basis
W = random_unitary(3, rng)
E = W @ np.diag([1, 0, 0]) @ W.conj().T
F = W @ np.diag([0, 1, 1]) @ W.conj().T
model = ClusterModel(ClusterSpec((2, 1), (E, F)), SpaceSpec(3, 3, "boson"))

iso = build_isomorphisms(model)
print(f"coordinate map U is {iso.U.shape[0]}x{iso.U.shape[1]}")
report = verify_isomorphisms(model, rng, n_pairs=20)
for key, value in report.residuals.items():
    print(f"  {key:<22} {value:.1e}")
print("passed" if report.passed else "FAILED")
