"""Lüders measurement done on either side of the coupling map."""

import numpy as np

from idclusters import (
    ClusterModel,
    ClusterSpec,
    SpaceSpec,
    luders_reduced,
    measurement_diagram,
    spectral_decompose,
)
from idclusters.sampling import random_state_in, random_unitary

rng = np.random.default_rng(11)
E = np.diag([1, 0, 0]).astype(complex)
F = np.diag([0, 1, 1]).astype(complex)
model = ClusterModel(ClusterSpec((1, 2), (E, F)), SpaceSpec(3, 3, "boson"))

# observable with spectrum {1, 2, 3} in a random frame of H^Id
V = random_unitary(model.basis_Id.rank, rng)
A = model.basis_Id.embed(V @ np.diag([1.0, 2.0, 3.0]) @ V.conj().T)
rho = random_state_in(model.basis_Id, rng)

after = luders_reduced(rho, A, model)
print(f"nonselective update keeps the trace: {np.trace(after).real:.12f}")

non = measurement_diagram(rho, A, model)
# pick the most likely outcome for the selective update
probs = [np.trace(E @ rho).real for E in spectral_decompose(A).projectors]
k = int(np.argmax(probs))
sel = measurement_diagram(rho, A, model, outcome=k)
print(f"diagram residuals: nonselective {non.residual:.1e}, selective {sel.residual:.1e}")
print(f"outcome {k} probability {sel.probability_Id:.6f} (identical) {sel.probability_D:.6f} (distinct)")
