"""Observables, states and evolutions carried between the two descriptions."""

import numpy as np

from idclusters import (
    ClusterModel,
    ClusterSpec,
    SpaceSpec,
    expectation_check,
    transfer_evolution,
    transport_observable_id_to_d,
)
from idclusters.sampling import random_admissible_identical, random_state_in
from idclusters.transport import exp_i_hermitian

rng = np.random.default_rng(7)
E = np.diag([1, 1, 0, 0]).astype(complex)
F = np.diag([0, 0, 1, 1]).astype(complex)
model = ClusterModel(ClusterSpec((2, 1), (E, F)), SpaceSpec(4, 3, "fermion"))

# an admissible identical-particle observable and a state possessing Q_sym
B = random_admissible_identical(model, rng)
rho = random_state_in(model.basis_Id, rng)

B_D = transport_observable_id_to_d(B, model)
print(f"decoupled observable commutes with Q: {np.abs(B_D @ model.Q - model.Q @ B_D).max():.1e}")

record = expectation_check(rho, B, model)
print(f"<B> identical {record.val_Id:+.6f}, distinct {record.val_D:+.6f}")

U = exp_i_hermitian(B, 0.7)
print(f"evolution diagram residual {transfer_evolution(U, rho, model).residual:.1e}")
