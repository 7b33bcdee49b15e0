"""Possession of a property by states and observables."""

import numpy as np

from idclusters import observable_possesses, possession_defect, possesses_property
from idclusters.tensor_space import pure_state

F = np.diag([1, 1, 0]).astype(complex)

inside = pure_state([1, 1j, 0])
mixed = pure_state([1, 0, 1])
print(f"state inside range: possesses {possesses_property(inside, F)}, defect {possession_defect(inside, F):.3f}")
print(f"half-in superposition: possesses {possesses_property(mixed, F)}, defect {possession_defect(mixed, F):.3f}")

A = np.array([[2, 1, 0], [1, 2, 0], [0, 0, 0]], dtype=complex)
result = observable_possesses(A, F)
print(f"observable possesses F: {result.possesses}")
for check in result.eigen:
    kind = "null projector" if check.null else "eigenprojector"
    print(f"  a = {check.eigenvalue:+.1f} {kind:<15} residual {check.residual:.1e}")
