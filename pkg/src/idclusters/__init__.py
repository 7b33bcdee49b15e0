"""Identical particles treated as distinct clusters.

Build the permutation representation on ``(C^d)^N``, the (anti)symmetrizer,
the symmetrized distinguishing projector ``Q_sym``, the identical-particle
subspace ``H^Id`` and the distinct-cluster space ``H^D``; move states,
observables, evolutions and ideal measurements between the two through the
unitary coupling maps; and check every identity numerically.
"""

from .cluster_model import ClusterModel, DimsReport, build_Q, build_Q_sym, dims_report
from .errors import *  # noqa: F401,F403
from .measurement import (
    luders_nonselective,
    luders_reduced,
    luders_selective,
    measurement_diagram,
    observable_possesses,
    possession_defect,
    possesses_property,
    spectral_decompose,
    transport_measurement,
)
from .permutations import ClusterSpec, Perm, coset_representatives, enumerate_sn, parity
from .report import CheckRecord, Report
from .scenarios import Scenario, load_scenario, run_scenario
from .suite import SweepConfig, run_verification_suite
from .symmetrizers import apply_perm, perm_operator, symmetrizer
from .tensor_space import SpaceSpec, Statistics, SubspaceBasis, orthonormal_range
from .transport import (
    build_isomorphisms,
    expectation_check,
    transfer_evolution,
    transport_observable_d_to_id,
    transport_observable_id_to_d,
    transport_state,
    verify_isomorphisms,
)

__version__ = "0.1.0"
