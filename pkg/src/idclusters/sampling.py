"""Random operators and states that satisfy the admissibility constraints by construction.

The admissible sets have measure zero among all Hermitian matrices, so
nothing here uses rejection sampling.  A random Hermitian matrix is averaged
over the relevant permutation group and then block-compressed with the
relevant projector F: ``F H F + (1 - F) H (1 - F)``.
"""

from __future__ import annotations

import hashlib

import numpy as np

from .cluster_model import ClusterModel


def subseed(seed: int, name: str) -> int:
    """Deterministic 64-bit seed for the check called ``name``."""
    digest = hashlib.sha256(f"{int(seed)}:{name}".encode()).digest()
    return int.from_bytes(digest[:8], "little")


def rng_for(seed: int, name: str) -> np.random.Generator:
    return np.random.default_rng(subseed(seed, name))


def random_hermitian(dim: int, rng) -> np.ndarray:
    X = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    return (X + X.conj().T) / 2


def random_unitary(dim: int, rng) -> np.ndarray:
    X = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    Qm, R = np.linalg.qr(X)
    return Qm * (np.diag(R) / np.abs(np.diag(R)))


def random_density(dim: int, rng, rank: int | None = None) -> np.ndarray:
    rank = dim if rank is None else rank
    X = rng.standard_normal((dim, rank)) + 1j * rng.standard_normal((dim, rank))
    rho = X @ X.conj().T
    return rho / np.trace(rho).real


def random_state_in(basis, rng, pure: bool = False) -> np.ndarray:
    """Random density operator supported on the span of ``basis``."""
    r = basis.rank
    return basis.embed(random_density(r, rng, rank=1 if pure else None))


def compress(H, F) -> np.ndarray:
    """F H F + (1 - F) H (1 - F): the part of H that commutes with F."""
    FH = F @ H
    return H - FH - H @ F + 2 * (FH @ F)


def random_admissible_identical(model: ClusterModel, rng) -> np.ndarray:
    """Random Hermitian, symmetric under S_N and commuting with Q_sym."""
    H = model.symmetrize_sn(random_hermitian(model.space.dim, rng))
    return compress(H, model.Q_sym)


def random_admissible_distinct(model: ClusterModel, rng) -> np.ndarray:
    """Random Hermitian commuting with the cluster permutations and with Q."""
    H = model.symmetrize_subgroup(random_hermitian(model.space.dim, rng))
    return compress(H, model.Q)


def coarse_grained(H, rng, groups: int = 4, min_gap: float = 1e-3) -> np.ndarray:
    """Replace H's spectrum by a few well-separated values.

    Eigenvalues are split at the ``groups - 1`` widest gaps (only gaps wider
    than ``min_gap`` are used).  Each group is mapped to a fresh value drawn
    from {0, 1, 2, ...} in random order, so zero usually appears.  Spectral
    projectors cut at wide gaps are well conditioned, and they keep every
    symmetry of H.
    """
    w, V = np.linalg.eigh(H)
    gaps = np.diff(w)
    order = np.argsort(gaps)[::-1]
    cuts = sorted(int(i) + 1 for i in order[: groups - 1] if gaps[i] > min_gap)
    labels = np.zeros(len(w), dtype=int)
    for c in cuts:
        labels[c:] += 1
    values = rng.permutation(len(cuts) + 1).astype(float)
    return (V * values[labels]) @ V.conj().T
