"""Permutations of N particle labels, the cluster subgroup and its cosets.

Permutations are stored 0-based (``image[n] = p(n)``); documentation talks
about labels 1..N.  Composition follows ``(p * q)(n) = p(q(n))``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import cached_property, lru_cache

import numpy as np

from .errors import (
    BadClusterCount,
    DimensionMismatch,
    GroupTooLarge,
    NotAProjector,
    NotOrthogonal,
    SizesMismatch,
)
from .tensor_space import DEFAULT_TOL, Statistics, is_projector, rel_residual

DEFAULT_MAX_N = 8


@dataclass(frozen=True, order=True)
class Perm:
    """Bijection of {0, ..., N-1}; ordering is lexicographic by image."""

    image: tuple[int, ...]

    def __post_init__(self):
        image = tuple(int(k) for k in self.image)
        if sorted(image) != list(range(len(image))):
            raise ValueError(f"{image} is not a permutation of 0..{len(image) - 1}")
        object.__setattr__(self, "image", image)

    @classmethod
    def identity(cls, N: int) -> "Perm":
        return cls(tuple(range(N)))

    @classmethod
    def from_one_based(cls, image) -> "Perm":
        return cls(tuple(int(k) - 1 for k in image))

    @classmethod
    def transposition(cls, N: int, i: int, j: int) -> "Perm":
        """Swap of the 0-based labels ``i`` and ``j``."""
        image = list(range(N))
        image[i], image[j] = image[j], image[i]
        return cls(tuple(image))

    @classmethod
    def from_cycles(cls, N: int, *cycles) -> "Perm":
        image = list(range(N))
        for cyc in cycles:
            for a, b in zip(cyc, cyc[1:] + cyc[:1]):
                image[a] = b
        return cls(tuple(image))

    @property
    def N(self) -> int:
        return len(self.image)

    def __call__(self, n: int) -> int:
        return self.image[n]

    def __mul__(self, other: "Perm") -> "Perm":
        return compose(self, other)

    def is_identity(self) -> bool:
        return self.image == tuple(range(self.N))

    def cycles(self) -> list[tuple[int, ...]]:
        seen = [False] * self.N
        out = []
        for start in range(self.N):
            if seen[start]:
                continue
            cyc = []
            n = start
            while not seen[n]:
                seen[n] = True
                cyc.append(n)
                n = self.image[n]
            out.append(tuple(cyc))
        return out

    def __repr__(self):
        return f"Perm({self.image})"

    def __str__(self):
        # one-based image, the way permutations of particle labels are written
        return "[" + " ".join(str(k + 1) for k in self.image) + "]"


def enumerate_sn(N: int, max_n: int = DEFAULT_MAX_N) -> list[Perm]:
    """All N! permutations in lexicographic order of their images."""
    if N < 1:
        raise ValueError("N must be positive")
    if N > max_n:
        raise GroupTooLarge(f"S_{N} has {math.factorial(N)} elements; guard is N <= {max_n}")
    return list(_sn(N))


@lru_cache(maxsize=None)
def _sn(N: int) -> tuple[Perm, ...]:
    return tuple(Perm(im) for im in itertools.permutations(range(N)))


def compose(p: Perm, q: Perm) -> Perm:
    """(p o q)(n) = p(q(n))."""
    if p.N != q.N:
        raise DimensionMismatch(f"cannot compose permutations of {p.N} and {q.N} labels")
    return Perm(tuple(p.image[k] for k in q.image))


def inverse(p: Perm) -> Perm:
    inv = [0] * p.N
    for n, k in enumerate(p.image):
        inv[k] = n
    return Perm(tuple(inv))


def parity(p: Perm) -> int:
    """+1 for even, -1 for odd permutations (from the cycle lengths)."""
    transpositions = sum(len(c) - 1 for c in p.cycles())
    return -1 if transpositions % 2 else 1


def sign_of(p: Perm, statistics) -> int:
    return 1 if Statistics(statistics) is Statistics.BOSON else parity(p)


@dataclass(frozen=True, eq=False)
class ClusterSpec:
    """Ordered particle clusters and their distinguishing single-particle projectors.

    ``sizes[j]`` particles carry the projector ``projectors[j]`` (a d x d
    matrix).  Particles are assigned to clusters in label order, so cluster
    ``j`` holds labels ``offsets[j] .. offsets[j] + sizes[j] - 1``.
    """

    sizes: tuple[int, ...]
    projectors: tuple[np.ndarray, ...]

    def __post_init__(self):
        sizes = tuple(int(n) for n in self.sizes)
        projectors = tuple(np.asarray(q, dtype=complex) for q in self.projectors)
        if len(sizes) != len(projectors):
            raise BadClusterCount(f"{len(sizes)} cluster sizes but {len(projectors)} projectors")
        if any(n < 1 for n in sizes):
            raise SizesMismatch(f"cluster sizes must be positive, got {sizes}")
        object.__setattr__(self, "sizes", sizes)
        object.__setattr__(self, "projectors", projectors)

    @property
    def J(self) -> int:
        return len(self.sizes)

    @property
    def N(self) -> int:
        return sum(self.sizes)

    @property
    def d(self) -> int:
        return self.projectors[0].shape[0]

    @property
    def offsets(self) -> tuple[int, ...]:
        return tuple(int(m) for m in np.concatenate([[0], np.cumsum(self.sizes)[:-1]]))

    @cached_property
    def cluster_of(self) -> tuple[int, ...]:
        """Cluster index of every particle label."""
        return tuple(j for j, n in enumerate(self.sizes) for _ in range(n))

    @property
    def ranks(self) -> tuple[int, ...]:
        return tuple(int(round(np.trace(q).real)) for q in self.projectors)

    @property
    def subgroup_order(self) -> int:
        return math.prod(math.factorial(n) for n in self.sizes)

    @property
    def coset_count(self) -> int:
        return math.factorial(self.N) // self.subgroup_order

    def validate(self, N: int | None = None, d: int | None = None,
                 tol: float = DEFAULT_TOL, allow_single: bool = False) -> None:
        """Raise unless the sizes and projectors form a valid cluster split.

        ``allow_single`` admits the degenerate one-cluster split, which is
        useful in tests but not a genuine distinction of particles.
        """
        if N is not None and self.N != N:
            raise SizesMismatch(f"cluster sizes {self.sizes} sum to {self.N}, not N={N}")
        low = 1 if allow_single else 2
        if not low <= self.J <= self.N:
            raise BadClusterCount(f"need {low} <= J <= N, got J={self.J}, N={self.N}")
        for j, q in enumerate(self.projectors):
            if q.ndim != 2 or q.shape[0] != q.shape[1] or (d is not None and q.shape[0] != d):
                raise SizesMismatch(f"projector {j} has shape {q.shape}, expected {d} x {d}")
            if not is_projector(q, tol):
                raise NotAProjector(f"distinguishing projector {j} is not a Hermitian idempotent")
        for j in range(self.J):
            for k in range(j + 1, self.J):
                q1, q2 = self.projectors[j], self.projectors[k]
                if rel_residual(np.zeros_like(q1), q1 @ q2) > tol:
                    raise NotOrthogonal(f"projectors {j} and {k} are not orthogonal")

    def label(self) -> str:
        sizes = ",".join(map(str, self.sizes))
        ranks = ",".join(map(str, self.ranks))
        return f"sizes({sizes})-ranks({ranks})"


def cluster_subgroup(clusters: ClusterSpec) -> list[Perm]:
    """Permutations mapping every cluster's label block onto itself."""
    cls = clusters.cluster_of
    return [p for p in enumerate_sn(clusters.N)
            if all(cls[p.image[n]] == cls[n] for n in range(clusters.N))]


def coset_representatives(clusters: ClusterSpec) -> list[Perm]:
    """Lexicographically smallest member of every left coset p * G_D.

    The identity comes first.  Scanning S_N in lexicographic order, the first
    element not yet covered is automatically the smallest of its coset.
    """
    sub = cluster_subgroup(clusters)
    covered = set()
    reps = []
    for p in enumerate_sn(clusters.N):
        if p in covered:
            continue
        reps.append(p)
        covered.update(compose(p, g) for g in sub)
    return reps


def is_subgroup(perms) -> bool:
    group = set(perms)
    if not group:
        return False
    return all(compose(p, q) in group for p in group for q in group) and all(
        inverse(p) in group for p in group
    )
