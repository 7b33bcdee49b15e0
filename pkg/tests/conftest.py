import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from idclusters import ClusterModel, ClusterSpec, SpaceSpec

settings.register_profile(
    "default", deadline=None, max_examples=25,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")


def block_clusters(d, sizes, ranks):
    """Cluster spec with projectors onto consecutive basis blocks."""
    projs = []
    start = 0
    for q in ranks:
        diag = np.zeros(d)
        diag[start:start + q] = 1
        projs.append(np.diag(diag).astype(complex))
        start += q
    return ClusterSpec(tuple(sizes), tuple(projs))


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture(scope="session")
def fermion_21():
    """Fermions, d=4, clusters of sizes (2, 1) on ranks (2, 2)."""
    space = SpaceSpec(4, 3, "fermion")
    return ClusterModel(block_clusters(4, (2, 1), (2, 2)), space)


@pytest.fixture(scope="session")
def boson_21():
    space = SpaceSpec(3, 3, "boson")
    return ClusterModel(block_clusters(3, (2, 1), (1, 2)), space)


@pytest.fixture(scope="session")
def pair_model():
    space = SpaceSpec(2, 2, "fermion")
    return ClusterModel(block_clusters(2, (1, 1), (1, 1)), space)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
