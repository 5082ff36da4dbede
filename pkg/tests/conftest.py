"""Shared fixtures for the CausalLab test suite."""

import numpy as np
import pytest
from hypothesis import strategies as st

from models.algebra import NetAssignment
from models.causet import Region, RegionKind
from services.causet_service import CausetService
from services.continuum_service import ContinuumService
from services.duality_service import DualityService
from services.surface_service import SurfaceService

DIAMOND_EDGES = [(0, 1), (0, 2), (1, 3), (2, 3)]


@pytest.fixture
def continuum():
    return ContinuumService()


@pytest.fixture
def surfaces(continuum):
    return SurfaceService(continuum=continuum)


@pytest.fixture
def causets(continuum):
    return CausetService(continuum)


@pytest.fixture
def duality(causets):
    return DualityService(causets)


@pytest.fixture
def diamond(causets):
    """a < b, a < c, b < d, c < d as points 0..3."""
    return causets.from_relations(4, DIAMOND_EDGES)


@pytest.fixture
def chain(causets):
    return causets.from_relations(3, [(0, 1), (1, 2)])


@pytest.fixture
def antichain(causets):
    def build(n):
        return causets.from_relations(n, [])
    return build


def singleton_net(c):
    return NetAssignment(c, [Region({i}, RegionKind.DIAMOND) for i in range(c.n)])


@st.composite
def random_dags(draw, max_n=9):
    """Raw relations with edges only from lower to higher ids, so always acyclic."""
    n = draw(st.integers(min_value=1, max_value=max_n))
    seed = draw(st.integers(min_value=0, max_value=2**31 - 1))
    density = draw(st.floats(min_value=0.0, max_value=0.6))
    rng = np.random.default_rng(seed)
    raw = np.triu(rng.random((n, n)) < density, k=1)
    return raw
