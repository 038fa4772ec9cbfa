# tests/conftest.py

import pytest

from persuade_net.benefit.effort import GameParams
from persuade_net.benefit.families import ExponentialPair, PowerSaturatingPair
from persuade_net.config import get_settings
from persuade_net.network.graph import Graph
from persuade_net.network.io import generate


@pytest.fixture(autouse=True)
def fresh_settings(monkeypatch):
    """Each test sees settings built from its own environment."""
    monkeypatch.setenv("PERSUADE_NET_THREADS", "2")
    get_settings.cache_clear()
    yield
    get_settings.cache_clear()


# --- Benefit presets ---

@pytest.fixture
def example1() -> GameParams:
    """c < L: e* is interior for every belief."""
    return GameParams(ExponentialPair(H=0.9, L=0.5), cost=0.3, prior=0.5)


@pytest.fixture
def example2() -> GameParams:
    """c > L: e* is clamped at zero below belief 1/7."""
    return GameParams(ExponentialPair(H=0.9, L=0.2), cost=0.3, prior=0.5)


@pytest.fixture
def power_params() -> GameParams:
    return GameParams(PowerSaturatingPair(a_h=0.9, a_l=0.5, p=1.5), cost=0.2, prior=0.4)


# --- Graphs ---

@pytest.fixture
def p3() -> Graph:
    return generate("path", 3)


@pytest.fixture
def c4() -> Graph:
    return generate("cycle", 4)


@pytest.fixture
def single() -> Graph:
    return Graph(n=1)


@pytest.fixture
def bull() -> Graph:
    """Triangle 0-1-2 with a pendant on 1 and a pendant on 2."""
    return Graph.from_edges(5, [(0, 1), (0, 2), (1, 2), (1, 3), (2, 4)])


@pytest.fixture
def triangle_with_tail() -> Graph:
    """Triangle 0-1-2 plus node 3 hanging off node 0."""
    return Graph.from_edges(4, [(0, 1), (0, 2), (1, 2), (0, 3)])
