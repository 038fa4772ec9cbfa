# tests/test_graph.py

import networkx as nx
import numpy as np
import pytest

from persuade_net.exceptions import CapExceeded, InvalidGraph
from persuade_net.network.graph import (
    Graph,
    NodeWeights,
    degree_plus_one_weights,
    independence_number,
    maximal_independent_sets,
    network_constant_m,
    twin_reduce,
    unit_boundary_solve,
    weighted_max_independent_set,
)
from persuade_net.network.io import generate, load_edge_list, parse_edge_list


# --- Graph construction ---

def test_from_edges_normalises_orientation():
    g = Graph.from_edges(3, [(1, 0), (2, 1)])
    assert g.edges == frozenset({(0, 1), (1, 2)})


@pytest.mark.parametrize("edges", [[(0, 1), (1, 0)], [(0, 0)], [(0, 3)]])
def test_invalid_edges_are_rejected(edges):
    with pytest.raises(InvalidGraph):
        Graph.from_edges(3, edges)


def test_empty_graph_rejected():
    with pytest.raises(InvalidGraph):
        Graph(n=0)


def test_neighbourhoods_and_degrees(p3):
    assert p3.neighbors(1) == {0, 2}
    assert p3.closed_neighborhood(0) == {0, 1}
    assert p3.degrees() == [1, 2, 1]


def test_networkx_round_trip():
    g = Graph.from_networkx(nx.petersen_graph())
    assert g.n == 10 and len(g.edges) == 15
    assert nx.is_isomorphic(g.to_networkx(), nx.petersen_graph())


def test_independence_checks(p3):
    assert p3.is_maximal_independent({0, 2})
    assert p3.is_independent({0}) and not p3.is_maximal_independent({0})
    assert not p3.is_independent({0, 1})


# --- Independent sets ---

def test_maximal_independent_sets_of_path(p3):
    assert maximal_independent_sets(p3) == [frozenset({0, 2}), frozenset({1})]


@pytest.mark.parametrize(
    "g, alpha",
    [
        (generate("cycle", 5), 2),
        (generate("complete", 4), 1),
        (Graph(n=3), 3),
        (Graph(n=1), 1),
        (generate("star", 5), 4),
    ],
)
def test_independence_number(g, alpha):
    assert independence_number(g) == alpha


def test_maximal_independent_sets_match_brute_force():
    g = generate("erdos_renyi", 9, p=0.4, seed=3)
    brute = set()
    for mask in range(1 << g.n):
        s = {k for k in range(g.n) if mask >> k & 1}
        if g.is_maximal_independent(s):
            brute.add(frozenset(s))
    assert set(maximal_independent_sets(g)) == brute


def test_cap_is_enforced():
    with pytest.raises(CapExceeded) as err:
        maximal_independent_sets(generate("path", 21))
    assert "20" in str(err.value)


def test_weighted_maximum_independent_set(p3):
    best, weight = weighted_max_independent_set(p3, degree_plus_one_weights(p3))
    assert best == {0, 2}
    assert weight == pytest.approx(4.0)


def test_weighted_ties_go_to_lexicographically_smallest(c4):
    best, weight = weighted_max_independent_set(c4, NodeWeights((1.0, 1.0, 1.0, 1.0)))
    assert best == {0, 2}
    assert weight == 2.0


def test_negative_weights_rejected():
    with pytest.raises(ValueError):
        NodeWeights((1.0, -0.5))


# --- Twin reduction and m(G) ---

def test_twin_reduction_of_cliques():
    assert twin_reduce(generate("complete", 3)).n == 1
    assert twin_reduce(generate("complete", 2)).n == 1
    assert twin_reduce(generate("path", 4)).n == 4


def test_twin_lift_splits_mass_equally():
    np.testing.assert_allclose(unit_boundary_solve(generate("complete", 2)), [0.5, 0.5])


@pytest.mark.parametrize(
    "g, m",
    [
        (generate("cycle", 4), 4.0 / 3.0),
        (generate("path", 3), 1.0),
        (generate("complete", 5), 1.0),
        (Graph(n=1), 1.0),
        (Graph(n=3), 3.0),
        # (A+I) singular but consistent
        (generate("path", 5), 2.0),
        (generate("cycle", 6), 2.0),
    ],
)
def test_network_constant(g, m):
    assert network_constant_m(g) == pytest.approx(m, rel=1e-12)


def test_boundary_solve_satisfies_every_row(bull):
    x = unit_boundary_solve(bull)
    a = nx.to_numpy_array(bull.to_networkx(), nodelist=range(bull.n))
    np.testing.assert_allclose((a + np.eye(bull.n)) @ x, np.ones(bull.n), atol=1e-12)
    np.testing.assert_allclose(x, [-1.0, 1.0, 1.0, 0.0, 0.0], atol=1e-12)
    assert network_constant_m(bull) == pytest.approx(1.0)


def test_singular_boundary_solve_prefers_a_nonnegative_solution():
    g = generate("erdos_renyi", 6, p=0.45, seed=45)
    x = unit_boundary_solve(g)
    a = nx.to_numpy_array(g.to_networkx(), nodelist=range(g.n))
    np.testing.assert_allclose((a + np.eye(g.n)) @ x, np.ones(g.n), atol=1e-9)
    assert np.all(x >= -1e-12)
    assert network_constant_m(g) == pytest.approx(1.0)


# --- Edge lists and generators ---

def test_parse_edge_list_with_comments_and_one_based():
    g = parse_edge_list("# header\n1 2\n\n2 3  # tail\n", one_based=True)
    assert g.n == 3 and g.edges == frozenset({(0, 1), (1, 2)})


def test_parse_edge_list_with_isolated_nodes():
    assert parse_edge_list("0 1\n", n=4).n == 4


@pytest.mark.parametrize("text", ["0 1 2\n", "a b\n", "0 0\n", ""])
def test_parse_edge_list_errors(text):
    with pytest.raises(InvalidGraph):
        parse_edge_list(text)


def test_load_edge_list(tmp_path):
    path = tmp_path / "g.edges"
    path.write_text("0 1\n1 2\n", encoding="utf-8")
    assert load_edge_list(path).n == 3
    with pytest.raises(FileNotFoundError):
        load_edge_list(tmp_path / "missing.edges")


def test_generators():
    assert generate("star", 4).degrees() == [3, 1, 1, 1]
    assert len(generate("complete", 5).edges) == 10
    assert generate("erdos_renyi", 8, p=0.5, seed=11) == generate("erdos_renyi", 8, p=0.5, seed=11)
    with pytest.raises(InvalidGraph):
        generate("cycle", 2)
    with pytest.raises(InvalidGraph):
        generate("lattice", 4)
