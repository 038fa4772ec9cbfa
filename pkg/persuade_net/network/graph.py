# persuade_net/network/graph.py

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import FrozenSet, Iterable, List, Optional, Sequence, Tuple

import networkx as nx
import numpy as np
from scipy.optimize import nnls

from persuade_net.config import get_settings
from persuade_net.exceptions import CapExceeded, InvalidGraph, SingularAfterReduction

logger = logging.getLogger(__name__)

Edge = Tuple[int, int]
NodeSet = FrozenSet[int]


@dataclass(frozen=True)
class Graph:
    """
    Undirected simple graph on nodes 0..n-1.

    Edges are stored normalised as (u, v) with u < v. Instances are immutable,
    so every operation in this package can share them across worker threads.
    """
    n: int
    edges: FrozenSet[Edge] = field(default_factory=frozenset)

    def __post_init__(self) -> None:
        if self.n < 1:
            raise InvalidGraph(f"Graph needs at least one node, got n = {self.n}.")
        for u, v in self.edges:
            if u == v:
                raise InvalidGraph(f"Self-loop on node {u} is not allowed.")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise InvalidGraph(f"Edge ({u}, {v}) has an endpoint outside [0, {self.n}).")
            if u > v:
                raise InvalidGraph(f"Edge ({u}, {v}) is not normalised; use Graph.from_edges.")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Sequence[int]]) -> "Graph":
        """Builds a graph from (u, v) pairs, rejecting duplicates in either orientation."""
        seen = set()
        for pair in edges:
            u, v = int(pair[0]), int(pair[1])
            key = (min(u, v), max(u, v))
            if key in seen:
                raise InvalidGraph(f"Duplicate edge {key}.")
            seen.add(key)
        return cls(n=n, edges=frozenset(seen))

    @classmethod
    def from_networkx(cls, graph: nx.Graph) -> "Graph":
        """Converts a networkx graph whose nodes are 0..n-1."""
        nodes = sorted(graph.nodes())
        if nodes != list(range(len(nodes))):
            graph = nx.convert_node_labels_to_integers(graph, ordering="sorted")
        return cls.from_edges(graph.number_of_nodes(), graph.edges())

    def to_networkx(self) -> nx.Graph:
        graph = nx.Graph()
        graph.add_nodes_from(range(self.n))
        graph.add_edges_from(self.edges)
        return graph

    def neighbors(self, k: int) -> FrozenSet[int]:
        return frozenset(v if u == k else u for u, v in self.edges if k in (u, v))

    def closed_neighborhood(self, k: int) -> FrozenSet[int]:
        return self.neighbors(k) | {k}

    def degrees(self) -> List[int]:
        deg = [0] * self.n
        for u, v in self.edges:
            deg[u] += 1
            deg[v] += 1
        return deg

    def is_independent(self, nodes: Iterable[int]) -> bool:
        s = set(nodes)
        return not any(u in s and v in s for u, v in self.edges)

    def is_maximal_independent(self, nodes: Iterable[int]) -> bool:
        s = set(nodes)
        if not self.is_independent(s):
            return False
        return all(k in s or self.neighbors(k) & s for k in range(self.n))


@dataclass(frozen=True)
class NodeWeights:
    """Nonnegative per-node weights, e.g. the (A+I)·1 vector of the benefit bounds."""
    w: Tuple[float, ...]

    def __post_init__(self) -> None:
        if any(x < 0 for x in self.w):
            raise ValueError(f"Node weights must be nonnegative, got {self.w}.")

    def __len__(self) -> int:
        return len(self.w)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.w, dtype=float)


def adjacency_matrix(g: Graph) -> np.ndarray:
    """Symmetric 0/1 adjacency matrix with zero diagonal."""
    a = np.zeros((g.n, g.n), dtype=float)
    for u, v in g.edges:
        a[u, v] = 1.0
        a[v, u] = 1.0
    return a


def _check_cap(g: Graph, cap: Optional[int], what: str) -> None:
    limit = get_settings().MIS_CAP if cap is None else cap
    if g.n > limit:
        raise CapExceeded(what, g.n, limit)


def maximal_independent_sets(g: Graph, cap: Optional[int] = None) -> List[NodeSet]:
    """
    All maximal independent sets of g, sorted lexicographically by node tuple.

    Maximal independent sets of g are exactly the maximal cliques of its
    complement, which networkx enumerates with pivoted Bron-Kerbosch.
    """
    _check_cap(g, cap, "Maximal independent set enumeration")
    complement = nx.complement(g.to_networkx())
    found = sorted(tuple(sorted(c)) for c in nx.find_cliques(complement))
    logger.debug(f"Found {len(found)} maximal independent sets on n={g.n}.")
    return [frozenset(c) for c in found]


def independence_number(g: Graph, cap: Optional[int] = None) -> int:
    """alpha(G): size of the largest independent set."""
    return max(len(s) for s in maximal_independent_sets(g, cap))


def weighted_max_independent_set(
    g: Graph, w: NodeWeights, cap: Optional[int] = None
) -> Tuple[NodeSet, float]:
    """
    Maximum-weight independent set and its weight.

    With nonnegative weights some maximal independent set is always optimal, so
    the search runs over those; ties go to the lexicographically smallest set.
    """
    if len(w) != g.n:
        raise ValueError(f"Expected {g.n} node weights, got {len(w)}.")
    weights = w.as_array()
    best: Optional[NodeSet] = None
    best_weight = -np.inf
    for s in maximal_independent_sets(g, cap):
        total = float(sum(weights[k] for k in s))
        # sets arrive in lexicographic order, so strict improvement keeps the smallest tie
        if total > best_weight:
            best, best_weight = s, total
    assert best is not None
    return best, best_weight


def degree_plus_one_weights(g: Graph) -> NodeWeights:
    """The (A_G + I_n)·1 weight vector, w_k = deg(k) + 1."""
    return NodeWeights(tuple(float(d + 1) for d in g.degrees()))


def _twin_reduction(g: Graph) -> Tuple[Graph, List[List[int]]]:
    """Twin reduction plus, for every surviving node, the original nodes merged into it."""
    classes = [[k] for k in range(g.n)]
    current = g
    while True:
        pair = _first_adjacent_twins(current)
        if pair is None:
            return current, classes
        u, v = pair
        logger.debug(f"Merging closed-neighbourhood twins {classes[u]} and {classes[v]}.")
        current = _drop_node(current, v)
        classes[u] = sorted(classes[u] + classes[v])
        del classes[v]


def _first_adjacent_twins(g: Graph) -> Optional[Edge]:
    closed = [g.closed_neighborhood(k) for k in range(g.n)]
    for u, v in sorted(g.edges):
        if closed[u] == closed[v]:
            return u, v
    return None


def _drop_node(g: Graph, v: int) -> Graph:
    def relabel(k: int) -> int:
        return k - 1 if k > v else k

    edges = [(relabel(a), relabel(b)) for a, b in g.edges if v not in (a, b)]
    return Graph.from_edges(g.n - 1, edges)


def twin_reduce(g: Graph) -> Graph:
    """
    Repeatedly removes the higher-index node of the lowest adjacent pair with
    identical closed neighbourhoods, until no such pair remains.
    """
    reduced, _ = _twin_reduction(g)
    return reduced


def _singular_solve(m: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    tol = 1e-9 * np.sqrt(rhs.size)
    z, residual = nnls(m, rhs)
    if residual <= tol:
        logger.warning(
            f"(A+I) is singular after twin reduction (n={rhs.size}); using a nonnegative solution."
        )
        return z
    z, *_ = np.linalg.lstsq(m, rhs, rcond=None)
    residual = float(np.linalg.norm(m @ z - rhs))
    if residual > tol:
        raise SingularAfterReduction(
            f"(A+I)x = 1 is inconsistent after twin reduction (residual {residual:.3e})."
        )
    logger.warning(
        f"(A+I) is singular after twin reduction (n={rhs.size}) with no nonnegative solution; "
        f"using the minimum-norm solution."
    )
    return z


def unit_boundary_solve(g: Graph) -> np.ndarray:
    """
    A solution of (A+I)x = 1 on the original node set.

    The system is solved on the twin-reduced graph and lifted back by splitting
    each surviving node's value equally over its twin class; twins share a row
    of A+I, so every original row stays satisfied. If the reduced matrix is
    still singular but the system is consistent, a nonnegative solution is
    preferred (found by NNLS) and the minimum-norm one is used only when none
    exists. 1 is orthogonal to the kernel of the symmetric A+I, so the
    aggregate is the same for every solution.
    """
    reduced, classes = _twin_reduction(g)
    m = adjacency_matrix(reduced) + np.eye(reduced.n)
    rhs = np.ones(reduced.n)
    if np.linalg.matrix_rank(m) == reduced.n:
        z = np.linalg.solve(m, rhs)
    else:
        z = _singular_solve(m, rhs)
    x = np.zeros(g.n)
    for value, members in zip(z, classes):
        x[members] = value / len(members)
    return x


def network_constant_m(g: Graph) -> float:
    """m(G): the sum of all entries of (A+I)^{-1}, i.e. 1'x for (A+I)x = 1."""
    return float(unit_boundary_solve(g).sum())
