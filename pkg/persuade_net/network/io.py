# persuade_net/network/io.py

import logging
from pathlib import Path
from typing import List, Optional, Tuple

import networkx as nx

from persuade_net.exceptions import InvalidGraph
from persuade_net.network.graph import Graph

logger = logging.getLogger(__name__)

GENERATORS = ("path", "cycle", "star", "complete", "erdos_renyi")


def parse_edge_list(text: str, n: Optional[int] = None, one_based: bool = False) -> Graph:
    """
    Parses `u v` lines into a Graph.

    `#` starts a comment, blank lines are skipped. Without an explicit `n` the
    node count is one more than the largest index seen, so isolated trailing
    nodes need `n` to be given.
    """
    pairs: List[Tuple[int, int]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise InvalidGraph(f"Line {lineno}: expected 'u v', got {raw!r}.")
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise InvalidGraph(f"Line {lineno}: node ids must be integers, got {raw!r}.")
        if one_based:
            u, v = u - 1, v - 1
        if u < 0 or v < 0:
            raise InvalidGraph(f"Line {lineno}: negative node id after base conversion.")
        pairs.append((u, v))

    inferred = 1 + max((max(p) for p in pairs), default=-1)
    count = inferred if n is None else n
    if count < 1:
        raise InvalidGraph("Edge list describes an empty graph; give n >= 1.")
    return Graph.from_edges(count, pairs)


def load_edge_list(path: Path, n: Optional[int] = None, one_based: bool = False) -> Graph:
    """Reads an edge-list file from disk."""
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"Edge list not found at: {path}")
    graph = parse_edge_list(path.read_text(encoding="utf-8"), n=n, one_based=one_based)
    logger.info(f"Loaded graph from {path}: n={graph.n}, |E|={len(graph.edges)}.")
    return graph


def generate(name: str, n: int, p: float = 0.5, seed: int = 0) -> Graph:
    """
    Named generators. `star` has `n` nodes in total with node 0 as centre;
    `erdos_renyi` draws G(n, p) with the given seed.
    """
    if n < 1:
        raise InvalidGraph(f"Generator '{name}' needs n >= 1, got {n}.")
    if name == "path":
        graph = nx.path_graph(n)
    elif name == "cycle":
        if n < 3:
            raise InvalidGraph(f"A cycle needs at least 3 nodes, got {n}.")
        graph = nx.cycle_graph(n)
    elif name == "star":
        graph = nx.star_graph(n - 1)
    elif name == "complete":
        graph = nx.complete_graph(n)
    elif name == "erdos_renyi":
        if not 0.0 <= p <= 1.0:
            raise InvalidGraph(f"Edge probability must lie in [0, 1], got {p}.")
        graph = nx.gnp_random_graph(n, p, seed=seed)
    else:
        raise InvalidGraph(f"Unknown generator '{name}'; expected one of {GENERATORS}.")
    logger.debug(f"Generated {name} graph with n={n}.")
    return Graph.from_networkx(graph)
