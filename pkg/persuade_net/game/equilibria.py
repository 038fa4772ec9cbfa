# persuade_net/game/equilibria.py

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np

from persuade_net.config import get_settings
from persuade_net.exceptions import CapExceeded, NotAnEquilibrium, NotMaximalIndependent
from persuade_net.network.graph import Graph, adjacency_matrix, unit_boundary_solve
from persuade_net.services.worker_pool import WorkerPool, chunked

logger = logging.getLogger(__name__)

DEDUP_DISTANCE = 1e-9
SUPPORTS_PER_TASK = 256


class EquilibriumClass(str, Enum):
    SPECIALIZED = "Specialized"
    DISTRIBUTED = "Distributed"
    HYBRID = "Hybrid"


@dataclass(frozen=True)
class EffortProfile:
    """Per-node efforts together with the unilateral effort they were computed against."""
    x: Tuple[float, ...]
    e_ref: float

    @classmethod
    def of(cls, x: Iterable[float], e_ref: float) -> "EffortProfile":
        return cls(tuple(float(v) for v in x), float(e_ref))

    def __post_init__(self) -> None:
        if any(v < 0 for v in self.x):
            raise ValueError("Effort profiles must be nonnegative.")

    @property
    def array(self) -> np.ndarray:
        return np.asarray(self.x, dtype=float)

    def neighborhood_effort(self, g: Graph) -> np.ndarray:
        """E_k(x) = x_k + sum of neighbours' efforts."""
        return neighborhood_effort(g, self.array)


@dataclass(frozen=True)
class NashCheck:
    ok: bool
    residuals: np.ndarray


@dataclass
class EquilibriumSet:
    profiles: List[EffortProfile]
    complete: bool
    parametric_note: Optional[str] = None
    skipped_supports: int = 0
    twin_supports: int = 0


@dataclass(frozen=True)
class DistributedSolve:
    """
    The raw solve of (A+I)x = e·1 and, when it is strictly positive, the
    distributed equilibrium it defines. `boundary` may hold negative entries.
    """
    boundary: np.ndarray
    profile: Optional[EffortProfile]

    @property
    def exists(self) -> bool:
        return self.profile is not None

    @property
    def boundary_aggregate(self) -> float:
        return float(self.boundary.sum())


def default_tolerance(e: float) -> float:
    return get_settings().CLASSIFY_TOL * max(1.0, e)


def neighborhood_effort(g: Graph, x: np.ndarray) -> np.ndarray:
    return (adjacency_matrix(g) + np.eye(g.n)) @ np.asarray(x, dtype=float)


def best_response(g: Graph, x: Sequence[float], k: int, e: float) -> float:
    """max(0, e - sum of k's neighbours' efforts)."""
    others = sum(float(x[j]) for j in g.neighbors(k))
    return max(0.0, e - others)


def is_nash(g: Graph, x: Sequence[float], e: float, tol: Optional[float] = None) -> NashCheck:
    """
    LCP check: x >= 0, (A+I)x >= e·1 and complementarity.

    The per-node residual is |min(x_k, E_k(x) - e)|, which is zero exactly when
    all three conditions hold at node k.
    """
    tol = default_tolerance(e) if tol is None else tol
    arr = np.asarray(x, dtype=float)
    residuals = np.abs(np.minimum(arr, neighborhood_effort(g, arr) - e))
    return NashCheck(ok=bool(np.all(residuals <= tol)), residuals=residuals)


def specialized_from_mis(g: Graph, s: Iterable[int], e: float) -> EffortProfile:
    """Effort e on every node of a maximal independent set, 0 elsewhere."""
    nodes = set(s)
    if not g.is_maximal_independent(nodes):
        raise NotMaximalIndependent(f"{sorted(nodes)} is not a maximal independent set.")
    return EffortProfile.of((e if k in nodes else 0.0 for k in range(g.n)), e)


def distributed_equilibrium(g: Graph, e: float) -> DistributedSolve:
    """Solves (A+I)x = e·1 after twin handling and keeps it when strictly positive."""
    x = e * unit_boundary_solve(g)
    if np.all(x > default_tolerance(e)):
        return DistributedSolve(boundary=x, profile=EffortProfile.of(x, e))
    logger.debug(f"No distributed equilibrium on n={g.n}: boundary solve {np.round(x, 6)}.")
    return DistributedSolve(boundary=x, profile=None)


def _has_twins(sub_adj: np.ndarray) -> bool:
    closed = sub_adj + np.eye(sub_adj.shape[0])
    size = closed.shape[0]
    for u in range(size):
        for v in range(u + 1, size):
            if sub_adj[u, v] and np.array_equal(closed[u], closed[v]):
                return True
    return False


@dataclass
class _ChunkResult:
    profiles: List[Tuple[float, ...]] = field(default_factory=list)
    skipped: int = 0
    twins: int = 0


def _solve_supports(
    masks: Sequence[int], adj: np.ndarray, e: float, tol: float
) -> _ChunkResult:
    n = adj.shape[0]
    closed = adj + np.eye(n)
    out = _ChunkResult()
    for mask in masks:
        support = [k for k in range(n) if mask >> k & 1]
        x = np.zeros(n)
        if support:
            sub = closed[np.ix_(support, support)]
            if np.linalg.matrix_rank(sub) < len(support):
                out.skipped += 1
                if _has_twins(adj[np.ix_(support, support)]):
                    out.twins += 1
                continue
            x_t = np.linalg.solve(sub, np.full(len(support), e))
            if np.any(x_t <= tol):
                continue
            x[support] = x_t
        outside = [k for k in range(n) if not mask >> k & 1]
        if outside and np.any(adj[outside] @ x < e - tol):
            continue
        out.profiles.append(tuple(float(v) for v in x))
    return out


def _dedup(profiles: List[Tuple[float, ...]]) -> List[Tuple[float, ...]]:
    kept: List[Tuple[float, ...]] = []
    for p in sorted(profiles):
        if kept and np.linalg.norm(np.subtract(p, kept[-1])) < DEDUP_DISTANCE:
            continue
        kept.append(p)
    return kept


def enumerate_equilibria(
    g: Graph, e: float, cap: Optional[int] = None, pool: Optional[WorkerPool] = None
) -> EquilibriumSet:
    """
    Every equilibrium with a nonsingular support system, by support enumeration.

    For each support T the system (A+I)[T,T] x_T = e·1 is solved; a solution is
    kept when it is strictly positive and every node outside T is covered by at
    least e from its neighbours. Singular supports are skipped and counted; when
    some of them contain adjacent twins the equilibrium set has continua, of
    which only the extreme points are listed.
    """
    limit = get_settings().EQUILIBRIA_CAP if cap is None else cap
    if g.n > limit:
        raise CapExceeded("Equilibrium enumeration", g.n, limit)
    pool = pool or WorkerPool()
    tol = default_tolerance(e)
    adj = adjacency_matrix(g)

    tasks = chunked(range(1 << g.n), SUPPORTS_PER_TASK)
    results = pool.map_ordered(lambda masks: _solve_supports(masks, adj, e, tol), tasks)

    merged: List[Tuple[float, ...]] = []
    skipped = twins = 0
    for r in results:
        merged.extend(r.profiles)
        skipped += r.skipped
        twins += r.twins
    profiles = [EffortProfile(p, float(e)) for p in _dedup(merged)]

    note = None
    if twins:
        note = (
            f"{twins} singular supports contain adjacent closed-neighbourhood twins; "
            f"the equilibria there form continua (effort can be traded between twins) "
            f"and only their extreme points are listed."
        )
    if skipped:
        logger.warning(f"Skipped {skipped} singular supports ({twins} with twins) on n={g.n}.")
    logger.info(f"Enumerated {len(profiles)} equilibria over {1 << g.n} supports on n={g.n}.")
    return EquilibriumSet(
        profiles=profiles, complete=True, parametric_note=note,
        skipped_supports=skipped, twin_supports=twins,
    )


def classify_equilibrium(g: Graph, x: Sequence[float], e: float) -> EquilibriumClass:
    """Specialized if every effort is 0 or e, Distributed if all are positive, else Hybrid."""
    if not is_nash(g, x, e).ok:
        raise NotAnEquilibrium("Profile fails the Nash check; it has no equilibrium class.")
    arr = np.asarray(x, dtype=float)
    level_tol = get_settings().CLASSIFY_TOL * e
    if np.all((np.abs(arr) <= level_tol) | (np.abs(arr - e) <= level_tol)):
        return EquilibriumClass.SPECIALIZED
    if np.all(arr > default_tolerance(e)):
        return EquilibriumClass.DISTRIBUTED
    return EquilibriumClass.HYBRID
