# persuade_net/game/aggregates.py

from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum
from typing import List, Optional, Sequence, Tuple

import numpy as np

from persuade_net.benefit.effort import sigma_b_at
from persuade_net.benefit.families import BenefitPair, mixed_benefit
from persuade_net.config import get_settings
from persuade_net.game.equilibria import (
    EffortProfile,
    EquilibriumSet,
    distributed_equilibrium,
    neighborhood_effort,
    specialized_from_mis,
)
from persuade_net.network.graph import (
    Graph,
    NodeWeights,
    degree_plus_one_weights,
    independence_number,
    weighted_max_independent_set,
)

logger = logging.getLogger(__name__)


class SigmaRegime(str, Enum):
    """The two tractable limits of sigma_b."""
    TO_ZERO = "sigma_to_zero"
    TO_ONE = "sigma_to_one"


@dataclass(frozen=True)
class BenefitBounds:
    lower8: float
    upper8: float
    lower9: float
    upper9: float
    sigma_b: float
    alpha_w: float

    def contains(self, value: float, tol: float = 1e-9) -> bool:
        """True when `value` lies inside the tighter (lower9, upper9) band."""
        slack = tol * max(1.0, abs(value))
        return self.lower9 - slack <= value <= self.upper9 + slack


@dataclass(frozen=True)
class NodeBound:
    node: int
    exposure: float
    value: float
    lower: float
    upper: float
    chord_lower: float
    tangent_upper: float

    @property
    def ok(self) -> bool:
        slack = 1e-9 * max(1.0, abs(self.value))
        return (
            self.lower - slack <= self.value <= self.upper + slack
            and self.chord_lower - slack <= self.value <= self.tangent_upper + slack
        )


@dataclass(frozen=True)
class EffortExtremes:
    """Largest and smallest aggregate effort over an equilibrium set, next to alpha(G)·e and m(G)·e."""
    max_effort: float
    min_effort: float
    alpha_e: float
    m_e: float
    boundary_feasible: bool


def aggregate_effort(x: Sequence[float]) -> float:
    return float(np.sum(np.asarray(x, dtype=float)))


def weighted_aggregate_effort(x: Sequence[float], w: NodeWeights) -> float:
    arr = np.asarray(x, dtype=float)
    if arr.size != len(w):
        raise ValueError(f"Profile has {arr.size} entries but there are {len(w)} weights.")
    return float(w.as_array() @ arr)


def aggregate_benefit(g: Graph, x: Sequence[float], bp: BenefitPair, mu: float) -> float:
    """B(x): the mixed benefit summed over every node's neighbourhood effort."""
    exposure = neighborhood_effort(g, np.asarray(x, dtype=float))
    return float(np.sum(mixed_benefit(bp, mu, exposure, 0)))


def _sigma(bp: BenefitPair, mu: float, e: float, n: int, cost: float) -> float:
    # a single node or a clamped e* leaves the exposure interval [e, n e] a single point
    if n < 2 or e <= 0:
        return 0.0
    return sigma_b_at(bp, mu, e, n, cost)


def benefit_bounds(
    g: Graph, e: float, bp: BenefitPair, mu: float, cost: float, cap: Optional[int] = None
) -> BenefitBounds:
    """
    Bounds on the largest aggregate benefit over the equilibria.

    Every equilibrium node sees an exposure in [e, n·e]. Concavity of the mixed
    benefit puts b~ between its chord over that interval and its tangent at e
    (slope c). Summing over nodes, with sum of exposures at most alpha_w·e for
    w = deg + 1, gives both pairs of bounds.
    """
    n = g.n
    _, alpha_w = weighted_max_independent_set(g, degree_plus_one_weights(g), cap)
    at_e = float(mixed_benefit(bp, mu, e, 0))
    at_ne = float(mixed_benefit(bp, mu, n * e, 0))
    sigma = _sigma(bp, mu, e, n, cost)
    excess = (alpha_w - n) * cost * e
    bounds = BenefitBounds(
        lower8=n * at_e,
        upper8=n * at_ne,
        lower9=n * at_e + sigma * excess,
        upper9=n * at_e + excess,
        sigma_b=sigma,
        alpha_w=alpha_w,
    )
    logger.debug(f"Benefit bounds on n={n}: {bounds}.")
    return bounds


def limit_max_benefit(
    g: Graph, e: float, bp: BenefitPair, mu: float, cost: float, regime: SigmaRegime,
    cap: Optional[int] = None,
) -> float:
    """Largest equilibrium aggregate benefit in the sigma_b -> 0 or -> 1 limit."""
    n = g.n
    base = n * float(mixed_benefit(bp, mu, e, 0))
    if SigmaRegime(regime) is SigmaRegime.TO_ZERO:
        return base
    _, alpha_w = weighted_max_independent_set(g, degree_plus_one_weights(g), cap)
    return base - cost * n * e + cost * alpha_w * e


def max_weighted_effort(
    g: Graph, e: float, w: Optional[NodeWeights] = None, cap: Optional[int] = None
) -> Tuple[float, EffortProfile]:
    """alpha_w(G)·e, attained by the specialized profile on a maximum-weight independent set."""
    w = w or degree_plus_one_weights(g)
    best, weight = weighted_max_independent_set(g, w, cap)
    return weight * e, specialized_from_mis(g, best, e)


def node_benefit_bounds(
    g: Graph, x: Sequence[float], e: float, bp: BenefitPair, mu: float, cost: float
) -> List[NodeBound]:
    """Per-node form of the bounds: b~(e) <= b~(E_k) <= b~(n e), and the chord/tangent sandwich."""
    n = g.n
    exposure = neighborhood_effort(g, np.asarray(x, dtype=float))
    at_e = float(mixed_benefit(bp, mu, e, 0))
    sigma = _sigma(bp, mu, e, n, cost)
    out = []
    for k, ek in enumerate(exposure):
        out.append(NodeBound(
            node=k,
            exposure=float(ek),
            value=float(mixed_benefit(bp, mu, float(ek), 0)),
            lower=at_e,
            upper=float(mixed_benefit(bp, mu, n * e, 0)),
            chord_lower=at_e + sigma * cost * (float(ek) - e),
            tangent_upper=at_e + cost * (float(ek) - e),
        ))
    return out


def effort_extremes(g: Graph, e: float, eq: EquilibriumSet, cap: Optional[int] = None) -> EffortExtremes:
    """
    Compares the enumerated aggregate efforts with alpha(G)·e and m(G)·e.

    The smallest aggregate includes the boundary solve when that is itself an
    equilibrium, i.e. when it has no negative entries.
    """
    if not eq.profiles:
        raise ValueError("Equilibrium set is empty.")
    totals = [aggregate_effort(p.x) for p in eq.profiles]
    solve = distributed_equilibrium(g, e)
    tol = get_settings().CLASSIFY_TOL * max(1.0, e)
    feasible = bool(np.all(solve.boundary >= -tol))
    if feasible:
        totals.append(solve.boundary_aggregate)
    else:
        logger.warning(
            f"Boundary solve has negative entries on n={g.n}; "
            f"m(G)·e = {solve.boundary_aggregate:.6g} is not attained by an equilibrium."
        )
    return EffortExtremes(
        max_effort=max(totals),
        min_effort=min(totals),
        alpha_e=independence_number(g, cap) * e,
        m_e=solve.boundary_aggregate,
        boundary_feasible=feasible,
    )
