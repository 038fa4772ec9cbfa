# persuade_net/persuasion/objective.py

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Optional

import numpy as np

from persuade_net.benefit.effort import Belief, GameParams, effort_and_value_grid, unilateral_effort
from persuade_net.config import get_settings
from persuade_net.game.aggregates import SigmaRegime, aggregate_benefit, aggregate_effort
from persuade_net.game.equilibria import distributed_equilibrium, enumerate_equilibria
from persuade_net.network.graph import (
    Graph,
    degree_plus_one_weights,
    independence_number,
    network_constant_m,
    weighted_max_independent_set,
)
from persuade_net.persuasion.policy import Policy, classify_policy, expected_value, posteriors
from persuade_net.services.worker_pool import WorkerPool

logger = logging.getLogger(__name__)


class ObjectiveKind(str, Enum):
    AGGREGATE_EFFORT = "AggregateEffort"
    PROBABILITY_SAFE = "ProbabilitySafe"


class Attitude(str, Enum):
    OPTIMISTIC = "Optimistic"
    PESSIMISTIC = "Pessimistic"


@dataclass(frozen=True)
class ObjectiveSpec:
    """What the government maximises and which equilibrium it expects; `regime` only matters for optimistic ProbabilitySafe."""
    objective: ObjectiveKind
    attitude: Attitude
    regime: SigmaRegime = SigmaRegime.TO_ZERO

    @property
    def uses_regime(self) -> bool:
        return self.objective is ObjectiveKind.PROBABILITY_SAFE and self.attitude is Attitude.OPTIMISTIC

    @property
    def label(self) -> str:
        base = f"{self.objective.value}+{self.attitude.value}"
        return f"{base}+{self.regime.value}" if self.uses_regime else base


@dataclass(frozen=True)
class ReducedObjective:
    """
    The government's value as a function of the common belief, sampled on a grid.

    Between grid points the value is linearly interpolated.
    """
    grid: np.ndarray
    values: np.ndarray
    constants: Dict[str, float] = field(default_factory=dict)
    spec: Optional[ObjectiveSpec] = None

    def __post_init__(self) -> None:
        grid = np.asarray(self.grid, dtype=float)
        values = np.asarray(self.values, dtype=float)
        if grid.ndim != 1 or grid.shape != values.shape or grid.size < 2:
            raise ValueError("Grid and values must be 1-D arrays of equal length >= 2.")
        if grid[0] != 0.0 or grid[-1] != 1.0 or np.any(np.diff(grid) <= 0):
            raise ValueError("Belief grid must strictly increase from 0 to 1.")
        if not np.all(np.isfinite(values)):
            raise ValueError("Reduced objective values must be finite.")
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "values", values)

    @classmethod
    def from_function(cls, fn, points: int) -> "ReducedObjective":
        grid = np.linspace(0.0, 1.0, points)
        return cls(grid, np.asarray([fn(mu) for mu in grid], dtype=float))

    def at(self, mu: Belief) -> float:
        return float(np.interp(mu, self.grid, self.values))

    @property
    def is_constant(self) -> bool:
        spread = float(self.values.max() - self.values.min())
        return spread <= get_settings().CLASSIFY_TOL * max(1.0, float(np.abs(self.values).max()))


def belief_grid(points: Optional[int] = None) -> np.ndarray:
    return np.linspace(0.0, 1.0, points or get_settings().BELIEF_GRID)


def graph_constants(spec: ObjectiveSpec, g: Graph, cap: Optional[int] = None) -> Dict[str, float]:
    """Only the constants the objective actually needs, so large graphs are not enumerated needlessly."""
    constants: Dict[str, float] = {"n": float(g.n)}
    if spec.objective is ObjectiveKind.AGGREGATE_EFFORT:
        if spec.attitude is Attitude.OPTIMISTIC:
            constants["alpha"] = float(independence_number(g, cap))
        else:
            constants["m"] = network_constant_m(g)
    elif spec.uses_regime and spec.regime is SigmaRegime.TO_ONE:
        _, alpha_w = weighted_max_independent_set(g, degree_plus_one_weights(g), cap)
        constants["alpha_w"] = float(alpha_w)
    return constants


def reduced_objective(
    spec: ObjectiveSpec, g: Graph, gp: GameParams, grid: Optional[np.ndarray] = None,
    cap: Optional[int] = None,
) -> ReducedObjective:
    """
    O(mu) on a belief grid for each objective/attitude pair:

    - AggregateEffort, optimistic:  alpha(G)·e*(mu)
    - AggregateEffort, pessimistic: m(G)·e*(mu)
    - ProbabilitySafe, pessimistic or sigma -> 0: b~(e*(mu); mu)
    - ProbabilitySafe, optimistic, sigma -> 1: b~(e*(mu); mu) + c·e*(mu)·(alpha_w/n - 1)
    """
    mus = belief_grid() if grid is None else np.asarray(grid, dtype=float)
    constants = graph_constants(spec, g, cap)
    efforts, safe = effort_and_value_grid(gp, mus)

    if spec.objective is ObjectiveKind.AGGREGATE_EFFORT:
        factor = constants["alpha"] if spec.attitude is Attitude.OPTIMISTIC else constants["m"]
        values = factor * efforts
    elif "alpha_w" in constants:
        f_g = gp.cost * (constants["alpha_w"] - g.n) / g.n
        constants["f_G"] = f_g
        values = safe + f_g * efforts
    else:
        values = safe

    logger.info(f"Built reduced objective {spec.label} on {mus.size} beliefs (constants {constants}).")
    return ReducedObjective(grid=mus, values=np.asarray(values, dtype=float), constants=constants, spec=spec)


def expected_objective(pol: Policy, ro: ReducedObjective, mu0: Belief) -> float:
    """Sum over used signals of P(signal)·O(posterior)."""
    return expected_value(pol, mu0, ro.at)


@dataclass(frozen=True)
class SweepResult:
    """Expected objective over a square (p_l, p_h) grid; values[i, j] is at p_h = axis[i], p_l = axis[j]."""
    axis: np.ndarray
    values: np.ndarray
    prior: Belief

    def argmax(self) -> Policy:
        i, j = np.unravel_index(int(np.argmax(self.values)), self.values.shape)
        return Policy(p_l=float(self.axis[j]), p_h=float(self.axis[i]))

    def rows(self) -> List[tuple]:
        out = []
        for i, p_h in enumerate(self.axis):
            for j, p_l in enumerate(self.axis):
                pol = Policy(p_l=float(p_l), p_h=float(p_h))
                out.append((pol.p_l, pol.p_h, float(self.values[i, j]), classify_policy(pol)))
        return out


def sweep(
    ro: ReducedObjective, mu0: Belief, points: Optional[int] = None, half: bool = False,
    pool: Optional[WorkerPool] = None,
) -> SweepResult:
    """
    Expected objective on a points x points policy grid.

    With `half`, only cells with p_l + p_h <= 1 are evaluated; the rest are
    copied from their mirror (1 - p_l, 1 - p_h), which carries the same value.
    """
    size = points or get_settings().SWEEP_GRID
    axis = np.linspace(0.0, 1.0, size)
    pool = pool or WorkerPool()

    def row(i: int) -> np.ndarray:
        out = np.full(size, np.nan)
        for j in range(size):
            if half and i + j > size - 1:
                continue
            out[j] = expected_objective(Policy(p_l=float(axis[j]), p_h=float(axis[i])), ro, mu0)
        return out

    values = np.vstack(pool.map_ordered(row, list(range(size))))
    if half:
        upper = np.add.outer(np.arange(size), np.arange(size)) > size - 1
        values[upper] = values[::-1, ::-1][upper]
    logger.info(f"Swept {size}x{size} policies at prior {mu0} (half={half}).")
    return SweepResult(axis=axis, values=values, prior=mu0)


def _equilibrium_value(spec: ObjectiveSpec, g: Graph, gp: GameParams, mu: Belief, cap: Optional[int]) -> float:
    e = unilateral_effort(gp, mu)
    eq = enumerate_equilibria(g, e, cap)
    candidates = [p.array for p in eq.profiles]
    solve = distributed_equilibrium(g, e)
    # the boundary solve is an equilibrium whenever it has no negative entries
    if np.all(solve.boundary >= -get_settings().CLASSIFY_TOL * max(1.0, e)):
        candidates.append(np.maximum(solve.boundary, 0.0))
    if spec.objective is ObjectiveKind.AGGREGATE_EFFORT:
        scores = [aggregate_effort(x) for x in candidates]
    else:
        scores = [aggregate_benefit(g, x, gp.benefit, mu) / g.n for x in candidates]
    return max(scores) if spec.attitude is Attitude.OPTIMISTIC else min(scores)


def stackelberg_value(
    spec: ObjectiveSpec, g: Graph, gp: GameParams, pol: Policy, cap: Optional[int] = None
) -> float:
    """
    The government's expected value of `pol` computed from the equilibria themselves.

    At each used posterior the equilibria are enumerated and the best (optimistic)
    or worst (pessimistic) one is scored, without the graph-constant shortcut of
    `reduced_objective`.
    """
    total = 0.0
    for post in posteriors(pol, gp.prior):
        if post.used:
            total += post.probability * _equilibrium_value(spec, g, gp, post.belief, cap)
    return total
