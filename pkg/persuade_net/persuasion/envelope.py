# persuade_net/persuasion/envelope.py

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import List, Tuple

import numpy as np

from persuade_net.benefit.effort import Belief
from persuade_net.exceptions import PriorOnBoundary
from persuade_net.persuasion.objective import ReducedObjective
from persuade_net.persuasion.policy import Policy, PolicyClass, classify_policy

logger = logging.getLogger(__name__)

COLLINEAR_TOL = 1e-14
ROUNDOFF = 1e-12


@dataclass(frozen=True)
class ConcaveEnvelope:
    """
    Smallest concave function above a sampled objective.

    `indices` are the grid positions of the hull vertices; between vertices the
    envelope is the straight chord.
    """
    mu: np.ndarray
    values: np.ndarray
    indices: np.ndarray

    def at(self, mu: Belief) -> float:
        return float(np.interp(mu, self.mu, self.values))

    def on(self, grid: np.ndarray) -> np.ndarray:
        return np.interp(grid, self.mu, self.values)

    def segment(self, mu0: Belief) -> Tuple[int, int]:
        """Positions (in the vertex list) of the hull segment containing mu0."""
        right = int(np.searchsorted(self.mu, mu0, side="right"))
        right = min(max(right, 1), self.mu.size - 1)
        return right - 1, right


def _cross(o: Tuple[float, float], a: Tuple[float, float], b: Tuple[float, float]) -> float:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def concave_envelope(ro: ReducedObjective) -> ConcaveEnvelope:
    """Upper hull of the sampled points by Andrew's monotone chain; near-collinear vertices are dropped."""
    tol = COLLINEAR_TOL * max(1.0, float(np.abs(ro.values).max()))
    hull: List[int] = []
    for i, point in enumerate(zip(ro.grid, ro.values)):
        while len(hull) >= 2:
            o = (ro.grid[hull[-2]], ro.values[hull[-2]])
            a = (ro.grid[hull[-1]], ro.values[hull[-1]])
            if _cross(o, a, point) < -tol:
                break
            hull.pop()
        hull.append(i)
    idx = np.asarray(hull, dtype=int)
    logger.debug(f"Concave envelope has {idx.size} vertices over {ro.grid.size} beliefs.")
    return ConcaveEnvelope(mu=ro.grid[idx], values=ro.values[idx], indices=idx)


@dataclass(frozen=True)
class OptimalPolicy:
    policy: Policy
    value: float
    mu_low: Belief
    mu_high: Belief
    degenerate: bool
    indifferent: bool

    @property
    def policy_class(self) -> PolicyClass:
        return classify_policy(self.policy)


def optimal_policy(ro: ReducedObjective, env: ConcaveEnvelope, mu0: Belief) -> OptimalPolicy:
    """
    Splits the prior along the envelope segment that contains it.

    The posteriors are the segment's endpoints; the policy is recovered from
    the mixing weight lambda = (mu0 - mu_low)/(mu_high - mu_low) as
    p_h = lambda·mu_high/mu0 and p_l = (1 - lambda)(1 - mu_low)/(1 - mu0).
    A segment between neighbouring grid points lies on the objective itself,
    so no split is made there and the prior is kept (lambda = 1).
    """
    if not 0.0 < mu0 < 1.0:
        raise PriorOnBoundary(f"Prior must lie strictly inside (0, 1), got {mu0}.")
    left, right = env.segment(mu0)
    mu_low, mu_high = float(env.mu[left]), float(env.mu[right])
    degenerate = bool(env.indices[right] - env.indices[left] <= 1) or mu_low == mu0

    if degenerate:
        mu_low = mu_high = mu0
        weight = 1.0
    else:
        weight = (mu0 - mu_low) / (mu_high - mu_low)

    p_h = weight * mu_high / mu0
    p_l = (1.0 - weight) * (1.0 - mu_low) / (1.0 - mu0)
    if p_h > 1.0 + ROUNDOFF or p_l > 1.0 + ROUNDOFF:
        logger.warning(f"Reconstructed policy ({p_l}, {p_h}) exceeds 1 beyond roundoff.")
    policy = Policy(p_l=float(np.clip(p_l, 0.0, 1.0)), p_h=float(np.clip(p_h, 0.0, 1.0)))

    result = OptimalPolicy(
        policy=policy,
        value=env.at(mu0),
        mu_low=mu_low,
        mu_high=mu_high,
        degenerate=degenerate,
        indifferent=ro.is_constant,
    )
    logger.info(
        f"Optimal policy at prior {mu0}: (p_l={policy.p_l:.6g}, p_h={policy.p_h:.6g}) "
        f"-> {result.policy_class.value}, value {result.value:.9g}."
    )
    return result
