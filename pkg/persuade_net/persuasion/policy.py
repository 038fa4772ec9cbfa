# persuade_net/persuasion/policy.py

from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Tuple

from persuade_net.benefit.effort import Belief, check_belief
from persuade_net.benefit.families import State
from persuade_net.config import get_settings

logger = logging.getLogger(__name__)


class PolicyClass(str, Enum):
    FULL_DISCLOSURE = "FullDisclosure"
    NO_DISCLOSURE = "NoDisclosure"
    EXAGGERATION = "Exaggeration"
    DOWNPLAY = "Downplay"
    INTERMEDIATE = "Intermediate"


@dataclass(frozen=True)
class Policy:
    """
    A two-signal disclosure policy.

    p_h is the probability of signalling h when the state is h, p_l the
    probability of signalling l when the state is l.
    """
    p_l: float
    p_h: float

    def __post_init__(self) -> None:
        for name, value in (("p_l", self.p_l), ("p_h", self.p_h)):
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {value}.")

    def mirrored(self) -> "Policy":
        """(1 - p_l, 1 - p_h): the same information with the signal labels swapped."""
        return Policy(1.0 - self.p_l, 1.0 - self.p_h)


@dataclass(frozen=True)
class Posterior:
    belief: Belief
    probability: float

    @property
    def used(self) -> bool:
        return self.probability > 0.0


def posterior(pol: Policy, mu0: Belief, signal: State) -> Posterior:
    """Bayes posterior of the high state after `signal`, with the signal's marginal probability."""
    check_belief(mu0)
    if State(signal) is State.HIGH:
        joint = mu0 * pol.p_h
        prob = joint + (1.0 - mu0) * (1.0 - pol.p_l)
    else:
        joint = mu0 * (1.0 - pol.p_h)
        prob = joint + (1.0 - mu0) * pol.p_l
    if prob <= 0.0:
        return Posterior(belief=mu0, probability=0.0)
    return Posterior(belief=min(1.0, joint / prob), probability=prob)


def posteriors(pol: Policy, mu0: Belief) -> Tuple[Posterior, Posterior]:
    """(after signal l, after signal h)."""
    return posterior(pol, mu0, State.LOW), posterior(pol, mu0, State.HIGH)


def classify_policy(pol: Policy, tol: float | None = None) -> PolicyClass:
    """Precedence: full disclosure, then no disclosure, exaggeration, downplay."""
    tol = get_settings().CLASSIFY_TOL if tol is None else tol

    def near(a: float, b: float) -> bool:
        return abs(a - b) <= tol

    def extreme(v: float) -> bool:
        return near(v, 0.0) or near(v, 1.0)

    if (near(pol.p_l, 1.0) and near(pol.p_h, 1.0)) or (near(pol.p_l, 0.0) and near(pol.p_h, 0.0)):
        return PolicyClass.FULL_DISCLOSURE
    if near(pol.p_l + pol.p_h, 1.0):
        return PolicyClass.NO_DISCLOSURE
    if extreme(pol.p_h):
        return PolicyClass.EXAGGERATION
    if extreme(pol.p_l):
        return PolicyClass.DOWNPLAY
    return PolicyClass.INTERMEDIATE


def expected_value(pol: Policy, mu0: Belief, value_at: Callable[[Belief], float]) -> float:
    """Sum over used signals of P(signal)·value(posterior)."""
    total = 0.0
    for post in posteriors(pol, mu0):
        if post.used:
            total += post.probability * value_at(post.belief)
    return total


def symmetry_check(
    pol: Policy, mu0: Belief, value_at: Callable[[Belief], float]
) -> Tuple[float, float]:
    """
    Compares a policy with its mirror image.

    The mirrored policy sends the opposite signal label with the same
    probabilities, so the posterior sets and the expected value must agree.
    Returns (largest posterior discrepancy, value discrepancy).
    """
    low, high = posteriors(pol, mu0)
    m_low, m_high = posteriors(pol.mirrored(), mu0)
    belief_gap = 0.0
    for a, b in ((low, m_high), (high, m_low)):
        belief_gap = max(belief_gap, abs(a.probability - b.probability))
        if a.used or b.used:
            belief_gap = max(belief_gap, abs(a.belief - b.belief))
    value_gap = abs(expected_value(pol, mu0, value_at) - expected_value(pol.mirrored(), mu0, value_at))
    return belief_gap, value_gap
