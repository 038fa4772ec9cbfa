# persuade_net/benefit/effort.py

from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import cached_property
from typing import Optional, Tuple

import numpy as np

from persuade_net.benefit.families import BenefitPair, State, delta_b, mixed_benefit
from persuade_net.config import get_settings
from persuade_net.exceptions import BracketFailure, DegenerateDerivative, InteriorRequired

logger = logging.getLogger(__name__)

Belief = float
DENOMINATOR_FLOOR = 1e-14


def check_belief(mu: float) -> float:
    if not 0.0 <= mu <= 1.0:
        raise ValueError(f"Belief must lie in [0, 1], got {mu}.")
    return float(mu)


@dataclass(frozen=True)
class GameParams:
    """Benefit pair, marginal cost c and prior probability mu0 of the high state."""
    benefit: BenefitPair
    cost: float
    prior: Belief

    def __post_init__(self) -> None:
        if not self.cost > 0:
            raise ValueError(f"Marginal cost must be positive, got {self.cost}.")
        check_belief(self.prior)

    @cached_property
    def a1_holds(self) -> bool:
        """Unilateral effort rises with mu, i.e. b'(x;l) < b'(x;h) wherever measurable."""
        grid = self.benefit.validation_grid()
        gap = np.asarray(delta_b(self.benefit, grid, 1))
        return bool(gap[0] < 0 and np.all(gap <= 0))

    @cached_property
    def a2_holds(self) -> bool:
        """Even a certain low state induces positive effort: c < b'(0;l)."""
        return self.cost < self.benefit.evaluate(0.0, State.LOW, 1)

    @cached_property
    def clamp_kink(self) -> Optional[float]:
        """
        The belief at which b~'(0;mu) = c, below which e* is clamped at 0.

        None when e* is interior for every belief or clamped for every belief.
        """
        d_low = self.benefit.evaluate(0.0, State.LOW, 1)
        d_high = self.benefit.evaluate(0.0, State.HIGH, 1)
        if d_high == d_low:
            return None
        kink = (self.cost - d_low) / (d_high - d_low)
        return float(kink) if 0.0 < kink < 1.0 else None


def _marginal_gap(gp: GameParams, mus: np.ndarray, x: np.ndarray) -> np.ndarray:
    return np.asarray(mixed_benefit(gp.benefit, mus, x, 1)) - gp.cost


def unilateral_effort_grid(gp: GameParams, mus: np.ndarray) -> np.ndarray:
    """
    e*(mu) for every belief in `mus`, solving b~'(e;mu) = c by bisection.

    The bracket starts at [0, 1] and doubles until b~' < c. Bisection then runs
    until the bracket cannot shrink in floating point, so the root is accurate
    to about one ulp, well inside the 1e-12 absolute requirement. Beliefs with
    b~'(0;mu) <= c get e* = 0.
    """
    mus = np.atleast_1d(np.asarray(mus, dtype=float))
    if np.any((mus < 0) | (mus > 1)):
        raise ValueError("Beliefs must lie in [0, 1].")
    cap = get_settings().BRACKET_CAP

    zero = np.zeros_like(mus)
    active = _marginal_gap(gp, mus, zero) > 0
    lo = zero.copy()
    hi = np.ones_like(mus)

    while True:
        grow = active & (_marginal_gap(gp, mus, hi) > 0)
        if not grow.any():
            break
        lo = np.where(grow, hi, lo)
        hi = np.where(grow, 2.0 * hi, hi)
        if np.any(hi > cap):
            raise BracketFailure(
                f"Mixed marginal benefit stays above c={gp.cost} up to x={cap:.3g}."
            )

    moving = active.copy()
    while moving.any():
        mid = 0.5 * (lo + hi)
        moving &= (mid > lo) & (mid < hi)
        above = _marginal_gap(gp, mus, mid) > 0
        lo = np.where(moving & above, mid, lo)
        hi = np.where(moving & ~above, mid, hi)

    width = float(np.max(np.where(active, hi - lo, 0.0), initial=0.0))
    if width > get_settings().ROOT_TOL * max(1.0, float(hi.max())):
        logger.warning(f"Bisection stopped with bracket width {width:.3e} above ROOT_TOL.")
    return np.where(active, 0.5 * (lo + hi), 0.0)


def unilateral_effort(gp: GameParams, mu: Belief) -> float:
    """e*(mu) for a single belief."""
    check_belief(mu)
    return float(unilateral_effort_grid(gp, np.array([mu]))[0])


def _interior_effort(gp: GameParams, mu: Belief) -> float:
    e = unilateral_effort(gp, mu)
    if e <= 0:
        raise InteriorRequired(f"e*({mu:.6g}) is clamped at 0.")
    return e


def e_star_derivatives(gp: GameParams, mu: Belief) -> Tuple[float, float]:
    """First and second derivative of e*(mu), from implicit differentiation of b~'(e;mu) = c."""
    e = _interior_effort(gp, mu)
    bp = gp.benefit
    b2 = mixed_benefit(bp, mu, e, 2)
    b3 = mixed_benefit(bp, mu, e, 3)
    d1 = delta_b(bp, e, 1)
    d2 = delta_b(bp, e, 2)
    first = d1 / b2
    # b''(e;h) - b''(e;l) = -(delta b)''
    second = (first / -b2) * (b3 * first - 2.0 * d2)
    return float(first), float(second)


def risk_aversion(f_order1: float, f_order2: float) -> float:
    """A = -Q''/Q'."""
    if abs(f_order1) < DENOMINATOR_FLOOR:
        raise DegenerateDerivative(f"Risk aversion undefined: |Q'| = {abs(f_order1):.3e}.")
    return -f_order2 / f_order1


def prudence(f_order2: float, f_order3: float) -> float:
    """P = -Q'''/Q''."""
    if abs(f_order2) < DENOMINATOR_FLOOR:
        raise DegenerateDerivative(f"Prudence undefined: |Q''| = {abs(f_order2):.3e}.")
    return -f_order3 / f_order2


def _discriminants(gp: GameParams, mu: Belief, e: Optional[float] = None) -> Tuple[float, float]:
    if e is None:
        e = _interior_effort(gp, mu)
    bp = gp.benefit
    a_delta = risk_aversion(delta_b(bp, e, 1), delta_b(bp, e, 2))
    p_mixed = prudence(mixed_benefit(bp, mu, e, 2), mixed_benefit(bp, mu, e, 3))
    a_mixed = risk_aversion(mixed_benefit(bp, mu, e, 1), mixed_benefit(bp, mu, e, 2))
    r = 2.0 * a_delta - p_mixed
    return float(r), float(r - a_mixed)


def curvature_R(gp: GameParams, mu: Belief) -> float:
    """
    R = 2·A(delta b) - P(b~), both at e*(mu).

    Twice the half-weighted form A(delta b) - P(b)/2; only its sign is used.
    sign(e*''(mu)) = -sign(R).
    """
    return _discriminants(gp, mu)[0]


def curvature_R_tilde(gp: GameParams, mu: Belief) -> float:
    """R~ = R - A(b~) at e*(mu); sign(d²/dmu² b~(e*(mu);mu)) = -sign(R~)."""
    return _discriminants(gp, mu)[1]


def sufficient_Y_Z(bp: BenefitPair, x: float) -> Tuple[float, float]:
    """
    The belief-free quantities Y and Z at effort x.

    R > 0 exactly when Z - mu·Y > 0, so Y < 0 < Z everywhere means no
    disclosure and Y > 0 > Z everywhere means full disclosure.
    """
    d1 = delta_b(bp, x, 1)
    if abs(d1) < DENOMINATOR_FLOOR:
        raise DegenerateDerivative(f"(delta b)'({x:.6g}) vanishes; Y and Z are undefined.")
    ratio = delta_b(bp, x, 2) / d1
    y = 2.0 * ratio * delta_b(bp, x, 2) - delta_b(bp, x, 3)
    z = 2.0 * ratio * bp.evaluate(x, State.LOW, 2) - bp.evaluate(x, State.LOW, 3)
    return float(y), float(z)


def sigma_b_at(bp: BenefitPair, mu: Belief, e: float, n: int, cost: float) -> float:
    """sigma_b for an explicit effort level e > 0."""
    if n < 2:
        raise ValueError(f"sigma_b needs n >= 2, got {n}.")
    if e <= 0:
        raise InteriorRequired(f"sigma_b needs a positive effort level, got {e:.6g}.")
    spread = mixed_benefit(bp, mu, n * e, 0) - mixed_benefit(bp, mu, e, 0)
    return float(spread / (cost * e * (n - 1)))


def sigma_b(gp: GameParams, mu: Belief, n: int) -> float:
    """(b~(n e*) - b~(e*)) / (c e* (n-1)): mean slope over [e*, n e*] relative to c."""
    if n < 2:
        raise ValueError(f"sigma_b needs n >= 2, got {n}.")
    return sigma_b_at(gp.benefit, mu, _interior_effort(gp, mu), n, gp.cost)


def effort_and_value_grid(gp: GameParams, mus: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """e*(mu) and b~(e*(mu);mu) on a belief grid."""
    efforts = unilateral_effort_grid(gp, mus)
    values = np.asarray(mixed_benefit(gp.benefit, mus, efforts, 0))
    return efforts, values


def discriminant_grid(
    gp: GameParams, mus: np.ndarray
) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    R and R~ on a belief grid, NaN where e* is clamped.

    Returns (R, R~, interior mask).
    """
    efforts = unilateral_effort_grid(gp, mus)
    interior = efforts > 0
    r = np.full(mus.shape, np.nan)
    r_tilde = np.full(mus.shape, np.nan)
    for i in np.flatnonzero(interior):
        r[i], r_tilde[i] = _discriminants(gp, float(mus[i]), float(efforts[i]))
    clamped = int((~interior).sum())
    if clamped:
        logger.warning(f"e* is clamped at 0 on {clamped} of {mus.size} beliefs; R is undefined there.")
    return r, r_tilde, interior
