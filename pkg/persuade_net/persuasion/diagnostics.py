# persuade_net/persuasion/diagnostics.py

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import List, Optional

import numpy as np

from persuade_net.benefit.effort import GameParams, discriminant_grid, sufficient_Y_Z, unilateral_effort_grid
from persuade_net.config import get_settings
from persuade_net.exceptions import DegenerateDerivative
from persuade_net.game.aggregates import SigmaRegime
from persuade_net.persuasion.objective import Attitude, ObjectiveKind, ObjectiveSpec, belief_grid
from persuade_net.persuasion.policy import PolicyClass

logger = logging.getLogger(__name__)


@dataclass
class CurvatureReport:
    prediction: PolicyClass
    discriminant: str
    positive: int
    negative: int
    zero: int
    flips: List[float] = field(default_factory=list)
    indifferent: bool = False
    deferred: bool = False
    note: Optional[str] = None


def _signs(values: np.ndarray, band: float) -> np.ndarray:
    return np.where(values > band, 1, np.where(values < -band, -1, 0))


def _flip_locations(mus: np.ndarray, signs: np.ndarray) -> List[float]:
    nonzero = np.flatnonzero(signs)
    flips = []
    for a, b in zip(nonzero[:-1], nonzero[1:]):
        if signs[a] != signs[b]:
            flips.append(float(0.5 * (mus[a] + mus[b])))
    return flips


def _single_discriminant(mus: np.ndarray, values: np.ndarray, band: float, name: str) -> CurvatureReport:
    signs = _signs(values, band)
    pos, neg, zero = int((signs > 0).sum()), int((signs < 0).sum()), int((signs == 0).sum())
    flips = _flip_locations(mus, signs)
    report = CurvatureReport(PolicyClass.INTERMEDIATE, name, pos, neg, zero, flips)
    if pos == neg == 0:
        report.indifferent = True
        report.note = f"{name} vanishes on the whole grid: all policies are equal."
    elif neg == 0:
        report.prediction = PolicyClass.NO_DISCLOSURE
    elif pos == 0:
        report.prediction = PolicyClass.FULL_DISCLOSURE
    elif len(flips) == 1:
        first = signs[np.flatnonzero(signs)[0]]
        report.prediction = PolicyClass.EXAGGERATION if first < 0 else PolicyClass.DOWNPLAY
    else:
        report.note = f"{name} changes sign {len(flips)} times."
    return report


def _mixed_discriminants(
    mus: np.ndarray, r: np.ndarray, r_tilde: np.ndarray, band: float
) -> CurvatureReport:
    """
    Optimistic ProbabilitySafe in the sigma -> 1 limit mixes both discriminants:
    R~ > 0 everywhere gives no disclosure, R < 0 everywhere full disclosure;
    R < 0 below some belief and R~ > 0 from it on gives exaggeration, and
    R~ > 0 below with R < 0 above gives downplay.
    """
    s_r, s_t = _signs(r, band), _signs(r_tilde, band)
    report = CurvatureReport(
        PolicyClass.INTERMEDIATE, "R/R~",
        positive=int((s_t > 0).sum()), negative=int((s_r < 0).sum()), zero=0,
        flips=_flip_locations(mus, s_t),
    )
    size = mus.size
    if np.all(s_t > 0):
        report.prediction = PolicyClass.NO_DISCLOSURE
        return report
    if np.all(s_r < 0):
        report.prediction = PolicyClass.FULL_DISCLOSURE
        return report
    for k in range(1, size):
        if np.all(s_r[:k] < 0) and np.all(s_t[k:] > 0):
            report.prediction = PolicyClass.EXAGGERATION
            report.flips = [float(mus[k])]
            return report
        if np.all(s_t[:k] > 0) and np.all(s_r[k:] < 0):
            report.prediction = PolicyClass.DOWNPLAY
            report.flips = [float(mus[k])]
            return report
    report.note = "Neither discriminant pattern holds; the envelope decides."
    return report


def curvature_recommendation(
    spec: ObjectiveSpec, gp: GameParams, mus: Optional[np.ndarray] = None
) -> CurvatureReport:
    """
    Predicts the optimal policy class from discriminant signs on a belief grid.

    AggregateEffort objectives follow R, ProbabilitySafe objectives follow R~,
    and the optimistic sigma -> 1 case combines the two. Beliefs where e* is
    clamped at zero are left out and the report is marked deferred.
    """
    mus = belief_grid(get_settings().SWEEP_GRID) if mus is None else np.asarray(mus, dtype=float)
    band = get_settings().DEAD_BAND
    r, r_tilde, interior = discriminant_grid(gp, mus)
    if not interior.any():
        return CurvatureReport(
            PolicyClass.INTERMEDIATE, "none", 0, 0, 0, deferred=True,
            note="e* is clamped on the whole grid; discriminants are undefined.",
        )
    inner = mus[interior]

    if spec.objective is ObjectiveKind.AGGREGATE_EFFORT:
        report = _single_discriminant(inner, r[interior], band, "R")
    elif spec.attitude is Attitude.OPTIMISTIC and spec.regime is SigmaRegime.TO_ONE:
        report = _mixed_discriminants(inner, r[interior], r_tilde[interior], band)
    else:
        report = _single_discriminant(inner, r_tilde[interior], band, "R~")

    if not interior.all():
        report.deferred = True
        report.note = (
            f"e* is clamped at 0 below belief {float(inner[0]):.6g}; "
            f"the prediction covers the interior only and concavification decides."
        )
    logger.info(f"Curvature prediction for {spec.label}: {report.prediction.value} (deferred={report.deferred}).")
    return report


class SufficientVerdict(str, Enum):
    NO_INFORMATION = "no information sufficient"
    FULL_INFORMATION = "full information sufficient"
    INCONCLUSIVE = "boundary - fall back to R"
    DEGENERATE = "degenerate"


@dataclass
class SufficientReport:
    verdict: SufficientVerdict
    y_min: float = float("nan")
    y_max: float = float("nan")
    z_min: float = float("nan")
    z_max: float = float("nan")
    message: Optional[str] = None


def sufficient_condition_report(gp: GameParams, xs: Optional[np.ndarray] = None) -> SufficientReport:
    """
    Evaluates the belief-free Y and Z over efforts.

    By default the efforts are those actually played, e*(mu) over the belief
    grid. Y < 0 < Z everywhere suffices for no disclosure, Y > 0 > Z for full
    disclosure.
    """
    if xs is None:
        efforts = unilateral_effort_grid(gp, belief_grid(get_settings().SWEEP_GRID))
        xs = efforts[efforts > 0]
    xs = np.asarray(xs, dtype=float)
    if xs.size == 0:
        return SufficientReport(SufficientVerdict.DEGENERATE, message="No interior effort to evaluate.")
    try:
        pairs = np.array([sufficient_Y_Z(gp.benefit, float(x)) for x in xs])
    except DegenerateDerivative as e:
        logger.warning(f"Sufficient-condition report is degenerate: {e}")
        return SufficientReport(SufficientVerdict.DEGENERATE, message=str(e))

    y, z = pairs[:, 0], pairs[:, 1]
    if np.all(y < 0) and np.all(z > 0):
        verdict = SufficientVerdict.NO_INFORMATION
    elif np.all(y > 0) and np.all(z < 0):
        verdict = SufficientVerdict.FULL_INFORMATION
    else:
        verdict = SufficientVerdict.INCONCLUSIVE
    return SufficientReport(
        verdict, float(y.min()), float(y.max()), float(z.min()), float(z.max())
    )
