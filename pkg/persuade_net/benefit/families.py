# persuade_net/benefit/families.py

from __future__ import annotations

import csv
import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from enum import Enum
from math import prod
from pathlib import Path
from typing import Optional, Union

import numpy as np
from scipy.interpolate import BSpline, make_interp_spline

from persuade_net.config import get_settings
from persuade_net.exceptions import InvalidBenefit

logger = logging.getLogger(__name__)

ArrayLike = Union[float, np.ndarray]


class State(str, Enum):
    """The two infection levels."""
    HIGH = "h"
    LOW = "l"


class BenefitPair(ABC):
    """
    The two state-conditional probabilities of staying safe, b(x;h) and b(x;l).

    Subclasses supply `_evaluate`; construction runs `validate()` which checks,
    on a grid, that both functions lie in [0, 1], increase, are strictly
    concave, saturate at 1 and that b(x;h) < b(x;l).
    """

    family: str = "abstract"

    def evaluate(self, x: ArrayLike, state: State, order: int = 0) -> ArrayLike:
        if order not in (0, 1, 2, 3):
            raise ValueError(f"Derivative order must be 0..3, got {order}.")
        arr = np.asarray(x, dtype=float)
        if np.any(arr < 0):
            raise ValueError("Effort must be nonnegative.")
        out = self._evaluate(arr, State(state), order)
        return float(out) if np.ndim(out) == 0 else out

    @abstractmethod
    def _evaluate(self, x: np.ndarray, state: State, order: int) -> np.ndarray:
        ...

    @abstractmethod
    def validation_range(self) -> float:
        """Right endpoint of the validation grid, far enough out to see saturation."""

    def validation_grid(self) -> np.ndarray:
        points = get_settings().VALIDATION_GRID
        x_max = self.validation_range()
        return np.concatenate([[0.0], np.geomspace(min(1e-3, x_max / 2), x_max, points - 1)])

    def validate(self) -> None:
        tol = get_settings().VALIDATION_TOL
        grid = self.validation_grid()
        for state in State:
            b = self._evaluate(grid, state, 0)
            b1 = self._evaluate(grid, state, 1)
            b2 = self._evaluate(grid, state, 2)
            if np.any(b < -tol) or np.any(b > 1 + tol):
                raise InvalidBenefit(f"{self.family}: b(x;{state.value}) leaves [0, 1].")
            if np.any(b1 < -tol) or not b1[0] > 0:
                raise InvalidBenefit(f"{self.family}: b(x;{state.value}) is not increasing.")
            if np.any(b2 > tol) or not b2[0] < 0:
                raise InvalidBenefit(f"{self.family}: b(x;{state.value}) is not strictly concave.")
            if 1.0 - b[-1] > tol:
                raise InvalidBenefit(
                    f"{self.family}: b(x;{state.value}) does not saturate at 1 "
                    f"(1 - b = {1.0 - b[-1]:.3e} at x = {grid[-1]:.3g})."
                )
        gap = self._evaluate(grid, State.LOW, 0) - self._evaluate(grid, State.HIGH, 0)
        if np.any(gap < -tol) or not gap[0] > 0:
            raise InvalidBenefit(f"{self.family}: need b(x;h) < b(x;l) for all x.")
        logger.debug(f"Validated {self.family} benefit pair on {grid.size} points.")


@dataclass(frozen=True)
class ExponentialPair(BenefitPair):
    """b(x;h) = 1 - H e^{-x}, b(x;l) = 1 - L e^{-x}."""
    H: float
    L: float
    family: str = field(default="exponential", init=False)

    def __post_init__(self) -> None:
        if not (0 < self.L <= 1 and 0 < self.H <= 1):
            raise InvalidBenefit(f"exponential: need 0 < L, H <= 1, got H={self.H}, L={self.L}.")
        self.validate()

    def _evaluate(self, x: np.ndarray, state: State, order: int) -> np.ndarray:
        k = self.H if state is State.HIGH else self.L
        decay = k * np.exp(-x)
        if order == 0:
            return 1.0 - decay
        return decay if order % 2 == 1 else -decay

    def validation_range(self) -> float:
        tol = get_settings().VALIDATION_TOL
        return float(np.log(10.0 * max(self.H, self.L) / tol))


@dataclass(frozen=True)
class PowerSaturatingPair(BenefitPair):
    """b(x;i) = 1 - a_i (1+x)^{-p_i}; `p_l` defaults to `p`, which is also p_h."""
    a_h: float
    a_l: float
    p: float
    p_l: Optional[float] = None
    family: str = field(default="power", init=False)

    def __post_init__(self) -> None:
        if not (0 < self.a_l <= 1 and 0 < self.a_h <= 1):
            raise InvalidBenefit(f"power: need 0 < a_l, a_h <= 1, got {self.a_h}, {self.a_l}.")
        if self.p <= 0 or (self.p_l is not None and self.p_l <= 0):
            raise InvalidBenefit("power: exponents must be positive.")
        self.validate()

    def _params(self, state: State):
        if state is State.HIGH:
            return self.a_h, self.p
        return self.a_l, self.p if self.p_l is None else self.p_l

    def _evaluate(self, x: np.ndarray, state: State, order: int) -> np.ndarray:
        a, p = self._params(state)
        u = 1.0 + x
        if order == 0:
            return 1.0 - a * u ** (-p)
        rising = prod(p + j for j in range(order))
        return -a * (-1) ** order * rising * u ** (-p - order)

    def validation_range(self) -> float:
        tol = get_settings().VALIDATION_TOL
        p_min = min(self.p, self.p if self.p_l is None else self.p_l)
        with np.errstate(over="ignore"):
            x_max = np.power(10.0 * max(self.a_h, self.a_l) / tol, 1.0 / p_min)
        return float(min(x_max, 1e300))


@dataclass(frozen=True, eq=False)
class TabulatedPair(BenefitPair):
    """
    Sampled benefit curves, interpolated by quintic B-splines so the third
    derivative is continuous. Beyond the last sample both curves are held at
    their final value with zero derivatives.
    """
    x: np.ndarray
    b_h: np.ndarray
    b_l: np.ndarray
    family: str = field(default="tabulated", init=False)
    _splines: dict = field(default_factory=dict, init=False, repr=False)

    def __post_init__(self) -> None:
        xs = np.asarray(self.x, dtype=float)
        if xs.ndim != 1 or xs.size < 6:
            raise InvalidBenefit("tabulated: need at least 6 samples for a quintic spline.")
        if xs[0] != 0.0 or np.any(np.diff(xs) <= 0):
            raise InvalidBenefit("tabulated: x must start at 0 and strictly increase.")
        self._splines[State.HIGH] = make_interp_spline(xs, np.asarray(self.b_h, float), k=5)
        self._splines[State.LOW] = make_interp_spline(xs, np.asarray(self.b_l, float), k=5)
        self.validate()

    @classmethod
    def from_csv(cls, path: Path) -> "TabulatedPair":
        """Reads samples from a CSV with header `x,b_h,b_l`."""
        path = Path(path)
        if not path.exists():
            raise FileNotFoundError(f"Tabulated benefit CSV not found at: {path}")
        xs, hs, ls = [], [], []
        with open(path, newline="", encoding="utf-8") as f:
            reader = csv.DictReader(f)
            missing = {"x", "b_h", "b_l"} - set(reader.fieldnames or [])
            if missing:
                raise InvalidBenefit(f"CSV '{path}' is missing columns {sorted(missing)}.")
            for row in reader:
                xs.append(float(row["x"]))
                hs.append(float(row["b_h"]))
                ls.append(float(row["b_l"]))
        logger.info(f"Loaded {len(xs)} tabulated benefit samples from {path}.")
        return cls(np.array(xs), np.array(hs), np.array(ls))

    def _evaluate(self, x: np.ndarray, state: State, order: int) -> np.ndarray:
        spline: BSpline = self._splines[state]
        x_end = float(np.asarray(self.x)[-1])
        inside = np.minimum(x, x_end)
        values = spline(inside, nu=order)
        if order > 0:
            values = np.where(x > x_end, 0.0, values)
        return values

    def validation_grid(self) -> np.ndarray:
        xs = np.asarray(self.x, dtype=float)
        return np.linspace(xs[0], xs[-1], get_settings().VALIDATION_GRID)

    def validation_range(self) -> float:
        return float(np.asarray(self.x)[-1])


def benefit_eval(bp: BenefitPair, x: ArrayLike, state: State, order: int = 0) -> ArrayLike:
    """b^{(order)}(x; state)."""
    return bp.evaluate(x, state, order)


def mixed_benefit(bp: BenefitPair, mu: float, x: ArrayLike, order: int = 0) -> ArrayLike:
    """The belief-weighted benefit mu·b(x;h) + (1-mu)·b(x;l) and its derivatives."""
    return mu * bp.evaluate(x, State.HIGH, order) + (1.0 - mu) * bp.evaluate(x, State.LOW, order)


def delta_b(bp: BenefitPair, x: ArrayLike, order: int = 0) -> ArrayLike:
    """b(x;l) - b(x;h) at the given derivative order."""
    return bp.evaluate(x, State.LOW, order) - bp.evaluate(x, State.HIGH, order)
