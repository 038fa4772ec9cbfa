# persuade_net/models/run_config.py

from __future__ import annotations

import json
import logging
from pathlib import Path
from typing import Any, Dict, Literal, Optional, Union

import yaml
from pydantic import BaseModel, Field, ValidationError, model_validator

from persuade_net.benefit.effort import GameParams
from persuade_net.benefit.families import (
    BenefitPair,
    ExponentialPair,
    PowerSaturatingPair,
    TabulatedPair,
)
from persuade_net.exceptions import ConfigInvalid
from persuade_net.game.aggregates import SigmaRegime
from persuade_net.network.graph import Graph
from persuade_net.network.io import GENERATORS, generate, load_edge_list
from persuade_net.persuasion.objective import Attitude, ObjectiveKind, ObjectiveSpec

logger = logging.getLogger(__name__)


class GraphConfig(BaseModel):
    """Either an edge-list file or a named generator."""
    edge_list: Optional[Path] = Field(None, description="Path to a `u v` per line edge list.")
    one_based: bool = Field(False, description="Node ids in the edge list start at 1.")
    generator: Optional[Literal["path", "cycle", "star", "complete", "erdos_renyi"]] = Field(
        None, description=f"One of {GENERATORS}.", examples=["cycle"]
    )
    n: Optional[int] = Field(None, ge=1, description="Node count (required for generators).")
    p: float = Field(0.5, ge=0.0, le=1.0, description="Edge probability for erdos_renyi.")
    seed: int = Field(0, description="Seed for erdos_renyi.")

    @model_validator(mode="after")
    def _one_source(self) -> "GraphConfig":
        if (self.edge_list is None) == (self.generator is None):
            raise ValueError("Give exactly one of 'edge_list' or 'generator'.")
        if self.generator is not None and self.n is None:
            raise ValueError(f"Generator '{self.generator}' needs 'n'.")
        if self.edge_list is not None and not self.edge_list.exists():
            raise ValueError(f"Edge list not found at: {self.edge_list}")
        return self

    def build(self) -> Graph:
        if self.edge_list is not None:
            return load_edge_list(self.edge_list, n=self.n, one_based=self.one_based)
        return generate(self.generator, self.n, p=self.p, seed=self.seed)


class ExponentialConfig(BaseModel):
    family: Literal["exponential"] = "exponential"
    H: float = Field(..., gt=0.0, le=1.0, examples=[0.9])
    L: float = Field(..., gt=0.0, le=1.0, examples=[0.5])

    def build(self) -> BenefitPair:
        return ExponentialPair(H=self.H, L=self.L)


class PowerConfig(BaseModel):
    family: Literal["power"] = "power"
    a_h: float = Field(..., gt=0.0, le=1.0)
    a_l: float = Field(..., gt=0.0, le=1.0)
    p: float = Field(..., gt=0.0, description="Decay exponent of the high state (and the low state unless p_l is set).")
    p_l: Optional[float] = Field(None, gt=0.0, description="Decay exponent of the low state.")

    def build(self) -> BenefitPair:
        return PowerSaturatingPair(a_h=self.a_h, a_l=self.a_l, p=self.p, p_l=self.p_l)


class TabulatedConfig(BaseModel):
    family: Literal["tabulated"] = "tabulated"
    path: Path = Field(..., description="CSV with columns x,b_h,b_l.")

    @model_validator(mode="after")
    def _exists(self) -> "TabulatedConfig":
        if not self.path.exists():
            raise ValueError(f"Tabulated benefit CSV not found at: {self.path}")
        return self

    def build(self) -> BenefitPair:
        return TabulatedPair.from_csv(self.path)


BenefitConfig = Union[ExponentialConfig, PowerConfig, TabulatedConfig]


class ObjectiveConfig(BaseModel):
    objective: ObjectiveKind = ObjectiveKind.AGGREGATE_EFFORT
    attitude: Attitude = Attitude.OPTIMISTIC
    regime: SigmaRegime = SigmaRegime.TO_ZERO

    def to_spec(self) -> ObjectiveSpec:
        return ObjectiveSpec(self.objective, self.attitude, self.regime)


class GridConfig(BaseModel):
    belief: int = Field(2001, ge=11, description="Points on the belief grid [0, 1].")
    sweep: int = Field(101, ge=11, description="Points per axis of the policy sweep.")
    half: bool = Field(False, description="Evaluate only p_l + p_h <= 1 and mirror the rest.")


class ToleranceConfig(BaseModel):
    mis_cap: Optional[int] = Field(None, ge=1, description="Override for the independent-set node cap.")
    equilibria_cap: Optional[int] = Field(None, ge=1, description="Override for the enumeration node cap.")


class RunConfig(BaseModel):
    """A single run: the network, the benefit curves, cost, prior and what to optimise."""
    graph: GraphConfig
    benefit: BenefitConfig = Field(..., discriminator="family")
    cost: float = Field(..., gt=0.0, description="Marginal cost c of effort.")
    prior: float = Field(..., ge=0.0, le=1.0, description="Prior probability of the high state.")
    objective: ObjectiveConfig = Field(default_factory=ObjectiveConfig)
    grid: GridConfig = Field(default_factory=GridConfig)
    tolerances: ToleranceConfig = Field(default_factory=ToleranceConfig)
    out_dir: Path = Field(Path("out"), description="Directory for CSV, JSON and SVG outputs.")

    def game_params(self) -> GameParams:
        return GameParams(benefit=self.benefit.build(), cost=self.cost, prior=self.prior)


def _resolve_paths(raw: Dict[str, Any], base: Path) -> None:
    """Relative file paths in a config are taken relative to the config file."""
    graph = raw.get("graph") or {}
    if isinstance(graph.get("edge_list"), str) and not Path(graph["edge_list"]).is_absolute():
        graph["edge_list"] = str(base / graph["edge_list"])
    benefit = raw.get("benefit") or {}
    if isinstance(benefit.get("path"), str) and not Path(benefit["path"]).is_absolute():
        benefit["path"] = str(base / benefit["path"])


def validate_run_config(raw: Dict[str, Any]) -> RunConfig:
    try:
        return RunConfig.model_validate(raw)
    except ValidationError as e:
        raise ConfigInvalid(f"Invalid run config: {e}") from e


def load_run_config(path: Path) -> RunConfig:
    """Reads a JSON run config (YAML when the suffix is .yaml or .yml)."""
    path = Path(path)
    if not path.exists():
        raise ConfigInvalid(f"Run config not found at: {path}")
    text = path.read_text(encoding="utf-8")
    try:
        raw = yaml.safe_load(text) if path.suffix in (".yaml", ".yml") else json.loads(text)
    except (json.JSONDecodeError, yaml.YAMLError) as e:
        raise ConfigInvalid(f"Could not parse run config '{path}': {e}") from e
    if not isinstance(raw, dict):
        raise ConfigInvalid(f"Run config '{path}' must be a mapping at the top level.")
    _resolve_paths(raw, path.parent)
    config = validate_run_config(raw)
    logger.info(f"Loaded run config from {path}.")
    return config


def apply_overrides(
    config: RunConfig,
    mu: Optional[float] = None,
    grid: Optional[int] = None,
    out: Optional[Path] = None,
    half: bool = False,
    grid_field: Literal["belief", "sweep"] = "belief",
) -> RunConfig:
    """Applies command-line flags on top of a loaded config and validates again."""
    raw = config.model_dump(mode="python")
    if mu is not None:
        raw["prior"] = mu
    if grid is not None:
        raw["grid"][grid_field] = grid
    if half:
        raw["grid"]["half"] = True
    if out is not None:
        raw["out_dir"] = out
    return validate_run_config(raw)
