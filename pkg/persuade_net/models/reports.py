# persuade_net/models/reports.py

from typing import Dict, List, Optional

from pydantic import BaseModel, Field


class GraphConstants(BaseModel):
    """Graph quantities the equilibrium aggregates reduce to."""
    n: int
    edges: int
    alpha: Optional[int] = Field(None, description="Independence number alpha(G).")
    m: Optional[float] = Field(None, description="Sum of the entries of (A+I)^{-1}.")
    alpha_w: Optional[float] = Field(None, description="Maximum (deg+1)-weighted independent set weight.")


class EquilibriaSummary(BaseModel):
    """Written next to the equilibria CSV."""
    prior: float
    unilateral_effort: float
    constants: GraphConstants
    count: int
    classes: Dict[str, int]
    max_aggregate_effort: float
    min_aggregate_effort: float
    boundary_feasible: bool = Field(
        description="The (A+I)x = e·1 solve has no negative entries and is itself an equilibrium."
    )
    skipped_supports: int
    parametric_note: Optional[str] = None
    benefit_bounds: Dict[str, float]
    max_aggregate_benefit: float


class PosteriorReport(BaseModel):
    belief: float
    probability: float
    unilateral_effort: float
    sigma_b: Optional[float] = Field(None, description="Benefit spread ratio at this belief; null when e* is clamped or n = 1.")
    benefit_bounds: Optional[Dict[str, float]] = None


class CurvatureSummary(BaseModel):
    prediction: str
    discriminant: str
    positive: int
    negative: int
    zero: int
    flips: List[float]
    indifferent: bool
    deferred: bool
    note: Optional[str] = None


class SufficientSummary(BaseModel):
    verdict: str
    y_range: List[Optional[float]]
    z_range: List[Optional[float]]
    message: Optional[str] = None


class PolicyReport(BaseModel):
    """The JSON report of `persuade-net policy`."""
    objective: str
    prior: float
    p_l: float
    p_h: float
    value: float
    policy_class: str
    indifferent: bool
    posteriors: List[PosteriorReport]
    constants: Dict[str, float]
    assumptions: Dict[str, Optional[float]] = Field(
        description="a1/a2 flags as 0/1 and the clamp kink belief, if any."
    )
    curvature: CurvatureSummary
    sufficient: SufficientSummary
    symmetry: Dict[str, float]


class ReproduceMetadata(BaseModel):
    """Preset parameters and graph constants behind a reproduced example."""
    example: int
    H: float
    L: float
    cost: float
    prior: float
    constants: GraphConstants
    policy_class: str
    files: List[str]
