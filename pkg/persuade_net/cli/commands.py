# persuade_net/cli/commands.py

from __future__ import annotations

import logging
from collections import Counter
from pathlib import Path
from typing import Dict, Optional

import numpy as np

from persuade_net.benefit.effort import GameParams, effort_and_value_grid, sigma_b_at, unilateral_effort
from persuade_net.exceptions import CapExceeded
from persuade_net.game.aggregates import (
    aggregate_benefit,
    aggregate_effort,
    benefit_bounds,
    effort_extremes,
)
from persuade_net.game.equilibria import classify_equilibrium, enumerate_equilibria
from persuade_net.models.reports import (
    CurvatureSummary,
    EquilibriaSummary,
    GraphConstants,
    PolicyReport,
    PosteriorReport,
    ReproduceMetadata,
    SufficientSummary,
)
from persuade_net.models.run_config import RunConfig, validate_run_config
from persuade_net.network.graph import (
    Graph,
    degree_plus_one_weights,
    independence_number,
    network_constant_m,
    weighted_max_independent_set,
)
from persuade_net.persuasion.diagnostics import curvature_recommendation, sufficient_condition_report
from persuade_net.persuasion.envelope import concave_envelope, optimal_policy
from persuade_net.persuasion.objective import (
    Attitude,
    ObjectiveKind,
    ObjectiveSpec,
    SweepResult,
    belief_grid,
    reduced_objective,
    sweep,
)
from persuade_net.persuasion.policy import posteriors, symmetry_check
from persuade_net.services import svg
from persuade_net.services.output_writer import OutputWriter
from persuade_net.services.worker_pool import WorkerPool

logger = logging.getLogger(__name__)

# --- Example Presets ---
# Example 1 has c < L, so e* is interior for every belief; example 2 has c > L
# and e* is clamped at zero for low beliefs.
PRESETS: Dict[int, Dict[str, float]] = {
    1: {"H": 0.9, "L": 0.5, "cost": 0.3, "prior": 0.5},
    2: {"H": 0.9, "L": 0.2, "cost": 0.3, "prior": 0.5},
}
PRESET_GRAPH = {"generator": "path", "n": 3}


def graph_constants(g: Graph, mis_cap: Optional[int] = None) -> GraphConstants:
    _, alpha_w = weighted_max_independent_set(g, degree_plus_one_weights(g), mis_cap)
    return GraphConstants(
        n=g.n,
        edges=len(g.edges),
        alpha=independence_number(g, mis_cap),
        m=network_constant_m(g),
        alpha_w=alpha_w,
    )


def cmd_equilibria(config: RunConfig, pool: Optional[WorkerPool] = None) -> EquilibriaSummary:
    """Enumerates every equilibrium at the prior and writes them with their classes and aggregates."""
    g = config.graph.build()
    gp = config.game_params()
    mu = gp.prior
    e = unilateral_effort(gp, mu)
    caps = config.tolerances
    logger.info(f"Enumerating equilibria on n={g.n}, |E|={len(g.edges)} at belief {mu} (e*={e:.9g}).")

    eq = enumerate_equilibria(g, e, cap=caps.equilibria_cap, pool=pool)
    rows, classes, benefits = [], Counter(), []
    for profile in eq.profiles:
        cls = classify_equilibrium(g, profile.x, e)
        classes[cls.value] += 1
        benefit = aggregate_benefit(g, profile.x, gp.benefit, mu)
        benefits.append(benefit)
        rows.append([cls, *profile.x, aggregate_effort(profile.x), benefit])

    writer = OutputWriter(config.out_dir)
    header = ["class", *[f"x_{k}" for k in range(g.n)], "aggregate_effort", "aggregate_benefit"]
    writer.write_csv("equilibria.csv", header, rows)

    extremes = effort_extremes(g, e, eq, cap=caps.mis_cap)
    bounds = benefit_bounds(g, e, gp.benefit, mu, gp.cost, cap=caps.mis_cap)
    summary = EquilibriaSummary(
        prior=mu,
        unilateral_effort=e,
        constants=graph_constants(g, caps.mis_cap),
        count=len(eq.profiles),
        classes=dict(sorted(classes.items())),
        max_aggregate_effort=extremes.max_effort,
        min_aggregate_effort=extremes.min_effort,
        boundary_feasible=extremes.boundary_feasible,
        skipped_supports=eq.skipped_supports,
        parametric_note=eq.parametric_note,
        benefit_bounds={
            "lower8": bounds.lower8, "upper8": bounds.upper8,
            "lower9": bounds.lower9, "upper9": bounds.upper9, "sigma_b": bounds.sigma_b,
        },
        max_aggregate_benefit=max(benefits),
    )
    writer.write_json("equilibria_summary.json", summary)
    return summary


def _posterior_report(g: Graph, gp: GameParams, belief: float, probability: float, mis_cap) -> PosteriorReport:
    e = unilateral_effort(gp, belief)
    report = PosteriorReport(belief=belief, probability=probability, unilateral_effort=e)
    if e <= 0:
        return report
    if g.n >= 2:
        report.sigma_b = sigma_b_at(gp.benefit, belief, e, g.n, gp.cost)
    try:
        bounds = benefit_bounds(g, e, gp.benefit, belief, gp.cost, cap=mis_cap)
    except CapExceeded as err:
        # the bounds need alpha_w, out of reach on graphs this large
        logger.info(f"Benefit bounds skipped at belief {belief:.6g}: {err}")
        return report
    report.benefit_bounds = {
        "lower8": bounds.lower8, "upper8": bounds.upper8,
        "lower9": bounds.lower9, "upper9": bounds.upper9,
    }
    return report


def cmd_policy(config: RunConfig) -> PolicyReport:
    """Builds the reduced objective and its envelope, then reports the optimal policy and the diagnostics."""
    g = config.graph.build()
    gp = config.game_params()
    spec = config.objective.to_spec()
    mis_cap = config.tolerances.mis_cap

    ro = reduced_objective(spec, g, gp, belief_grid(config.grid.belief), cap=mis_cap)
    env = concave_envelope(ro)
    best = optimal_policy(ro, env, gp.prior)

    writer = OutputWriter(config.out_dir)
    enveloped = env.on(ro.grid)
    writer.write_csv("envelope.csv", ["mu", "objective", "envelope"], zip(ro.grid, ro.values, enveloped))
    writer.write_text("envelope.svg", svg.line_chart(
        ro.grid, [("objective", ro.values), ("envelope", enveloped)],
        title=f"{spec.label}: objective and concave envelope", marker=gp.prior,
    ))

    used = [p for p in posteriors(best.policy, gp.prior) if p.used]
    posterior_reports = [_posterior_report(g, gp, p.belief, p.probability, mis_cap) for p in used]

    curvature = curvature_recommendation(spec, gp, belief_grid(config.grid.sweep))
    sufficient = sufficient_condition_report(gp)
    belief_gap, value_gap = symmetry_check(best.policy, gp.prior, ro.at)

    report = PolicyReport(
        objective=spec.label,
        prior=gp.prior,
        p_l=best.policy.p_l,
        p_h=best.policy.p_h,
        value=best.value,
        policy_class=best.policy_class.value,
        indifferent=best.indifferent,
        posteriors=posterior_reports,
        constants=ro.constants,
        assumptions={
            "a1": float(gp.a1_holds),
            "a2": float(gp.a2_holds),
            "clamp_kink": gp.clamp_kink,
        },
        curvature=CurvatureSummary(
            prediction=curvature.prediction.value,
            discriminant=curvature.discriminant,
            positive=curvature.positive,
            negative=curvature.negative,
            zero=curvature.zero,
            flips=curvature.flips,
            indifferent=curvature.indifferent,
            deferred=curvature.deferred,
            note=curvature.note,
        ),
        sufficient=SufficientSummary(
            verdict=sufficient.verdict.value,
            y_range=[_finite_or_none(sufficient.y_min), _finite_or_none(sufficient.y_max)],
            z_range=[_finite_or_none(sufficient.z_min), _finite_or_none(sufficient.z_max)],
            message=sufficient.message,
        ),
        symmetry={"posterior": belief_gap, "objective": value_gap},
    )
    writer.write_json("policy.json", report)
    return report


def _finite_or_none(x: float) -> Optional[float]:
    return float(x) if np.isfinite(x) else None


def cmd_sweep(config: RunConfig, pool: Optional[WorkerPool] = None) -> SweepResult:
    """Expected objective over the (p_l, p_h) grid as CSV and heat map."""
    g = config.graph.build()
    gp = config.game_params()
    spec = config.objective.to_spec()
    ro = reduced_objective(spec, g, gp, belief_grid(config.grid.belief), cap=config.tolerances.mis_cap)
    result = sweep(ro, gp.prior, config.grid.sweep, half=config.grid.half, pool=pool)

    writer = OutputWriter(config.out_dir)
    writer.write_csv("sweep.csv", ["p_l", "p_h", "expected_objective", "class"], result.rows())
    best = result.argmax()
    writer.write_text("sweep.svg", svg.heat_map(
        result.axis, result.values,
        title=f"{spec.label} at prior {gp.prior:g}", optimum=(best.p_l, best.p_h),
    ))
    logger.info(f"Sweep argmax at (p_l={best.p_l:.4g}, p_h={best.p_h:.4g}).")
    return result


def preset_config(example: int, out_dir: Path, belief: Optional[int] = None, sweep_points: Optional[int] = None) -> RunConfig:
    if example not in PRESETS:
        raise ValueError(f"Unknown example {example}; expected one of {sorted(PRESETS)}.")
    preset = PRESETS[example]
    grid = {}
    if belief is not None:
        grid["belief"] = belief
    if sweep_points is not None:
        grid["sweep"] = sweep_points
    return validate_run_config({
        "graph": dict(PRESET_GRAPH),
        "benefit": {"family": "exponential", "H": preset["H"], "L": preset["L"]},
        "cost": preset["cost"],
        "prior": preset["prior"],
        "objective": {"objective": ObjectiveKind.AGGREGATE_EFFORT.value, "attitude": Attitude.OPTIMISTIC.value},
        "grid": grid,
        "out_dir": str(out_dir),
    })


def cmd_reproduce(example: int, out_dir: Path, belief: Optional[int] = None, sweep_points: Optional[int] = None) -> ReproduceMetadata:
    """
    Regenerates the paired curves of a built-in example: e*(mu) next to the
    probability of staying safe, the objective with its envelope, and the
    policy sweep.
    """
    config = preset_config(example, out_dir, belief, sweep_points)
    g = config.graph.build()
    gp = config.game_params()
    spec = ObjectiveSpec(ObjectiveKind.AGGREGATE_EFFORT, Attitude.OPTIMISTIC)
    writer = OutputWriter(config.out_dir)

    mus = belief_grid(config.grid.belief)
    efforts, safe = effort_and_value_grid(gp, mus)
    writer.write_csv(
        "unilateral_effort.csv", ["mu", "unilateral_effort", "safe_probability"], zip(mus, efforts, safe)
    )
    writer.write_text("unilateral_effort.svg", svg.line_chart(
        mus, [("e*(mu)", efforts)], title=f"Example {example}: unilateral effort",
    ))
    writer.write_text("safe_probability.svg", svg.line_chart(
        mus, [("b(e*(mu); mu)", safe)], title=f"Example {example}: probability of staying safe",
    ))

    ro = reduced_objective(spec, g, gp, mus)
    env = concave_envelope(ro)
    best = optimal_policy(ro, env, gp.prior)
    writer.write_csv("envelope.csv", ["mu", "objective", "envelope"], zip(ro.grid, ro.values, env.on(ro.grid)))

    result = sweep(ro, gp.prior, config.grid.sweep)
    writer.write_csv("sweep.csv", ["p_l", "p_h", "expected_objective", "class"], result.rows())
    arg = result.argmax()
    writer.write_text("sweep.svg", svg.heat_map(
        result.axis, result.values, title=f"Example {example}: expected aggregate effort",
        optimum=(arg.p_l, arg.p_h),
    ))

    preset = PRESETS[example]
    metadata = ReproduceMetadata(
        example=example,
        H=preset["H"],
        L=preset["L"],
        cost=preset["cost"],
        prior=preset["prior"],
        constants=graph_constants(g),
        policy_class=best.policy_class.value,
        files=[p.name for p in writer.written] + ["metadata.json"],
    )
    writer.write_json("metadata.json", metadata)
    return metadata
