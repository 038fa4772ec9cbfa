# tests/test_persuasion.py

import math

import numpy as np
import pytest

from persuade_net.benefit.effort import GameParams, unilateral_effort
from persuade_net.benefit.families import PowerSaturatingPair, State, mixed_benefit
from persuade_net.exceptions import PriorOnBoundary
from persuade_net.game.aggregates import SigmaRegime
from persuade_net.persuasion.diagnostics import (
    SufficientVerdict,
    _mixed_discriminants,
    _single_discriminant,
    curvature_recommendation,
    sufficient_condition_report,
)
from persuade_net.persuasion.envelope import concave_envelope, optimal_policy
from persuade_net.persuasion.objective import (
    Attitude,
    ObjectiveKind,
    ObjectiveSpec,
    ReducedObjective,
    belief_grid,
    expected_objective,
    reduced_objective,
    stackelberg_value,
    sweep,
)
from persuade_net.persuasion.policy import (
    Policy,
    PolicyClass,
    classify_policy,
    posterior,
    posteriors,
    symmetry_check,
)
from persuade_net.services.worker_pool import WorkerPool

AE_OPT = ObjectiveSpec(ObjectiveKind.AGGREGATE_EFFORT, Attitude.OPTIMISTIC)
AE_PESS = ObjectiveSpec(ObjectiveKind.AGGREGATE_EFFORT, Attitude.PESSIMISTIC)
PS_PESS = ObjectiveSpec(ObjectiveKind.PROBABILITY_SAFE, Attitude.PESSIMISTIC)
PS_OPT_ONE = ObjectiveSpec(ObjectiveKind.PROBABILITY_SAFE, Attitude.OPTIMISTIC, SigmaRegime.TO_ONE)


# --- Policies and posteriors ---

def test_posterior_examples():
    high = posterior(Policy(p_l=1.0, p_h=1.0), 0.5, State.HIGH)
    assert high.belief == 1.0 and high.probability == pytest.approx(0.5)

    high = posterior(Policy(p_l=0.5, p_h=1.0), 0.4, State.HIGH)
    assert high.belief == pytest.approx(4.0 / 7.0)
    assert high.probability == pytest.approx(0.7)
    low = posterior(Policy(p_l=0.5, p_h=1.0), 0.4, State.LOW)
    assert low.belief == 0.0 and low.probability == pytest.approx(0.3)


def test_unused_signal_keeps_the_prior():
    low, high = posteriors(Policy(p_l=0.0, p_h=1.0), 0.3)
    assert not low.used and low.belief == 0.3
    assert high.probability == pytest.approx(1.0) and high.belief == pytest.approx(0.3)


def test_bayes_plausibility():
    rng = np.random.default_rng(0)
    for p_l, p_h, mu0 in rng.uniform(size=(10_000, 3)):
        low, high = posteriors(Policy(p_l=float(p_l), p_h=float(p_h)), float(mu0))
        assert low.probability + high.probability == pytest.approx(1.0, abs=1e-14)
        mean = low.probability * low.belief + high.probability * high.belief
        assert mean == pytest.approx(mu0, abs=1e-14)


def test_policy_bounds():
    with pytest.raises(ValueError):
        Policy(p_l=1.1, p_h=0.5)


@pytest.mark.parametrize(
    "p_l, p_h, expected",
    [
        (1.0, 1.0, PolicyClass.FULL_DISCLOSURE),
        (0.0, 0.0, PolicyClass.FULL_DISCLOSURE),
        (0.3, 0.7, PolicyClass.NO_DISCLOSURE),
        (0.0, 1.0, PolicyClass.NO_DISCLOSURE),
        (0.2, 1.0, PolicyClass.EXAGGERATION),
        (0.6, 0.0, PolicyClass.EXAGGERATION),
        (1.0, 0.4, PolicyClass.DOWNPLAY),
        (0.3, 0.4, PolicyClass.INTERMEDIATE),
    ],
)
def test_classify_policy(p_l, p_h, expected):
    assert classify_policy(Policy(p_l=p_l, p_h=p_h)) is expected


def test_mirrored_policies_agree():
    belief_gap, value_gap = symmetry_check(Policy(p_l=0.7, p_h=0.2), 0.4, lambda m: m * m)
    assert belief_gap <= 1e-12 and value_gap <= 1e-12
    assert symmetry_check(Policy(p_l=0.5, p_h=0.5), 0.4, math.sqrt) == (0.0, 0.0)


# --- Reduced objectives ---

def test_probability_safe_is_flat_for_exponentials(p3, example1):
    ro = reduced_objective(PS_PESS, p3, example1, belief_grid(201))
    np.testing.assert_allclose(ro.values, 0.7, atol=1e-10)
    assert ro.is_constant


def test_aggregate_effort_uses_independence_number(p3, example1):
    ro = reduced_objective(AE_OPT, p3, example1, belief_grid(201))
    assert ro.constants["alpha"] == 2.0
    assert ro.at(1.0) == pytest.approx(2.0 * math.log(3.0), abs=1e-12)
    pess = reduced_objective(AE_PESS, p3, example1, belief_grid(201))
    assert pess.constants["m"] == pytest.approx(1.0)
    np.testing.assert_allclose(pess.values * 2.0, ro.values)


def test_single_node_collapses_every_objective(single, example1):
    grid = belief_grid(101)
    opt = reduced_objective(AE_OPT, single, example1, grid)
    pess = reduced_objective(AE_PESS, single, example1, grid)
    np.testing.assert_allclose(opt.values, pess.values)
    safe = reduced_objective(PS_PESS, single, example1, grid)
    shifted = reduced_objective(PS_OPT_ONE, single, example1, grid)
    assert shifted.constants["f_G"] == 0.0
    np.testing.assert_allclose(shifted.values, safe.values)


def test_sigma_to_one_shift_on_bull(bull, power_params):
    grid = belief_grid(101)
    ro = reduced_objective(PS_OPT_ONE, bull, power_params, grid)
    assert ro.constants["alpha_w"] == 7.0
    assert ro.constants["f_G"] == pytest.approx(0.2 * 2.0 / 5.0)
    e = unilateral_effort(power_params, 0.5)
    expected = mixed_benefit(power_params.benefit, 0.5, e) + 0.08 * e
    assert ro.at(0.5) == pytest.approx(expected, rel=1e-10)


def test_reduced_objective_validation():
    with pytest.raises(ValueError):
        ReducedObjective(np.array([0.1, 1.0]), np.array([0.0, 1.0]))
    with pytest.raises(ValueError):
        ReducedObjective(np.array([0.0, 1.0]), np.array([0.0, np.nan]))


# --- Concave envelope and the optimal policy ---

def test_envelope_of_concave_curve_is_the_curve(p3, example1):
    ro = reduced_objective(AE_OPT, p3, example1)
    env = concave_envelope(ro)
    np.testing.assert_allclose(env.on(ro.grid), ro.values, atol=1e-12)


def test_envelope_of_convex_curve_is_the_chord():
    ro = ReducedObjective.from_function(lambda m: m * m, 101)
    env = concave_envelope(ro)
    assert list(env.indices) == [0, 100]
    np.testing.assert_allclose(env.on(ro.grid), ro.grid, atol=1e-12)

    best = optimal_policy(ro, env, 0.5)
    assert best.policy == Policy(p_l=1.0, p_h=1.0)
    assert best.policy_class is PolicyClass.FULL_DISCLOSURE
    assert best.value == pytest.approx(0.5)


def test_concave_objective_keeps_silent(p3, example1):
    ro = reduced_objective(AE_OPT, p3, example1)
    best = optimal_policy(ro, concave_envelope(ro), 0.5)
    assert best.degenerate
    assert best.policy_class is PolicyClass.NO_DISCLOSURE
    assert best.value == pytest.approx(ro.at(0.5))


def test_clamped_effort_leads_to_exaggeration(p3, example2):
    ro = reduced_objective(AE_OPT, p3, example2)
    best = optimal_policy(ro, concave_envelope(ro), 0.5)
    assert best.policy_class is PolicyClass.EXAGGERATION
    assert best.mu_low == 0.0
    assert best.mu_high == pytest.approx(0.537, abs=2e-3)
    assert best.policy.p_h == pytest.approx(1.0)
    assert best.policy.p_l == pytest.approx(0.138, abs=3e-3)


@pytest.mark.parametrize("mu0", [0.0, 1.0])
def test_boundary_prior_is_rejected(mu0):
    ro = ReducedObjective.from_function(lambda m: m * m, 11)
    with pytest.raises(PriorOnBoundary):
        optimal_policy(ro, concave_envelope(ro), mu0)


@pytest.mark.parametrize(
    "sign, mu0, expected, low, high",
    [
        (-1.0, 0.3, PolicyClass.EXAGGERATION, 0.0, 0.75),
        (1.0, 0.7, PolicyClass.DOWNPLAY, 0.25, 1.0),
    ],
)
def test_cubic_objectives(sign, mu0, expected, low, high):
    ro = ReducedObjective.from_function(lambda m: sign * (m - 0.5) ** 3, 2001)
    best = optimal_policy(ro, concave_envelope(ro), mu0)
    assert best.policy_class is expected
    assert best.mu_low == pytest.approx(low, abs=1e-3)
    assert best.mu_high == pytest.approx(high, abs=1e-3)
    assert max(best.policy.p_l, best.policy.p_h) == pytest.approx(1.0)
    assert min(best.policy.p_l, best.policy.p_h) == pytest.approx(6.0 / 7.0, abs=2e-3)

    # the recovered policy reproduces the split it came from
    post_low, post_high = posteriors(best.policy, mu0)
    assert post_low.belief == pytest.approx(low, abs=1e-3)
    assert post_high.belief == pytest.approx(high, abs=1e-3)


# --- Expected objective and the policy sweep ---

def test_expected_objective_extremes(p3, example1):
    ro = reduced_objective(AE_OPT, p3, example1, belief_grid(201))
    mu0 = 0.4
    assert expected_objective(Policy(p_l=0.0, p_h=1.0), ro, mu0) == pytest.approx(ro.at(mu0))
    full = mu0 * ro.at(1.0) + (1 - mu0) * ro.at(0.0)
    assert expected_objective(Policy(p_l=1.0, p_h=1.0), ro, mu0) == pytest.approx(full)


def test_no_policy_beats_the_envelope(p3, example2):
    ro = reduced_objective(AE_OPT, p3, example2, belief_grid(401))
    env = concave_envelope(ro)
    result = sweep(ro, 0.5, points=21)
    assert result.values.max() <= env.at(0.5) + 1e-9


def test_sweep_symmetry_and_half_mode(p3, example2):
    ro = reduced_objective(AE_OPT, p3, example2, belief_grid(201))
    full = sweep(ro, 0.5, points=21)
    np.testing.assert_allclose(full.values, full.values[::-1, ::-1], atol=1e-12)
    half = sweep(ro, 0.5, points=21, half=True)
    np.testing.assert_allclose(half.values, full.values, atol=1e-12)
    assert len(full.rows()) == 21 * 21


def test_sweep_is_thread_count_independent(p3, example1):
    ro = reduced_objective(AE_OPT, p3, example1, belief_grid(201))
    one = sweep(ro, 0.3, points=15, pool=WorkerPool(threads=1))
    many = sweep(ro, 0.3, points=15, pool=WorkerPool(threads=4))
    assert np.array_equal(one.values, many.values)


@pytest.mark.parametrize(
    "spec, graph",
    [(AE_OPT, "p3"), (AE_PESS, "p3"), (PS_PESS, "c4")],
)
def test_graph_constants_match_the_equilibria(spec, graph, example1, request):
    g = request.getfixturevalue(graph)
    full = Policy(p_l=1.0, p_h=1.0)
    ro = reduced_objective(spec, g, example1, belief_grid(201))
    shortcut = expected_objective(full, ro, example1.prior)
    assert stackelberg_value(spec, g, example1, full) == pytest.approx(shortcut, rel=1e-9)


# --- Curvature and sufficient conditions ---

def test_curvature_for_exponentials(example1, example2):
    assert curvature_recommendation(AE_OPT, example1).prediction is PolicyClass.NO_DISCLOSURE
    flat = curvature_recommendation(PS_PESS, example1)
    assert flat.indifferent
    clamped = curvature_recommendation(AE_OPT, example2)
    assert clamped.deferred and clamped.note


def test_curvature_for_power_pair_matches_the_envelope(p3, power_params):
    assert curvature_recommendation(AE_OPT, power_params).prediction is PolicyClass.NO_DISCLOSURE
    report = curvature_recommendation(PS_PESS, power_params)
    assert report.prediction is PolicyClass.FULL_DISCLOSURE

    ro = reduced_objective(PS_PESS, p3, power_params, belief_grid(401))
    best = optimal_policy(ro, concave_envelope(ro), power_params.prior)
    assert best.policy_class is PolicyClass.FULL_DISCLOSURE


# R < 0 at low beliefs and > 0 at high ones, with e* interior everywhere (c < b'(0;l))
def _single_flip_params(prior: float) -> GameParams:
    return GameParams(PowerSaturatingPair(a_h=0.7, a_l=0.1, p=1.0, p_l=2.0), cost=0.05, prior=prior)


@pytest.mark.parametrize("prior", [0.02, 0.115])
def test_single_flip_predicts_exaggeration_like_the_envelope(p3, prior):
    gp = _single_flip_params(prior)
    report = curvature_recommendation(AE_OPT, gp, belief_grid(201))
    assert report.prediction is PolicyClass.EXAGGERATION
    assert not report.deferred
    assert len(report.flips) == 1 and 0.05 < report.flips[0] < 0.2

    ro = reduced_objective(AE_OPT, p3, gp, belief_grid(2001))
    best = optimal_policy(ro, concave_envelope(ro), prior)
    assert best.policy_class is PolicyClass.EXAGGERATION


def test_mixed_discriminants_fall_back_to_the_envelope():
    # power pairs keep R~ < 0, so neither mixed pattern can hold
    report = curvature_recommendation(PS_OPT_ONE, _single_flip_params(0.1), belief_grid(201))
    assert report.discriminant == "R/R~"
    assert report.prediction is PolicyClass.INTERMEDIATE
    assert report.note


def test_mixed_discriminant_patterns():
    mus = np.linspace(0.1, 0.9, 9)
    rising = np.where(mus < 0.5, -1.0, 1.0)
    report = _mixed_discriminants(mus, rising, rising, 1e-7)
    assert report.prediction is PolicyClass.EXAGGERATION
    assert report.flips == [pytest.approx(0.5)]

    report = _mixed_discriminants(mus, -rising, -rising, 1e-7)
    assert report.prediction is PolicyClass.DOWNPLAY
    assert report.flips == [pytest.approx(0.5)]


def test_single_discriminant_downplay():
    mus = np.linspace(0.1, 0.9, 9)
    report = _single_discriminant(mus, np.where(mus < 0.5, 1.0, -1.0), 1e-7, "R")
    assert report.prediction is PolicyClass.DOWNPLAY
    assert report.positive == 4 and report.negative == 5
    assert report.flips == [pytest.approx(0.45)]


def test_sufficient_conditions(example1, power_params):
    assert sufficient_condition_report(example1).verdict is SufficientVerdict.NO_INFORMATION
    report = sufficient_condition_report(power_params)
    assert report.verdict is SufficientVerdict.NO_INFORMATION
    assert report.y_max < 0 < report.z_min
    degenerate = sufficient_condition_report(example1, np.array([800.0]))
    assert degenerate.verdict is SufficientVerdict.DEGENERATE
