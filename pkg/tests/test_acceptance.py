# tests/test_acceptance.py
"""End-to-end properties over a seeded random-graph corpus and the two worked examples."""

import numpy as np
import pytest

from persuade_net.benefit.effort import (
    GameParams,
    curvature_R,
    curvature_R_tilde,
    e_star_derivatives,
    effort_and_value_grid,
    unilateral_effort,
    unilateral_effort_grid,
)
from persuade_net.benefit.families import ExponentialPair, PowerSaturatingPair, mixed_benefit
from persuade_net.game.aggregates import aggregate_benefit, benefit_bounds, effort_extremes
from persuade_net.game.equilibria import distributed_equilibrium, enumerate_equilibria
from persuade_net.network.graph import independence_number
from persuade_net.network.io import generate
from persuade_net.persuasion.envelope import concave_envelope, optimal_policy
from persuade_net.persuasion.objective import (
    Attitude,
    ObjectiveKind,
    ObjectiveSpec,
    belief_grid,
    reduced_objective,
    sweep,
)
from persuade_net.persuasion.policy import PolicyClass

CORPUS = [
    generate("erdos_renyi", 3 + i % 8, p=(0.3, 0.5, 0.7)[i % 3], seed=i)
    for i in range(50)
]

PARAMETERISATIONS = {
    "exp-example1": GameParams(ExponentialPair(H=0.9, L=0.5), cost=0.3, prior=0.5),
    "exp-narrow": GameParams(ExponentialPair(H=0.8, L=0.6), cost=0.2, prior=0.5),
    "power-shared": GameParams(PowerSaturatingPair(a_h=0.9, a_l=0.5, p=1.5), cost=0.2, prior=0.5),
    "power-split": GameParams(PowerSaturatingPair(a_h=0.9, a_l=0.5, p=1.5, p_l=2.0), cost=0.2, prior=0.5),
    "power-steep": GameParams(PowerSaturatingPair(a_h=0.7, a_l=0.3, p=2.5), cost=0.1, prior=0.5),
}


@pytest.fixture(scope="module")
def corpus_effort():
    gp = GameParams(ExponentialPair(H=0.9, L=0.5), cost=0.3, prior=0.5)
    return gp, unilateral_effort(gp, 0.5)


# --- Equilibrium aggregates over the corpus ---

def test_maximum_effort_is_independence_number(corpus_effort):
    _, e = corpus_effort
    for g in CORPUS:
        ext = effort_extremes(g, e, enumerate_equilibria(g, e))
        assert ext.max_effort == pytest.approx(independence_number(g) * e, rel=1e-9)


def test_minimum_effort_is_network_constant(corpus_effort):
    _, e = corpus_effort
    checked = 0
    for g in CORPUS:
        ext = effort_extremes(g, e, enumerate_equilibria(g, e))
        if ext.boundary_feasible:
            assert ext.min_effort == pytest.approx(ext.m_e, rel=1e-9)
            checked += 1
    assert checked > 0


def test_distributed_equilibrium_is_the_benefit_minimum(corpus_effort):
    gp, e = corpus_effort
    floor = mixed_benefit(gp.benefit, 0.5, e)
    for g in CORPUS:
        solve = distributed_equilibrium(g, e)
        if not solve.exists:
            continue
        value = aggregate_benefit(g, solve.profile.x, gp.benefit, 0.5)
        assert value == pytest.approx(g.n * floor, abs=1e-10)
        for profile in enumerate_equilibria(g, e).profiles:
            assert aggregate_benefit(g, profile.x, gp.benefit, 0.5) >= value - 1e-10


def test_benefit_bounds_hold_on_every_graph(corpus_effort):
    gp, e = corpus_effort
    for g in CORPUS:
        best = max(aggregate_benefit(g, p.x, gp.benefit, 0.5) for p in enumerate_equilibria(g, e).profiles)
        bounds = benefit_bounds(g, e, gp.benefit, 0.5, gp.cost)
        assert bounds.contains(best)
        assert bounds.lower8 - 1e-9 <= best <= bounds.upper8 + 1e-9


# --- Worked example with c < L ---

def test_example_one_curves():
    gp = PARAMETERISATIONS["exp-example1"]
    mus = belief_grid(201)
    efforts, safe = effort_and_value_grid(gp, mus)
    assert np.all(np.diff(efforts, 2) < 0)
    np.testing.assert_allclose(safe[1:-1], 0.7, atol=1e-10)


@pytest.mark.parametrize("attitude", list(Attitude))
def test_example_one_keeps_silent(attitude):
    gp = PARAMETERISATIONS["exp-example1"]
    spec = ObjectiveSpec(ObjectiveKind.AGGREGATE_EFFORT, attitude)
    ro = reduced_objective(spec, generate("path", 3), gp)
    env = concave_envelope(ro)
    assert optimal_policy(ro, env, 0.5).policy_class is PolicyClass.NO_DISCLOSURE

    result = sweep(ro, 0.5, points=101)
    best = result.argmax()
    assert abs(best.p_h + best.p_l - 1.0) <= 0.01 + 1e-12
    assert result.values.max() <= env.at(0.5) + 1e-9


# --- Worked example with c > L ---

def test_example_two_exaggerates():
    gp = GameParams(ExponentialPair(H=0.9, L=0.2), cost=0.3, prior=0.5)
    spec = ObjectiveSpec(ObjectiveKind.AGGREGATE_EFFORT, Attitude.OPTIMISTIC)
    ro = reduced_objective(spec, generate("path", 3), gp)
    env = concave_envelope(ro)
    best = optimal_policy(ro, env, 0.5)
    assert best.policy_class is PolicyClass.EXAGGERATION
    assert best.policy.p_h == pytest.approx(1.0) and 0.0 < best.policy.p_l < 1.0

    result = sweep(ro, 0.5, points=101)
    arg = result.argmax()
    assert min(arg.p_h, 1.0 - arg.p_h) <= 0.01 + 1e-12
    assert result.values.max() <= env.at(0.5) + 1e-9


# --- Derivative and curvature cross-checks ---

@pytest.mark.parametrize("name", sorted(PARAMETERISATIONS))
def test_effort_derivatives_match_finite_differences(name):
    gp = PARAMETERISATIONS[name]
    h = 1e-3
    for mu in np.linspace(0.01, 0.99, 101):
        lo, mid, hi = unilateral_effort_grid(gp, np.array([mu - h, mu, mu + h]))
        first, second = e_star_derivatives(gp, float(mu))
        assert first == pytest.approx((hi - lo) / (2 * h), rel=1e-5, abs=1e-6)
        assert second == pytest.approx((hi - 2 * mid + lo) / h**2, rel=1e-5, abs=1e-6)


@pytest.mark.parametrize(
    "name, objective",
    [
        ("exp-example1", ObjectiveKind.AGGREGATE_EFFORT),
        ("exp-narrow", ObjectiveKind.AGGREGATE_EFFORT),
        ("power-shared", ObjectiveKind.AGGREGATE_EFFORT),
        ("power-shared", ObjectiveKind.PROBABILITY_SAFE),
        ("power-steep", ObjectiveKind.PROBABILITY_SAFE),
    ],
)
def test_objective_curvature_follows_the_discriminant(name, objective):
    gp = PARAMETERISATIONS[name]
    spec = ObjectiveSpec(objective, Attitude.PESSIMISTIC)
    ro = reduced_objective(spec, generate("path", 3), gp, belief_grid(201))
    second = np.diff(ro.values, 2)
    discriminant = curvature_R if objective is ObjectiveKind.AGGREGATE_EFFORT else curvature_R_tilde
    for k, mu in enumerate(ro.grid[1:-1]):
        d = discriminant(gp, float(mu))
        if abs(d) > 1e-7:
            assert np.sign(second[k]) == -np.sign(d)
