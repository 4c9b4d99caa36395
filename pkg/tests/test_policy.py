import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from shadowban.common.objectives import ObjectiveKind
from shadowban.common.policy import (BanBudget, EdgeCoefficients, ShadowBanPolicy, compute_coefficients,
                                     policy_objective, realize_stochastic)
from shadowban.common.solvers import (KnapsackPolicySolver, LinprogPolicySolver, PolicySolver, solve_policy,
                                      solve_policy_oracle)
from shadowban.helpers.exceptions import OracleLimitException, ValidationException

coefficient_arrays = arrays(np.float64, st.integers(0, 60), elements=st.floats(-1.0, 1.0))
fractions = st.floats(0.0, 1.0)


def test_knapsack_solver_is_a_policy_solver():
    assert isinstance(KnapsackPolicySolver(), PolicySolver)
    assert isinstance(LinprogPolicySolver(), PolicySolver)


def test_fills_most_negative_first():
    coeffs = EdgeCoefficients([-0.2, 0.5, -0.9, -0.4, 0.0])
    policy = solve_policy(coeffs, BanBudget(s_network=0.3, s_edge=0.6))
    # capacity 1.5: two full edges of 0.6 and 0.3 left for the third
    assert policy.strengths.tolist() == pytest.approx([0.3, 0.0, 0.6, 0.6, 0.0])


def test_ties_broken_by_edge_index():
    coeffs = EdgeCoefficients([-1.0, -1.0, -1.0, -1.0])
    policy = solve_policy(coeffs, BanBudget(s_network=0.5, s_edge=1.0))
    assert policy.strengths.tolist() == [1.0, 1.0, 0.0, 0.0]


def test_never_bans_non_negative_edges():
    coeffs = EdgeCoefficients([0.0, 0.3, -0.1])
    policy = solve_policy(coeffs, BanBudget(s_network=1.0, s_edge=1.0))
    assert policy.strengths.tolist() == [0.0, 0.0, 1.0]


@pytest.mark.parametrize('budget', (BanBudget(s_network=0.0, s_edge=1.0), BanBudget(s_network=0.5, s_edge=0.0)))
def test_zero_budget_gives_zero_policy(budget):
    policy = solve_policy(EdgeCoefficients([-1.0, -0.5]), budget)
    assert policy.banned_count == 0
    assert policy.mean_strength == 0.0


def test_empty_network():
    policy = solve_policy(EdgeCoefficients([]), BanBudget())
    assert len(policy) == 0
    assert policy.validate() is policy


def test_budget_ranges():
    with pytest.raises(ValueError):
        BanBudget(s_network=1.5)
    with pytest.raises(ValueError):
        BanBudget(s_edge=-0.1)


def test_non_finite_coefficients():
    with pytest.raises(ValidationException):
        EdgeCoefficients([0.1, float('nan')])


def test_validate_rejects_infeasible_policy():
    with pytest.raises(ValidationException):
        ShadowBanPolicy([0.9, 0.9], BanBudget(s_network=0.5, s_edge=1.0)).validate()
    with pytest.raises(ValidationException):
        ShadowBanPolicy([0.7, 0.0], BanBudget(s_network=0.5, s_edge=0.5)).validate()
    with pytest.raises(ValidationException):
        ShadowBanPolicy([-0.1, 0.0], BanBudget()).validate()


def test_oracle_matches_greedy_on_random_instances():
    pytest.importorskip('scipy')
    rng = np.random.default_rng(2024)
    for _ in range(500):
        coeffs = EdgeCoefficients(rng.uniform(-1.0, 1.0, int(rng.integers(1, 101))))
        budget = BanBudget(s_network=float(rng.random()), s_edge=float(rng.random()))
        greedy = solve_policy(coeffs, budget).validate()
        oracle = solve_policy_oracle(coeffs, budget)
        assert policy_objective(coeffs, greedy) == pytest.approx(policy_objective(coeffs, oracle),
                                                                 rel=1e-9, abs=1e-9)


def test_oracle_refuses_large_instances():
    with pytest.raises(OracleLimitException):
        solve_policy_oracle(EdgeCoefficients(np.full(11, -1.0)), BanBudget(), max_edges=10)


def test_oracle_edge_limit_from_environment(monkeypatch):
    monkeypatch.setenv('SHADOWBAN_ORACLE_MAX_EDGES', '5')
    with pytest.raises(OracleLimitException) as e:
        solve_policy_oracle(EdgeCoefficients(np.full(6, -1.0)), BanBudget())
    assert e.value.max_edges == 5


@given(coefficient_arrays, fractions, fractions)
def test_greedy_policy_is_feasible(values, s_network, s_edge):
    coeffs = EdgeCoefficients(values)
    policy = solve_policy(coeffs, BanBudget(s_network=s_network, s_edge=s_edge))
    u = policy.strengths
    assert np.all(u >= 0)
    assert np.all(u <= s_edge)
    assert u.sum() <= s_network * len(u) + 1e-9
    assert np.all(values[u > 0] < 0)
    policy.validate()


@given(coefficient_arrays, fractions, fractions, fractions)
def test_objective_monotone_in_budget(values, s_low, s_high, s_edge):
    coeffs = EdgeCoefficients(values)
    low, high = sorted((s_low, s_high))
    tight = policy_objective(coeffs, solve_policy(coeffs, BanBudget(s_network=low, s_edge=s_edge)))
    loose = policy_objective(coeffs, solve_policy(coeffs, BanBudget(s_network=high, s_edge=s_edge)))
    assert loose >= tight - 1e-9
    narrow = policy_objective(coeffs, solve_policy(coeffs, BanBudget(s_network=s_edge, s_edge=low)))
    wide = policy_objective(coeffs, solve_policy(coeffs, BanBudget(s_network=s_edge, s_edge=high)))
    assert wide >= narrow - 1e-9


@settings(max_examples=50)
@given(coefficient_arrays, fractions, fractions, st.sampled_from([2.0, 8.0, 1024.0]))
def test_positive_scaling_leaves_policy_unchanged(values, s_network, s_edge, factor):
    budget = BanBudget(s_network=s_network, s_edge=s_edge)
    base = solve_policy(EdgeCoefficients(values), budget)
    scaled = solve_policy(EdgeCoefficients(values * factor), budget)
    assert np.array_equal(base.strengths, scaled.strengths)


def test_path_day_zero_bans_upward_edges(path11, path_params, wide_budget):
    network, opinions = path11
    coeffs = compute_coefficients(network, opinions, ObjectiveKind.MaximizeMean, path_params)
    policy = solve_policy(coeffs, wide_budget)
    banned = {(int(network.sources[e]), int(network.targets[e])) for e in policy.banned_edges}
    assert banned == {(i, i + 1) for i in range(10)}
    assert np.all(policy.strengths[policy.banned_edges] == 1.0)


def test_variance_gradient_choice_does_not_change_policy(path11, path_params, wide_budget):
    network, opinions = path11
    coeffs = compute_coefficients(network, opinions, ObjectiveKind.MinimizeVariance, path_params)
    # a positive rescaling of B, such as another variance normalisation, selects the same edges
    rescaled = EdgeCoefficients(coeffs.values * 0.5)
    assert np.array_equal(solve_policy(coeffs, wide_budget).strengths,
                          solve_policy(rescaled, wide_budget).strengths)


def test_policy_objective_values():
    coeffs = EdgeCoefficients([-1.0, 2.0])
    assert policy_objective(coeffs, np.array([1.0, 0.0])) == 2.0
    assert policy_objective(coeffs, np.zeros(2)) == 1.0


def test_realize_stochastic_extremes():
    visible = realize_stochastic(np.array([0.0, 1.0, 0.0, 1.0]), seed=3)
    assert visible.tolist() == [True, False, True, False]


def test_realize_stochastic_frequency():
    visible = realize_stochastic(np.full(100_000, 0.3), seed=9)
    assert visible.mean() == pytest.approx(0.7, abs=0.01)


def test_realize_stochastic_subset_and_determinism():
    policy = ShadowBanPolicy([0.2, 0.9, 0.5], BanBudget(s_network=1.0, s_edge=1.0))
    first = realize_stochastic(policy, 5, edge_ids=np.array([2, 0]))
    second = realize_stochastic(policy, np.random.default_rng(5), edge_ids=np.array([2, 0]))
    assert len(first) == 2
    assert np.array_equal(first, second)
