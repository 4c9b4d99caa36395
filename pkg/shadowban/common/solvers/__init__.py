from typing import Optional

from shadowban.common.policy import BanBudget, EdgeCoefficients, ShadowBanPolicy
from .policy_solver import PolicySolver
from .knapsack_policy_solver import KnapsackPolicySolver
from .linprog_policy_solver import LinprogPolicySolver


def solve_policy(coeffs: EdgeCoefficients, budget: BanBudget, day: float = 0.0) -> ShadowBanPolicy:
    return KnapsackPolicySolver().solve(coeffs, budget, day)


def solve_policy_oracle(coeffs: EdgeCoefficients,
                        budget: BanBudget,
                        day: float = 0.0,
                        max_edges: Optional[int] = None) -> ShadowBanPolicy:
    return LinprogPolicySolver(max_edges).solve(coeffs, budget, day)


__all__ = ('PolicySolver', 'KnapsackPolicySolver', 'LinprogPolicySolver', 'solve_policy', 'solve_policy_oracle')
