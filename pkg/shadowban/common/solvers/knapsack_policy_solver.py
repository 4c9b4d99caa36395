import numpy as np

from shadowban.common.policy import BanBudget, EdgeCoefficients, ShadowBanPolicy
from shadowban.common.solvers.policy_solver import PolicySolver
from shadowban.helpers.logger import logger


class KnapsackPolicySolver(PolicySolver):
    """Exact greedy for the ban LP.

    One budget row plus box constraints make the LP a fractional knapsack: fill
    the most negative B first, each up to s_edge, and give the leftover budget to
    the next edge. Edges with B >= 0 are never banned.
    """

    def solve(self, coeffs: EdgeCoefficients, budget: BanBudget, day: float = 0.0) -> ShadowBanPolicy:
        values = coeffs.values
        u = np.zeros(len(values))
        capacity = budget.capacity(len(values))
        if budget.s_edge == 0 or capacity == 0:
            return ShadowBanPolicy(u, budget, day)

        candidates = np.flatnonzero(values < 0)
        if len(candidates) == 0:
            return ShadowBanPolicy(u, budget, day)
        # stable sort keeps ascending edge index among equal B
        order = candidates[np.argsort(values[candidates], kind='stable')]

        if capacity >= len(order) * budget.s_edge:
            full = len(order)
        else:
            full = int(capacity // budget.s_edge)
        u[order[:full]] = budget.s_edge
        if full < len(order):
            remainder = min(budget.s_edge, max(0.0, capacity - full * budget.s_edge))
            u[order[full]] = remainder
        logger.debug(f'day {day}: {len(candidates)} edges with B < 0, {full} banned at full strength')
        return ShadowBanPolicy(u, budget, day)
