from typing import Optional

import numpy as np

from shadowban.common.package_utils import PackageUtils
from shadowban.common.policy import BanBudget, EdgeCoefficients, ShadowBanPolicy
from shadowban.common.solvers.policy_solver import PolicySolver
from shadowban.helpers.exceptions import OracleLimitException, ShadowbanException
from shadowban.helpers.settings import settings


class LinprogPolicySolver(PolicySolver):
    """Dense dual-simplex solve of the ban LP, used to cross-check the greedy solver."""

    def __init__(self, max_edges: Optional[int] = None):
        self.max_edges = settings.oracle_max_edges if max_edges is None else max_edges

    def solve(self, coeffs: EdgeCoefficients, budget: BanBudget, day: float = 0.0) -> ShadowBanPolicy:
        values = coeffs.values
        if len(values) > self.max_edges:
            raise OracleLimitException(len(values), self.max_edges)
        if len(values) == 0 or budget.s_edge == 0 or budget.s_network == 0:
            return ShadowBanPolicy(np.zeros(len(values)), budget, day)

        optimize = PackageUtils.load_package('scipy.optimize')
        # max sum(B (1 - u))  <=>  min B . u
        result = optimize.linprog(values,
                                  A_ub=np.ones((1, len(values))),
                                  b_ub=[budget.capacity(len(values))],
                                  bounds=[(0.0, budget.s_edge)] * len(values),
                                  method='highs-ds')
        if result.status != 0:
            raise ShadowbanException(f'linprog failed: {result.message}')
        return ShadowBanPolicy(np.clip(result.x, 0.0, budget.s_edge), budget, day)
