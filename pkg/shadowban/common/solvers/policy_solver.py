import abc

from shadowban.common.policy import BanBudget, EdgeCoefficients, ShadowBanPolicy


class PolicySolver(abc.ABC):
    """Maximizes sum(B * (1 - u)) s.t. sum(u) <= s_network * |E| and 0 <= u <= s_edge."""

    @abc.abstractmethod
    def solve(self, coeffs: EdgeCoefficients, budget: BanBudget, day: float = 0.0) -> ShadowBanPolicy:
        pass
