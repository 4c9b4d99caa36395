from typing import Optional, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from shadowban.common.dynamics import DynamicsParams, shift_function
from shadowban.common.network import DirectedNetwork, OpinionVector
from shadowban.common.objectives import ObjectiveKind, reward_gradient
from shadowban.helpers.exceptions import InvalidArgumentException, ValidationException
from shadowban.helpers.settings import settings


class BanBudget(BaseModel):
    model_config = ConfigDict(frozen=True, extra='forbid')

    s_network: float = Field(0.05, ge=0, le=1, allow_inf_nan=False)
    s_edge: float = Field(1.0, ge=0, le=1, allow_inf_nan=False)

    def capacity(self, edge_count: int) -> float:
        return self.s_network * edge_count


class EdgeCoefficients:
    """Per-edge weights B of the ban LP, aligned with the network's edge order."""

    def __init__(self, values):
        values = np.array(values, dtype=np.float64).reshape(-1)
        if not np.all(np.isfinite(values)):
            raise ValidationException('edge coefficients must be finite')
        values.setflags(write=False)
        self.values = values

    def __len__(self):
        return len(self.values)


class ShadowBanPolicy:
    def __init__(self, strengths, budget: BanBudget, day: float = 0.0):
        strengths = np.array(strengths, dtype=np.float64).reshape(-1)
        strengths.setflags(write=False)
        self.strengths = strengths
        self.budget = budget
        self.day = float(day)

    @classmethod
    def zero(cls, edge_count: int, budget: Optional[BanBudget] = None, day: float = 0.0) -> 'ShadowBanPolicy':
        return cls(np.zeros(edge_count), budget or BanBudget(s_network=0.0, s_edge=0.0), day)

    def __len__(self):
        return len(self.strengths)

    @property
    def mean_strength(self) -> float:
        return float(self.strengths.mean()) if len(self.strengths) else 0.0

    @property
    def banned_edges(self) -> np.ndarray:
        return np.flatnonzero(self.strengths > 0)

    @property
    def banned_count(self) -> int:
        return int(np.count_nonzero(self.strengths > 0))

    def validate(self) -> 'ShadowBanPolicy':
        u = self.strengths
        if not np.all(np.isfinite(u)):
            raise ValidationException('ban strengths must be finite')
        if len(u) and (u.min() < 0 or u.max() > self.budget.s_edge):
            raise ValidationException(f'ban strengths must lie in [0, {self.budget.s_edge}]')
        total = float(u.sum())
        capacity = self.budget.capacity(len(u))
        if total > capacity + settings.feasibility_slack:
            raise ValidationException(f'total ban strength {total} exceeds the budget {capacity}')
        return self


def compute_coefficients(network: DirectedNetwork,
                         opinions: OpinionVector,
                         kind: ObjectiveKind,
                         params: DynamicsParams) -> EdgeCoefficients:
    theta = np.asarray(opinions, dtype=np.float64)
    if len(theta) != network.vertex_count:
        raise InvalidArgumentException(f'expected {network.vertex_count} opinions, got {len(theta)}')
    gradient = reward_gradient(kind, theta)
    pulls = shift_function(theta[network.sources] - theta[network.targets], params)
    return EdgeCoefficients(gradient[network.targets] * network.rates * pulls)


def policy_objective(coeffs: EdgeCoefficients, policy: Union[ShadowBanPolicy, np.ndarray]) -> float:
    """The LP objective sum(B * (1 - u)), which equals dr/dt under the policy."""
    u = np.asarray(getattr(policy, 'strengths', policy), dtype=np.float64)
    return float(np.dot(coeffs.values, 1.0 - u))


def realize_stochastic(policy,
                       seed: Union[int, np.random.Generator],
                       edge_ids: Optional[np.ndarray] = None) -> np.ndarray:
    """Draw which posts get through: True means visible, hidden with probability u."""
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    u = np.asarray(getattr(policy, 'strengths', policy), dtype=np.float64)
    if edge_ids is not None:
        u = u[edge_ids]
    return rng.random(len(u)) >= u
