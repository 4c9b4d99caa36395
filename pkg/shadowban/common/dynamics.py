import math
from typing import Optional, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from shadowban.common.network import DirectedNetwork, OpinionVector, as_opinions
from shadowban.helpers.exceptions import InvalidArgumentException, StabilityException

# dt * omega * (largest incoming rate sum) must stay at or below this
STABILITY_LIMIT = 0.5


class DynamicsParams(BaseModel):
    """Bounded-confidence parameters shared by every user."""
    model_config = ConfigDict(frozen=True, extra='forbid')

    omega: float = Field(0.003, ge=0, allow_inf_nan=False)
    epsilon: float = Field(0.1, ge=0, allow_inf_nan=False)
    dt_max: float = Field(1.0, gt=0, allow_inf_nan=False)


def shift_function(x, params: DynamicsParams):
    """Opinion shift caused by one post whose opinion differs from the reader's by x."""
    values = np.asarray(x, dtype=np.float64)
    shifted = np.where(np.abs(values) <= params.epsilon, params.omega * values, 0.0)
    if shifted.ndim == 0:
        return float(shifted)
    return shifted


def ban_strengths(policy, edge_count: int) -> Optional[np.ndarray]:
    """Per-edge u of a policy, a raw array, or None for "no ban"."""
    if policy is None:
        return None
    strengths = np.asarray(getattr(policy, 'strengths', policy), dtype=np.float64).reshape(-1)
    if len(strengths) != edge_count:
        raise InvalidArgumentException(f'policy has {len(strengths)} strengths for {edge_count} edges')
    return strengths


def effective_rates(network: DirectedNetwork, policy) -> np.ndarray:
    strengths = ban_strengths(policy, network.edge_count)
    if strengths is None:
        return network.rates
    return network.rates * (1.0 - strengths)


def derivative_from_rates(network: DirectedNetwork, opinions: np.ndarray, rates: np.ndarray,
                          params: DynamicsParams) -> np.ndarray:
    # bincount accumulates in edge order, so the sum per vertex is reproducible
    pulls = shift_function(opinions[network.sources] - opinions[network.targets], params)
    return np.bincount(network.targets, weights=rates * pulls, minlength=network.vertex_count)


def opinion_derivative(network: DirectedNetwork,
                       opinions: OpinionVector,
                       policy,
                       params: DynamicsParams) -> np.ndarray:
    opinions = np.asarray(opinions, dtype=np.float64)
    if len(opinions) != network.vertex_count:
        raise InvalidArgumentException(f'expected {network.vertex_count} opinions, got {len(opinions)}')
    return derivative_from_rates(network, opinions, effective_rates(network, policy), params)


def _max_in_rate(network: DirectedNetwork) -> float:
    in_rates = network.in_rate_sums()
    if not len(in_rates):
        return 0.0
    overflowed = np.flatnonzero(~np.isfinite(in_rates))
    if len(overflowed):
        raise StabilityException(f'incoming rate sum of vertex {int(overflowed[0])} overflows; rescale the edge rates')
    return float(in_rates.max())


def max_stable_dt(network: DirectedNetwork, params: DynamicsParams) -> float:
    pressure = params.omega * _max_in_rate(network)
    if pressure <= 0:
        return params.dt_max
    return min(params.dt_max, STABILITY_LIMIT / pressure)


def check_step(network: DirectedNetwork, params: DynamicsParams, dt: float) -> None:
    if dt < 0 or not math.isfinite(dt):
        raise InvalidArgumentException(f'dt must be finite and non-negative, got {dt}')
    if dt > params.dt_max:
        raise StabilityException(f'dt={dt} exceeds dt_max={params.dt_max}; sub-step the interval')
    pressure = dt * params.omega * _max_in_rate(network)
    if pressure > STABILITY_LIMIT * (1 + 1e-12):
        raise StabilityException(
            f'dt * omega * max incoming rate = {pressure:.6g} exceeds {STABILITY_LIMIT}; sub-step the interval')


def stable_step_count(network: DirectedNetwork, params: DynamicsParams, interval: float) -> int:
    """Smallest number of equal Euler steps covering `interval` within the stability bound."""
    if interval <= 0:
        return 0
    limit = max_stable_dt(network, params)
    if limit <= 0 or not math.isfinite(interval / limit):
        raise StabilityException(f'no finite number of Euler steps covers {interval:g} days at dt <= {limit:.3g}')
    steps = max(1, math.ceil(interval / limit))
    while interval / steps > limit:
        steps += 1
    return steps


def step_euler(network: DirectedNetwork,
               opinions: OpinionVector,
               policy,
               params: DynamicsParams,
               dt: float) -> OpinionVector:
    check_step(network, params, dt)
    opinions = np.asarray(opinions, dtype=np.float64)
    if dt == 0:
        return as_opinions(opinions, network.vertex_count)
    return as_opinions(opinions + dt * opinion_derivative(network, opinions, policy, params))


def integrate(network: DirectedNetwork,
              opinions: Union[OpinionVector, np.ndarray],
              policy,
              params: DynamicsParams,
              interval: float,
              steps: Optional[int] = None) -> OpinionVector:
    """Hold the policy fixed and advance `interval` days in equal stable Euler steps."""
    steps = stable_step_count(network, params, interval) if steps is None else steps
    theta = np.array(opinions, dtype=np.float64)
    if steps == 0:
        return as_opinions(theta)
    dt = interval / steps
    check_step(network, params, dt)
    rates = effective_rates(network, policy)
    for _ in range(steps):
        theta += dt * derivative_from_rates(network, theta, rates, params)
    # non-finite states are left for the caller to report
    theta.flags.writeable = False
    return theta
