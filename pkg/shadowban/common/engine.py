from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, List, Optional

import numpy as np
from typing_extensions import NotRequired, TypedDict

from shadowban.common.dynamics import DynamicsParams, integrate
from shadowban.common.metrics import PartisanSplit, TrajectoryFrame, summarize
from shadowban.common.network import DirectedNetwork, OpinionVector, as_opinions
from shadowban.common.objectives import ObjectiveKind, terminal_objective
from shadowban.common.policy import ShadowBanPolicy, compute_coefficients, policy_objective, realize_stochastic
from shadowban.common.simulation_config import SimulationConfig, SweepGrid
from shadowban.common.solvers import solve_policy
from shadowban.helpers.exceptions import ShadowbanException, SimulationAbortedException
from shadowban.helpers.logger import logger
from shadowban.helpers.settings import settings


@dataclass(frozen=True)
class PolicySnapshot:
    day: float
    policy: ShadowBanPolicy
    opinions: OpinionVector


@dataclass
class RunResult:
    frames: List[TrajectoryFrame]
    final_opinions: OpinionVector
    policies: List[PolicySnapshot] = field(default_factory=list)


@dataclass(frozen=True)
class RelativeOutcome:
    value: float
    controlled: float
    baseline: float
    is_ratio: bool = True


class SweepRow(TypedDict):
    s_network: NotRequired[float]
    s_edge: NotRequired[float]
    epsilon: NotRequired[float]
    omega: NotRequired[float]
    relative_objective: Optional[float]
    status: str


def _instants(horizon: float, interval: float) -> List[float]:
    count = int(round(horizon / interval))
    return [min(horizon, k * interval) for k in range(count + 1)]


def _timeline(config: SimulationConfig):
    """Merged policy/record instants as (day, solve_policy, record_frame) in time order."""
    marks: Dict[float, List[bool]] = {}
    for day in _instants(config.horizon_days, config.policy_interval_days):
        marks.setdefault(round(day, 9), [False, False])[0] = True
    for day in _instants(config.horizon_days, config.record_interval_days):
        marks.setdefault(round(day, 9), [False, False])[1] = True
    return [(day, flags[0], flags[1]) for day, flags in sorted(marks.items())]


def choose_policy(network: DirectedNetwork,
                  opinions: OpinionVector,
                  config: SimulationConfig,
                  day: float = 0.0) -> ShadowBanPolicy:
    if config.baseline:
        return ShadowBanPolicy.zero(network.edge_count, config.budget, day)
    coeffs = compute_coefficients(network, opinions, config.objective, config.dynamics)
    return solve_policy(coeffs, config.budget, day).validate()


def reward_rate(network: DirectedNetwork,
                opinions: OpinionVector,
                policy,
                kind: ObjectiveKind,
                params: DynamicsParams) -> float:
    """dr/dt at the given state under the given policy (None means no ban)."""
    coeffs = compute_coefficients(network, opinions, kind, params)
    strengths = np.zeros(network.edge_count) if policy is None else policy
    return policy_objective(coeffs, strengths)


def _realized_strengths(policy: ShadowBanPolicy, rng: np.random.Generator) -> np.ndarray:
    """Full bans on the edges hidden for this interval, none elsewhere."""
    return (~realize_stochastic(policy, rng)).astype(np.float64)


def run(config: SimulationConfig, network: DirectedNetwork, opinions: OpinionVector) -> RunResult:
    """Greedy shadow-banning loop: re-solve the ban LP at each policy instant, hold it, integrate."""
    theta = as_opinions(opinions, network.vertex_count)
    split = PartisanSplit(config.partisan_threshold)
    frames: List[TrajectoryFrame] = []
    snapshots: List[PolicySnapshot] = []
    policy: Optional[ShadowBanPolicy] = None
    applied = None
    rng = np.random.default_rng(config.seed) if config.stochastic_bans else None
    timeline = _timeline(config)
    logger.info(f'run: objective={config.objective.value} horizon={config.horizon_days}d '
                f'budget=({config.budget.s_network}, {config.budget.s_edge}) baseline={config.baseline} '
                f'on {network.vertex_count} vertices / {network.edge_count} edges')

    for position, (day, solve_now, record_now) in enumerate(timeline):
        if solve_now or policy is None:
            policy = choose_policy(network, theta, config, day)
            logger.info(f'day {day:g}: mean ban strength {policy.mean_strength:.6g}, '
                        f'{policy.banned_count} banned edges')
            applied = policy if rng is None else _realized_strengths(policy, rng)
        if record_now:
            frames.append(summarize(network, theta, policy, split, day))
            if config.save_policies or day == 0:
                snapshots.append(PolicySnapshot(day, policy, theta))
        if position + 1 < len(timeline):
            theta = integrate(network, theta, applied, config.dynamics, timeline[position + 1][0] - day)
            if not np.all(np.isfinite(theta)):
                raise SimulationAbortedException(f'non-finite opinion after day {day:g}', len(frames))

    final = frames[-1]
    logger.info(f'run finished: terminal mean {final.mean:.6g}, variance {final.variance:.6g}')
    return RunResult(frames=frames, final_opinions=theta, policies=snapshots)


def run_relative(config: SimulationConfig, network: DirectedNetwork, opinions: OpinionVector) -> RelativeOutcome:
    """Improvement of the banned run over the no-ban run on the same inputs.

    `value` is controlled/baseline for the maximize objectives and baseline/controlled for the minimize ones,
    so it exceeds 1 whenever the bans helped. `controlled` and `baseline` stay the raw terminal values.
    """
    quiet = config.model_copy(update={'save_policies': False})
    controlled = run(quiet, network, opinions).final_opinions
    baseline = run(quiet.model_copy(update={'baseline': True}), network, opinions).final_opinions
    controlled_value = terminal_objective(config.objective, controlled)
    baseline_value = terminal_objective(config.objective, baseline)
    if config.objective.sign > 0:
        numerator, denominator = controlled_value, baseline_value
    else:
        numerator, denominator = baseline_value, controlled_value
    if denominator == 0:
        logger.warning(f'{config.objective.value}: terminal objective in the denominator is 0, '
                       f'reporting the absolute difference')
        return RelativeOutcome(numerator - denominator, controlled_value, baseline_value, is_ratio=False)
    return RelativeOutcome(numerator / denominator, controlled_value, baseline_value)


def _sweep_point(base: SimulationConfig, grid: SweepGrid, point: Dict[str, float],
                 network: DirectedNetwork, opinions: OpinionVector) -> SweepRow:
    row: SweepRow = {**point, 'relative_objective': None, 'status': 'ok'}  # type: ignore
    try:
        outcome = run_relative(grid.apply(base, point), network, opinions)
        row['relative_objective'] = outcome.value
        if not outcome.is_ratio:
            row['status'] = 'ok: absolute difference (zero denominator)'
    except ShadowbanException as e:
        logger.error(f'sweep point {point} failed: {e}')
        row['status'] = f'error: {e}'
    except Exception as e:
        logger.exception(f'sweep point {point} failed unexpectedly')
        row['status'] = f'error: {e}'
    return row


def sweep(base_config: SimulationConfig,
          grid: SweepGrid,
          network: DirectedNetwork,
          opinions: OpinionVector,
          workers: Optional[int] = None) -> List[SweepRow]:
    """run_relative over every grid point; rows come back in grid order."""
    points = grid.points()
    workers = settings.sweep_workers if workers is None else max(1, workers)
    logger.info(f'sweep: {len(points)} points over axes {grid.axes()} with {workers} workers')
    if workers == 1:
        return [_sweep_point(base_config, grid, point, network, opinions) for point in points]
    with ThreadPoolExecutor(max_workers=min(workers, max(1, len(points)))) as pool:
        return list(pool.map(lambda point: _sweep_point(base_config, grid, point, network, opinions), points))
