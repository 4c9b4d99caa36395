from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from shadowban.common.dynamics import ban_strengths
from shadowban.common.network import DirectedNetwork, OpinionVector
from shadowban.helpers.exceptions import InvalidArgumentException

QUANTILE_PROBABILITIES = (0.05, 0.25, 0.50, 0.75, 0.95)
LOW_GROUP = 'low'
HIGH_GROUP = 'high'

TRAJECTORY_COLUMNS = ('day', 'mean', 'variance', 'q05', 'q25', 'q50', 'q75', 'q95',
                      'mean_ban_strength', 'ban_rate_low', 'ban_rate_high')


@dataclass(frozen=True)
class PartisanSplit:
    """Opinions at or below the threshold form the low group, the rest the high group."""
    threshold: float = 0.5

    def __post_init__(self):
        if not np.isfinite(self.threshold):
            raise InvalidArgumentException('partisan threshold must be finite')

    def high_mask(self, opinions) -> np.ndarray:
        return np.asarray(opinions, dtype=np.float64) > self.threshold


@dataclass(frozen=True)
class TrajectoryFrame:
    day: float
    mean: float
    variance: float
    quantiles: Tuple[float, ...]
    mean_ban_strength: float
    group_ban_rates: Dict[str, Optional[float]] = field(default_factory=dict)

    def as_row(self) -> List[Optional[float]]:
        return [self.day, self.mean, self.variance, *self.quantiles, self.mean_ban_strength,
                self.group_ban_rates.get(LOW_GROUP), self.group_ban_rates.get(HIGH_GROUP)]


@dataclass(frozen=True)
class EdgePolarityStats:
    """Banned edges grouped by the direction they pull their target."""
    upward_count: int = 0
    downward_count: int = 0
    neutral_count: int = 0
    upward_mass: float = 0.0
    downward_mass: float = 0.0
    neutral_mass: float = 0.0


def _banned_strengths(network: DirectedNetwork, policy) -> np.ndarray:
    u = ban_strengths(policy, network.edge_count)
    return np.zeros(network.edge_count) if u is None else u


def shadow_ban_rate(network: DirectedNetwork,
                    policy,
                    opinions: OpinionVector,
                    split: PartisanSplit = PartisanSplit()) -> Dict[str, Optional[float]]:
    """Share of each group with at least one out-edge under a positive ban; None for an empty group."""
    theta = np.asarray(opinions, dtype=np.float64)
    if len(theta) != network.vertex_count:
        raise InvalidArgumentException(f'expected {network.vertex_count} opinions, got {len(theta)}')
    u = _banned_strengths(network, policy)
    banned = np.zeros(network.vertex_count, dtype=bool)
    banned[network.sources[u > 0]] = True
    high = split.high_mask(theta)
    rates = {}
    for label, members in ((LOW_GROUP, ~high), (HIGH_GROUP, high)):
        size = int(members.sum())
        rates[label] = float(banned[members].sum()) / size if size else None
    return rates


def edge_polarity_ban_stats(network: DirectedNetwork, policy, opinions: OpinionVector) -> EdgePolarityStats:
    theta = np.asarray(opinions, dtype=np.float64)
    u = _banned_strengths(network, policy)
    banned = u > 0
    difference = theta[network.sources[banned]] - theta[network.targets[banned]]
    mass = u[banned]
    up, down, neutral = difference > 0, difference < 0, difference == 0
    return EdgePolarityStats(upward_count=int(up.sum()),
                             downward_count=int(down.sum()),
                             neutral_count=int(neutral.sum()),
                             upward_mass=float(mass[up].sum()),
                             downward_mass=float(mass[down].sum()),
                             neutral_mass=float(mass[neutral].sum()))


def summarize(network: DirectedNetwork,
              opinions: OpinionVector,
              policy,
              split: PartisanSplit = PartisanSplit(),
              day: float = 0.0) -> TrajectoryFrame:
    theta = np.asarray(opinions, dtype=np.float64)
    if len(theta) == 0:
        raise InvalidArgumentException('cannot summarize an empty opinion vector')
    u = _banned_strengths(network, policy)
    # numpy's default "linear" method interpolates order statistics at p * (n - 1)
    quantiles = tuple(float(q) for q in np.quantile(theta, QUANTILE_PROBABILITIES))
    return TrajectoryFrame(day=float(day),
                           mean=float(theta.mean()),
                           variance=float(np.var(theta, ddof=1)) if len(theta) > 1 else 0.0,
                           quantiles=quantiles,
                           mean_ban_strength=float(u.mean()) if len(u) else 0.0,
                           group_ban_rates=shadow_ban_rate(network, u, theta, split))


def histogram(opinions: OpinionVector, bin_count: int) -> Tuple[np.ndarray, np.ndarray]:
    """Equal-width density histogram over [0, 1]; returns (bin edges, densities)."""
    if int(bin_count) != bin_count or bin_count < 1:
        raise InvalidArgumentException(f'bin_count must be a positive integer, got {bin_count}')
    theta = np.asarray(opinions, dtype=np.float64)
    if len(theta) == 0:
        raise InvalidArgumentException('cannot build a histogram of an empty opinion vector')
    densities, edges = np.histogram(np.clip(theta, 0.0, 1.0), bins=int(bin_count), range=(0.0, 1.0), density=True)
    return edges, densities


def trajectory_table(frames: Sequence[TrajectoryFrame]) -> Dict[str, list]:
    rows = [frame.as_row() for frame in frames]
    return {column: [row[i] for row in rows] for i, column in enumerate(TRAJECTORY_COLUMNS)}


def histogram_table(edges: np.ndarray, densities: np.ndarray) -> Dict[str, np.ndarray]:
    return {'bin_left': edges[:-1], 'bin_right': edges[1:], 'density': densities}
