from enum import Enum

import numpy as np

from shadowban.helpers.exceptions import InvalidArgumentException


class ObjectiveKind(str, Enum):
    MaximizeMean = 'max-mean'
    MinimizeMean = 'min-mean'
    MinimizeVariance = 'min-var'
    MaximizeVariance = 'max-var'

    @property
    def is_variance(self) -> bool:
        return self in (ObjectiveKind.MinimizeVariance, ObjectiveKind.MaximizeVariance)

    @property
    def sign(self) -> float:
        return -1.0 if self in (ObjectiveKind.MinimizeMean, ObjectiveKind.MinimizeVariance) else 1.0

    @classmethod
    def parse(cls, token: str) -> 'ObjectiveKind':
        try:
            return cls(token)
        except ValueError:
            choices = ', '.join(kind.value for kind in cls)
            raise InvalidArgumentException(f'unknown objective "{token}", expected one of {choices}')


def _checked(kind: ObjectiveKind, opinions) -> np.ndarray:
    theta = np.asarray(opinions, dtype=np.float64)
    if len(theta) == 0:
        raise InvalidArgumentException('objectives need at least one opinion')
    if kind.is_variance and len(theta) < 2:
        raise InvalidArgumentException('variance objectives need at least two opinions')
    return theta


def reward(kind: ObjectiveKind, opinions) -> float:
    theta = _checked(kind, opinions)
    if kind.is_variance:
        return kind.sign * float(np.var(theta, ddof=1))
    return kind.sign * float(np.mean(theta))


def reward_gradient(kind: ObjectiveKind, opinions) -> np.ndarray:
    """Partial derivatives of `reward`, with the mean held fixed for the variance rows."""
    theta = _checked(kind, opinions)
    n = len(theta)
    if kind.is_variance:
        return kind.sign * 2.0 * (theta - theta.mean()) / (n - 1)
    return np.full(n, kind.sign / n)


def terminal_objective(kind: ObjectiveKind, opinions) -> float:
    """The value compared against the no-ban baseline: the mean, or the variance itself."""
    theta = _checked(kind, opinions)
    if kind.is_variance:
        return float(np.var(theta, ddof=1))
    return float(np.mean(theta))
