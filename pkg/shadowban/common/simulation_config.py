import json
from typing import Any, ClassVar, Dict, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from shadowban.common.dynamics import DynamicsParams
from shadowban.common.objectives import ObjectiveKind
from shadowban.common.policy import BanBudget
from shadowban.helpers.exceptions import ConfigException, StorageException


def _divides(whole: float, part: float) -> bool:
    ratio = whole / part
    return abs(ratio - round(ratio)) <= 1e-9 * max(1.0, ratio)


class SimulationConfig(BaseModel):
    model_config = ConfigDict(frozen=True, extra='forbid')

    horizon_days: float = Field(365.0, gt=0, allow_inf_nan=False)
    policy_interval_days: float = Field(1.0, gt=0, allow_inf_nan=False)
    record_interval_days: float = Field(1.0, gt=0, allow_inf_nan=False)
    objective: ObjectiveKind = ObjectiveKind.MaximizeMean
    budget: BanBudget = BanBudget()
    dynamics: DynamicsParams = DynamicsParams()
    seed: int = 0
    # hide each banned edge for a whole policy interval with probability u, drawn from `seed`
    stochastic_bans: bool = False
    baseline: bool = False
    save_policies: bool = False
    partisan_threshold: float = Field(0.5, allow_inf_nan=False)

    @model_validator(mode='after')
    def intervals_divide_horizon(self):
        for name in ('policy_interval_days', 'record_interval_days'):
            if not _divides(self.horizon_days, getattr(self, name)):
                raise ValueError(f'{name}={getattr(self, name)} does not divide horizon_days={self.horizon_days}')
        return self

    def to_json(self) -> str:
        return json.dumps(self.model_dump(mode='json'), indent=2, sort_keys=True)


class SweepGrid(BaseModel):
    """Value lists per sweep axis; points are the Cartesian product in AXES order."""
    model_config = ConfigDict(frozen=True, extra='forbid')

    AXES: ClassVar[Tuple[str, ...]] = ('s_network', 's_edge', 'epsilon', 'omega')

    s_network: Optional[List[float]] = None
    s_edge: Optional[List[float]] = None
    epsilon: Optional[List[float]] = None
    omega: Optional[List[float]] = None

    @field_validator('s_network', 's_edge', 'epsilon', 'omega')
    @classmethod
    def non_empty_in_range(cls, values, info):
        if values is None:
            return values
        if not values:
            raise ValueError('axis value list must not be empty')
        upper = 1.0 if info.field_name.startswith('s_') else float('inf')
        for value in values:
            if not 0 <= value <= upper:
                raise ValueError(f'{value} is outside [0, {upper}]')
        return values

    def axes(self) -> List[str]:
        return [axis for axis in self.AXES if getattr(self, axis) is not None]

    def points(self) -> List[Dict[str, float]]:
        points: List[Dict[str, float]] = [{}]
        for axis in self.axes():
            points = [{**point, axis: value} for point in points for value in getattr(self, axis)]
        return points

    def apply(self, base: SimulationConfig, point: Dict[str, float]) -> SimulationConfig:
        budget = {**base.budget.model_dump(), **{k: v for k, v in point.items() if k.startswith('s_')}}
        dynamics = {**base.dynamics.model_dump(), **{k: v for k, v in point.items() if not k.startswith('s_')}}
        return build_config({**base.model_dump(), 'budget': budget, 'dynamics': dynamics})


def _key_path(error: Dict[str, Any]) -> str:
    return '.'.join(str(part) for part in error.get('loc', ())) or '<root>'


def build_config(data: Dict[str, Any]) -> SimulationConfig:
    try:
        return SimulationConfig.model_validate(data)
    except ValidationError as e:
        first = e.errors()[0]
        raise ConfigException(first.get('msg', str(e)), _key_path(first))


def build_grid(data: Dict[str, Any]) -> SweepGrid:
    try:
        return SweepGrid.model_validate(data)
    except ValidationError as e:
        first = e.errors()[0]
        raise ConfigException(first.get('msg', str(e)), _key_path(first))


def read_config_document(path: str) -> Dict[str, Any]:
    try:
        with open(path, encoding='utf-8') as handle:
            document = json.load(handle)
    except OSError as e:
        raise StorageException(str(e), path)
    except json.JSONDecodeError as e:
        raise ConfigException(f'invalid JSON in {path} (line {e.lineno}): {e.msg}')
    if not isinstance(document, dict):
        raise ConfigException(f'{path} must hold a JSON object')
    return document


def merge_overrides(document: Dict[str, Any], overrides: Dict[str, Any]) -> Dict[str, Any]:
    """Overlay dotted-key overrides (e.g. 'budget.s_network') on a config document."""
    merged = json.loads(json.dumps(document))
    for dotted, value in overrides.items():
        if value is None:
            continue
        node = merged
        *parents, leaf = dotted.split('.')
        for parent in parents:
            child = node.get(parent)
            if not isinstance(child, dict):
                child = {}
                node[parent] = child
            node = child
        node[leaf] = value
    return merged


def load_config(path: Optional[str] = None, overrides: Optional[Dict[str, Any]] = None) -> SimulationConfig:
    document = read_config_document(path) if path else {}
    return build_config(merge_overrides(document, overrides or {}))
