import json

import pytest

from shadowban.common.objectives import ObjectiveKind
from shadowban.common.simulation_config import (SimulationConfig, SweepGrid, build_config, build_grid, load_config,
                                                merge_overrides)
from shadowban.helpers.exceptions import ConfigException, StorageException


def test_defaults():
    config = SimulationConfig()
    assert config.horizon_days == 365.0
    assert config.policy_interval_days == 1.0
    assert config.objective is ObjectiveKind.MaximizeMean
    assert config.budget.s_network == 0.05
    assert config.dynamics.omega == 0.003


def test_intervals_must_divide_horizon():
    with pytest.raises(ConfigException):
        build_config({'horizon_days': 10, 'policy_interval_days': 3})
    assert build_config({'horizon_days': 0.3, 'record_interval_days': 0.1}).record_interval_days == 0.1


def test_error_carries_key_path():
    with pytest.raises(ConfigException) as e:
        build_config({'budget': {'s_network': 2.0}})
    assert e.value.key_path == 'budget.s_network'
    assert e.value.exit_code == 1


def test_unknown_key_rejected():
    with pytest.raises(ConfigException) as e:
        build_config({'horizon': 10})
    assert e.value.key_path == 'horizon'


def test_json_round_trip():
    config = build_config({'objective': 'max-var', 'dynamics': {'epsilon': 0.4}, 'save_policies': True})
    assert build_config(json.loads(config.to_json())) == config


def test_merge_overrides_skips_unset_flags():
    merged = merge_overrides({'budget': {'s_network': 0.1}, 'seed': 3},
                             {'budget.s_edge': 0.5, 'dynamics.epsilon': 0.2, 'seed': None})
    assert merged == {'budget': {'s_network': 0.1, 's_edge': 0.5}, 'dynamics': {'epsilon': 0.2}, 'seed': 3}


def test_flags_override_file(tmp_path):
    path = tmp_path / 'config.json'
    path.write_text(json.dumps({'horizon_days': 30, 'budget': {'s_network': 0.1}}))
    config = load_config(str(path), {'budget.s_network': 0.2, 'objective': 'min-var'})
    assert config.horizon_days == 30
    assert config.budget.s_network == 0.2
    assert config.objective is ObjectiveKind.MinimizeVariance


def test_invalid_json_file(tmp_path):
    path = tmp_path / 'config.json'
    path.write_text('{"horizon_days": ')
    with pytest.raises(ConfigException):
        load_config(str(path))


def test_missing_config_file(tmp_path):
    with pytest.raises(StorageException):
        load_config(str(tmp_path / 'absent.json'))


def test_grid_points_in_axis_order():
    grid = build_grid({'omega': [0.001, 0.003], 's_network': [0.1, 0.2]})
    assert grid.axes() == ['s_network', 'omega']
    assert grid.points() == [{'s_network': 0.1, 'omega': 0.001}, {'s_network': 0.1, 'omega': 0.003},
                             {'s_network': 0.2, 'omega': 0.001}, {'s_network': 0.2, 'omega': 0.003}]


def test_empty_grid_is_single_point():
    assert SweepGrid().points() == [{}]


@pytest.mark.parametrize('data', ({'s_edge': []}, {'s_network': [1.5]}, {'epsilon': [-0.1]}, {'alpha': [1]}))
def test_invalid_grid(data):
    with pytest.raises(ConfigException):
        build_grid(data)


def test_grid_apply():
    base = build_config({'budget': {'s_network': 0.05, 's_edge': 0.5}})
    config = SweepGrid(s_edge=[1.0], omega=[0.01]).apply(base, {'s_edge': 1.0, 'omega': 0.01})
    assert config.budget.s_edge == 1.0
    assert config.budget.s_network == 0.05
    assert config.dynamics.omega == 0.01
    assert config.dynamics.epsilon == base.dynamics.epsilon
