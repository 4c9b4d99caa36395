import json
import os
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from shadowban.common.csv_tables import format_floats, parse_floats, read_table, write_table
from shadowban.common.engine import PolicySnapshot, RunResult, SweepRow
from shadowban.common.metrics import (HIGH_GROUP, LOW_GROUP, TRAJECTORY_COLUMNS, PartisanSplit,
                                      edge_polarity_ban_stats, histogram, histogram_table, shadow_ban_rate,
                                      trajectory_table)
from shadowban.common.network import DirectedNetwork, OpinionVector, as_opinions
from shadowban.common.network_io import NODE_SCHEMA
from shadowban.common.simulation_config import SimulationConfig, SweepGrid
from shadowban.helpers.exceptions import StorageException, ValidationException
from shadowban.helpers.logger import logger

CONFIG_FILE = 'config.json'
TRAJECTORY_FILE = 'trajectory.csv'
FINAL_OPINIONS_FILE = 'final_opinions.csv'
HISTOGRAM_INITIAL_FILE = 'histogram_initial.csv'
HISTOGRAM_FINAL_FILE = 'histogram_final.csv'
SWEEP_FILE = 'sweep.csv'
BIAS_REPORT_FILE = 'bias_report.csv'

POLICY_SCHEMA = ('source', 'target', 'u')
BIAS_REPORT_COLUMNS = ('day', 'ban_rate_low', 'ban_rate_high', 'upward_banned', 'downward_banned',
                       'neutral_banned', 'upward_mass', 'downward_mass', 'neutral_mass')
HISTOGRAM_BINS = 20


def policy_file_name(day: float) -> str:
    return f'policy_day_{day:g}.csv'


def opinions_file_name(day: float) -> str:
    return f'opinions_day_{day:g}.csv'


def write_config(config: SimulationConfig, run_dir: str) -> str:
    path = os.path.join(run_dir, CONFIG_FILE)
    try:
        os.makedirs(run_dir, exist_ok=True)
        with open(path, 'w', encoding='utf-8') as handle:
            handle.write(config.to_json() + '\n')
    except OSError as e:
        raise StorageException(str(e), path)
    return path


def write_opinions(network: DirectedNetwork, opinions: OpinionVector, path: str) -> None:
    write_table({'node': network.external_ids(), 'opinion': format_floats(opinions)}, path)


def write_snapshot(network: DirectedNetwork, snapshot: PolicySnapshot, run_dir: str) -> None:
    ids = np.array(network.external_ids(), dtype=object)
    banned = snapshot.policy.banned_edges
    write_table({'source': ids[network.sources[banned]] if len(banned) else [],
                 'target': ids[network.targets[banned]] if len(banned) else [],
                 'u': format_floats(snapshot.policy.strengths[banned])},
                os.path.join(run_dir, policy_file_name(snapshot.day)))
    write_opinions(network, snapshot.opinions, os.path.join(run_dir, opinions_file_name(snapshot.day)))


def write_histogram(opinions: OpinionVector, path: str, bin_count: int = HISTOGRAM_BINS) -> None:
    edges, densities = histogram(opinions, bin_count)
    write_table(histogram_table(edges, densities), path)


def write_run(run_dir: str,
              config: SimulationConfig,
              result: RunResult,
              initial_opinions: OpinionVector,
              network: DirectedNetwork) -> None:
    """Write every artifact of a finished run; config.json is expected to be written up front."""
    write_table(trajectory_table(result.frames), os.path.join(run_dir, TRAJECTORY_FILE))
    for snapshot in result.policies:
        write_snapshot(network, snapshot, run_dir)
    write_opinions(network, result.final_opinions, os.path.join(run_dir, FINAL_OPINIONS_FILE))
    write_histogram(initial_opinions, os.path.join(run_dir, HISTOGRAM_INITIAL_FILE))
    write_histogram(result.final_opinions, os.path.join(run_dir, HISTOGRAM_FINAL_FILE))
    logger.info(f'wrote {len(result.frames)} frames and {len(result.policies)} policy snapshots to {run_dir}')


def write_sweep(rows: Sequence[SweepRow], grid: SweepGrid, path: str) -> None:
    columns: Dict[str, list] = {axis: [row.get(axis) for row in rows] for axis in grid.axes()}
    columns['relative_objective'] = [row['relative_objective'] for row in rows]
    columns['status'] = [row['status'] for row in rows]
    write_table(columns, path)


def _read_config(run_dir: str) -> SimulationConfig:
    path = os.path.join(run_dir, CONFIG_FILE)
    try:
        with open(path, encoding='utf-8') as handle:
            return SimulationConfig.model_validate(json.load(handle))
    except OSError as e:
        raise StorageException(str(e), path)
    except ValueError as e:
        raise ValidationException(f'{path}: not a valid run configuration ({e})')


def _recorded_days(run_dir: str) -> List[float]:
    path = os.path.join(run_dir, TRAJECTORY_FILE)
    if not os.path.exists(path):
        raise StorageException('run directory has no trajectory; expected ' + TRAJECTORY_FILE, run_dir)
    frame, lines = read_table(path, TRAJECTORY_COLUMNS, required=('day',))
    return parse_floats(frame, 'day', path, lines).tolist()


def expected_snapshot_days(config: SimulationConfig, recorded_days: Sequence[float]) -> List[float]:
    return list(recorded_days) if config.save_policies else [d for d in recorded_days if d == 0][:1]


def load_snapshot(run_dir: str, day: float) -> Tuple[DirectedNetwork, np.ndarray, OpinionVector]:
    """Banned-edge network of one snapshot over all nodes, its ban strengths and the opinions of that day."""
    opinions_path = os.path.join(run_dir, opinions_file_name(day))
    nodes, node_lines = read_table(opinions_path, NODE_SCHEMA)
    node_ids = nodes['node'].tolist()
    index = {node_id: position for position, node_id in enumerate(node_ids)}
    opinions = parse_floats(nodes, 'opinion', opinions_path, node_lines)

    policy_path = os.path.join(run_dir, policy_file_name(day))
    banned, lines = read_table(policy_path, POLICY_SCHEMA)
    strengths = parse_floats(banned, 'u', policy_path, lines)
    endpoints = []
    for column in ('source', 'target'):
        mapped = banned[column].map(index)
        missing = np.flatnonzero(mapped.isna().to_numpy())
        if len(missing):
            raise ValidationException(
                f'{policy_path}:{lines[missing[0]]}: {column} {banned[column].iloc[missing[0]]} is not in '
                f'{opinions_file_name(day)}')
        endpoints.append(mapped.to_numpy(dtype=np.int64))
    network = DirectedNetwork(len(node_ids), endpoints[0], endpoints[1], np.ones(len(strengths)), node_ids)
    return network, strengths, as_opinions(opinions, network.vertex_count)


def analyze_run(run_dir: str, threshold: Optional[float] = None) -> Dict[str, list]:
    """Per-day node-level ban rates next to edge-polarity ban counts; days without bans are left out."""
    config = _read_config(run_dir)
    split = PartisanSplit(config.partisan_threshold if threshold is None else threshold)
    days = expected_snapshot_days(config, _recorded_days(run_dir))
    expected = [name for day in days for name in (policy_file_name(day), opinions_file_name(day))]
    absent = [name for name in expected if not os.path.exists(os.path.join(run_dir, name))]
    if absent:
        raise StorageException(f'missing policy snapshots {", ".join(absent)} (expected {", ".join(expected)})',
                               run_dir)

    report: Dict[str, list] = {column: [] for column in BIAS_REPORT_COLUMNS}
    for day in days:
        network, strengths, opinions = load_snapshot(run_dir, day)
        if not np.any(strengths > 0):
            continue
        rates = shadow_ban_rate(network, strengths, opinions, split)
        polarity = edge_polarity_ban_stats(network, strengths, opinions)
        for column, value in zip(BIAS_REPORT_COLUMNS,
                                 (day, rates[LOW_GROUP], rates[HIGH_GROUP],
                                  polarity.upward_count, polarity.downward_count, polarity.neutral_count,
                                  polarity.upward_mass, polarity.downward_mass, polarity.neutral_mass)):
            report[column].append(value)
    logger.info(f'analyzed {len(days)} snapshots in {run_dir}, {len(report["day"])} with bans')
    return report


def write_bias_report(report: Dict[str, list], path: str) -> None:
    write_table(report, path)
