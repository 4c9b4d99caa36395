import argparse
import os
import sys
from typing import Any, Dict, List, Optional, Sequence

import numpy as np

from shadowban.common.engine import run, sweep
from shadowban.common.network import (as_opinions, generate_er, generate_path, generate_sbm, generate_standin,
                                      sample_balanced_subgraph)
from shadowban.common.network_io import load_network, save_network
from shadowban.common.objectives import ObjectiveKind
from shadowban.common.run_files import (BIAS_REPORT_FILE, SWEEP_FILE, analyze_run, write_bias_report, write_config,
                                        write_run, write_sweep)
from shadowban.common.simulation_config import SweepGrid, build_grid, load_config
from shadowban.helpers.exceptions import InvalidArgumentException, ShadowbanException
from shadowban.helpers.logger import enable_progress_logging

EDGES_FILE = 'edges.csv'
NODES_FILE = 'nodes.csv'
ID_MAP_FILE = 'id_map.csv'

# flag dest -> dotted SimulationConfig key
CONFIG_FLAGS = {
    'horizon_days': 'horizon_days',
    'policy_interval_days': 'policy_interval_days',
    'record_interval_days': 'record_interval_days',
    'objective': 'objective',
    'seed': 'seed',
    'stochastic_bans': 'stochastic_bans',
    'baseline': 'baseline',
    'save_policies': 'save_policies',
    'partisan_threshold': 'partisan_threshold',
    's_network': 'budget.s_network',
    's_edge': 'budget.s_edge',
    'epsilon': 'dynamics.epsilon',
    'omega': 'dynamics.omega',
    'dt_max': 'dynamics.dt_max',
}


class ArgumentParser(argparse.ArgumentParser):
    """argparse parser whose usage errors surface as InvalidArgumentException (exit code 1)."""

    def error(self, message):
        raise InvalidArgumentException(f'{self.prog}: {message}')


def float_list(text: str) -> List[float]:
    try:
        values = [float(part) for part in text.split(',') if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f'expected comma-separated numbers, got {text!r}')
    if not values:
        raise argparse.ArgumentTypeError('expected at least one value')
    return values


def int_list(text: str) -> List[int]:
    values = float_list(text)
    if any(v != int(v) for v in values):
        raise argparse.ArgumentTypeError(f'expected comma-separated integers, got {text!r}')
    return [int(v) for v in values]


def float_matrix(text: str) -> List[List[float]]:
    """Rows separated by ';', entries by ','; a single number is a 1x1 matrix."""
    return [float_list(row) for row in text.split(';') if row.strip()]


def _add_config_flags(parser: argparse.ArgumentParser, sweep_axes: bool = False) -> None:
    parser.add_argument('--edges', required=True, help='edge CSV (source,target,rate)')
    parser.add_argument('--nodes', required=True, help='node CSV (node,opinion)')
    parser.add_argument('--config', help='JSON document with SimulationConfig fields')
    parser.add_argument('--out-dir', required=True)
    parser.add_argument('--horizon-days', type=float)
    parser.add_argument('--policy-interval-days', type=float)
    parser.add_argument('--record-interval-days', type=float)
    parser.add_argument('--objective', type=ObjectiveKind.parse,
                        help=', '.join(kind.value for kind in ObjectiveKind))
    parser.add_argument('--seed', type=int)
    parser.add_argument('--stochastic-bans', action='store_const', const=True,
                        help='realize bans per policy interval from --seed instead of thinning rates')
    parser.add_argument('--baseline', action='store_const', const=True)
    parser.add_argument('--save-policies', action='store_const', const=True)
    parser.add_argument('--partisan-threshold', type=float)
    parser.add_argument('--dt-max', type=float)
    axis = float_list if sweep_axes else float
    parser.add_argument('--s-network', type=axis)
    parser.add_argument('--s-edge', type=axis)
    parser.add_argument('--epsilon', type=axis)
    parser.add_argument('--omega', type=axis)


def build_parser() -> ArgumentParser:
    parser = ArgumentParser(prog='shadowban', description='Shadow-banning policies for opinion dynamics')
    parser.add_argument('-v', '--verbose', action='store_true', help='log run progress to stderr')
    commands = parser.add_subparsers(dest='command', required=True)

    generate = commands.add_parser('generate', help='write a synthetic network as edges.csv / nodes.csv')
    generate.add_argument('kind', choices=('path', 'sbm', 'er', 'standin'))
    generate.add_argument('--n', type=int)
    generate.add_argument('--sizes', type=int_list)
    generate.add_argument('--p', type=float_matrix)
    generate.add_argument('--opinions', type=float_list)
    generate.add_argument('--seed', type=int, default=0)
    generate.add_argument('--vertex-count', type=int, default=30000)
    generate.add_argument('--target-edges', type=int, default=1_000_000)
    generate.add_argument('--per-group', type=int,
                          help='keep a balanced induced subgraph of this many users per group')
    generate.add_argument('--out-dir', required=True)
    generate.set_defaults(handler=cmd_generate)

    simulate = commands.add_parser('simulate', help='run the greedy shadow-banning loop')
    _add_config_flags(simulate)
    simulate.set_defaults(handler=cmd_simulate)

    grid = commands.add_parser('sweep', help='relative objective over a parameter grid')
    _add_config_flags(grid, sweep_axes=True)
    grid.add_argument('--workers', type=int)
    grid.set_defaults(handler=cmd_sweep)

    analyze = commands.add_parser('analyze', help='node-level vs edge-polarity bias of stored policies')
    analyze.add_argument('--run-dir', required=True)
    analyze.add_argument('--threshold', type=float)
    analyze.add_argument('--out', help=f'report path (default <run-dir>/{BIAS_REPORT_FILE})')
    analyze.set_defaults(handler=cmd_analyze)
    return parser


def _require(args, *names: str) -> None:
    for name in names:
        if getattr(args, name) is None:
            raise InvalidArgumentException(f'generate {args.kind}: --{name.replace("_", "-")} is required')


def cmd_generate(args) -> int:
    if args.kind == 'path':
        _require(args, 'n')
        network, opinions = generate_path(args.n)
    elif args.kind == 'sbm':
        _require(args, 'sizes', 'p', 'opinions')
        network, opinions = generate_sbm(args.sizes, args.p, args.opinions, args.seed)
    elif args.kind == 'er':
        _require(args, 'n', 'p')
        if len(args.p) != 1 or len(args.p[0]) != 1:
            raise InvalidArgumentException('generate er: --p takes a single probability')
        network = generate_er(args.n, args.p[0][0], args.seed)
        opinions = as_opinions(np.random.default_rng(args.seed + 1).random(network.vertex_count))
    else:
        network, opinions = generate_standin(args.vertex_count, args.target_edges, seed=args.seed)
    if args.per_group is not None:
        network, opinions = sample_balanced_subgraph(network, opinions, args.per_group, args.seed)
    save_network(network, opinions, os.path.join(args.out_dir, EDGES_FILE), os.path.join(args.out_dir, NODES_FILE))
    print(f'vertices={network.vertex_count} edges={network.edge_count}')
    return 0


def config_overrides(args, skip: Sequence[str] = ()) -> Dict[str, Any]:
    return {key: getattr(args, flag) for flag, key in CONFIG_FLAGS.items() if flag not in skip}


def cmd_simulate(args) -> int:
    config = load_config(args.config, config_overrides(args))
    write_config(config, args.out_dir)
    network, opinions = load_network(args.edges, args.nodes, os.path.join(args.out_dir, ID_MAP_FILE))
    result = run(config, network, opinions)
    write_run(args.out_dir, config, result, opinions, network)
    final = result.frames[-1]
    print(f'terminal_mean={final.mean:.12g} terminal_variance={final.variance:.12g} '
          f'mean_ban={final.mean_ban_strength:.12g}')
    return 0


def cmd_sweep(args) -> int:
    base = load_config(args.config, config_overrides(args, skip=SweepGrid.AXES))
    grid = build_grid({axis: getattr(args, axis) for axis in SweepGrid.AXES if getattr(args, axis) is not None})
    write_config(base, args.out_dir)
    network, opinions = load_network(args.edges, args.nodes, os.path.join(args.out_dir, ID_MAP_FILE))
    rows = sweep(base, grid, network, opinions, args.workers)
    write_sweep(rows, grid, os.path.join(args.out_dir, SWEEP_FILE))
    failed = [row for row in rows if not row['status'].startswith('ok')]
    print(f'points={len(rows)} failed={len(failed)}')
    return 2 if failed else 0


def cmd_analyze(args) -> int:
    report = analyze_run(args.run_dir, args.threshold)
    write_bias_report(report, args.out or os.path.join(args.run_dir, BIAS_REPORT_FILE))
    print(f'days_with_bans={len(report["day"])}')
    return 0


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.verbose:
            enable_progress_logging()
        return args.handler(args)
    except ShadowbanException as e:
        print(f'shadowban: error: {e}', file=sys.stderr)
        return e.exit_code
    except SystemExit as e:
        # --help
        return int(e.code or 0)
