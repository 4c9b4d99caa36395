from .network import DirectedNetwork, Edge, OpinionVector, generate_er, generate_path, generate_sbm, generate_standin
from .network_io import load_network, save_network
from .dynamics import DynamicsParams, integrate, opinion_derivative, shift_function, step_euler
from .discrete_events import DeliveryMode, simulate_discrete_events
from .objectives import ObjectiveKind, reward, reward_gradient, terminal_objective
from .policy import BanBudget, EdgeCoefficients, ShadowBanPolicy, compute_coefficients, realize_stochastic
from .solvers import solve_policy, solve_policy_oracle
from .metrics import PartisanSplit, TrajectoryFrame, edge_polarity_ban_stats, histogram, shadow_ban_rate, summarize
from .simulation_config import SimulationConfig, SweepGrid, build_config, build_grid, load_config
from .engine import RelativeOutcome, RunResult, reward_rate, run, run_relative, sweep

__all__ = ('DirectedNetwork', 'Edge', 'OpinionVector', 'generate_path', 'generate_sbm', 'generate_er',
           'generate_standin', 'load_network', 'save_network', 'DynamicsParams', 'shift_function',
           'opinion_derivative', 'step_euler', 'integrate', 'DeliveryMode', 'simulate_discrete_events',
           'ObjectiveKind', 'reward', 'reward_gradient', 'terminal_objective', 'BanBudget', 'EdgeCoefficients',
           'ShadowBanPolicy', 'compute_coefficients', 'realize_stochastic', 'solve_policy', 'solve_policy_oracle',
           'PartisanSplit', 'TrajectoryFrame', 'summarize', 'shadow_ban_rate', 'edge_polarity_ban_stats',
           'histogram', 'SimulationConfig', 'SweepGrid', 'build_config', 'build_grid', 'load_config', 'RunResult',
           'RelativeOutcome', 'run', 'run_relative', 'sweep', 'reward_rate')
