import numpy as np
import pytest

from shadowban.common.dynamics import DynamicsParams
from shadowban.common.network import generate_path, generate_sbm
from shadowban.common.policy import BanBudget

SBM_SIZES = (5, 5)
SBM_P = [[1.0, 0.05], [0.05, 1.0]]
SBM_OPINIONS = (0.35, 0.65)


def pytest_addoption(parser):
    parser.addoption('--runslow', action='store_true', default=False, help='run stand-in scale tests')


def pytest_collection_modifyitems(config, items):
    if config.getoption('--runslow'):
        return
    skip_slow = pytest.mark.skip(reason='needs --runslow')
    for item in items:
        if 'slow' in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture
def path11():
    return generate_path(11)


@pytest.fixture
def path_params():
    # neighbour gaps of linspace(0, 1, 11) are 0.1 up to rounding
    return DynamicsParams(omega=0.003, epsilon=0.101)


@pytest.fixture
def wide_budget():
    return BanBudget(s_network=0.5, s_edge=1.0)


def inter_cluster_mask(network, size=SBM_SIZES[0]):
    return (network.sources < size) != (network.targets < size)


@pytest.fixture(scope='session')
def sbm10():
    """Two 5-cliques with sparse inter-cluster edges running both ways."""
    for seed in range(100):
        network, opinions = generate_sbm(SBM_SIZES, SBM_P, SBM_OPINIONS, seed)
        inter = inter_cluster_mask(network)
        downward = np.count_nonzero(inter & (network.sources < SBM_SIZES[0]))
        upward = np.count_nonzero(inter & (network.sources >= SBM_SIZES[0]))
        if downward and upward:
            return network, opinions
    raise RuntimeError('no seed below 100 gives inter-cluster edges in both directions')


@pytest.fixture
def sbm_params():
    return DynamicsParams(omega=0.003, epsilon=0.4)


@pytest.fixture
def inter_mask():
    return inter_cluster_mask
