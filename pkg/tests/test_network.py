import numpy as np
import pytest

from shadowban.common.network import (DirectedNetwork, Edge, as_opinions, generate_er, generate_path, generate_sbm,
                                      sample_balanced_subgraph)
from shadowban.helpers.exceptions import InvalidArgumentException, ValidationException


@pytest.mark.parametrize('n, edge_count', ((2, 2), (3, 4), (11, 20)))
def test_path_edge_count(n, edge_count):
    network, opinions = generate_path(n)
    assert network.edge_count == edge_count == 2 * (n - 1)
    assert np.array_equal(opinions, np.linspace(0.0, 1.0, n))


def test_path_two_vertices():
    network, opinions = generate_path(2)
    assert network.edge_set() == {(0, 1), (1, 0)}
    assert list(opinions) == [0.0, 1.0]


def test_path_three_vertices():
    _, opinions = generate_path(3)
    assert list(opinions) == [0.0, 0.5, 1.0]


@pytest.mark.parametrize('n', (0, 1, -3))
def test_path_too_small(n):
    with pytest.raises(InvalidArgumentException):
        generate_path(n)


def test_path_rates_are_one(path11):
    network, _ = path11
    assert np.all(network.rates == 1.0)


def test_sbm_two_cliques():
    network, opinions = generate_sbm([5, 5], [[1, 0.05], [0.05, 1]], [0.35, 0.65], seed=1)
    intra = (network.sources < 5) == (network.targets < 5)
    assert np.count_nonzero(intra) == 40
    assert network.edge_count - 40 <= 50
    assert list(opinions) == [0.35] * 5 + [0.65] * 5


def test_sbm_all_ones_single_cluster():
    network, _ = generate_sbm([3], [[1.0]], [0.5], seed=0)
    assert network.edge_count == 6
    assert network.edge_set() == {(a, b) for a in range(3) for b in range(3) if a != b}


def test_sbm_all_zeros():
    network, _ = generate_sbm([4, 4], [[0, 0], [0, 0]], [0.2, 0.8], seed=3)
    assert network.edge_count == 0
    assert network.vertex_count == 8


def test_sbm_reproducible_by_seed():
    first = generate_sbm([20, 30], [[0.3, 0.1], [0.05, 0.4]], [0.2, 0.9], seed=7)
    second = generate_sbm([20, 30], [[0.3, 0.1], [0.05, 0.4]], [0.2, 0.9], seed=7)
    assert first[0] == second[0]
    assert np.array_equal(first[1], second[1])


@pytest.mark.parametrize('sizes, p, opinions', (
    ([5, 5], [[1.0]], [0.1, 0.2]),
    ([5, 5], [[1.0, 0.1], [0.1, 1.0]], [0.1]),
    ([5], [[1.5]], [0.1]),
    ([5], [[-0.1]], [0.1]),
    ([0], [[0.5]], [0.1]),
))
def test_sbm_invalid_arguments(sizes, p, opinions):
    with pytest.raises(InvalidArgumentException):
        generate_sbm(sizes, p, opinions, seed=0)


def test_er_complete():
    assert generate_er(4, 1.0, seed=0).edge_count == 12


def test_er_empty():
    assert generate_er(50, 0.0, seed=0).edge_count == 0


def test_er_edge_count_concentrates():
    pairs = 1000 * 999
    mean = pairs * 0.01
    sigma = np.sqrt(pairs * 0.01 * 0.99)
    assert abs(generate_er(1000, 0.01, seed=11).edge_count - mean) <= 4 * sigma


def test_network_rejects_self_loop():
    with pytest.raises(ValidationException):
        DirectedNetwork(2, [0], [0], [1.0])


def test_network_rejects_duplicate_edge():
    with pytest.raises(ValidationException):
        DirectedNetwork(2, [0, 0], [1, 1], [1.0, 2.0])


def test_network_rejects_out_of_range_endpoint():
    with pytest.raises(ValidationException):
        DirectedNetwork(2, [0], [2], [1.0])


@pytest.mark.parametrize('rate', (-1.0, float('nan'), float('inf')))
def test_network_rejects_bad_rate(rate):
    with pytest.raises(ValidationException):
        DirectedNetwork(2, [0], [1], [rate])


def test_network_arrays_are_read_only(path11):
    network, opinions = path11
    with pytest.raises(ValueError):
        network.rates[0] = 3.0
    with pytest.raises(ValueError):
        opinions[0] = 0.5


def test_adjacency_indexes(path11):
    network, _ = path11
    assert network.indexes_consistent()
    out_of_five = network.out_index.of(5)
    assert sorted(network.targets[out_of_five].tolist()) == [4, 6]
    into_zero = network.in_index.of(0)
    assert network.sources[into_zero].tolist() == [1]


def test_from_edges_matches_arrays():
    edges = [Edge(0, 1, 2.0), Edge(1, 2, 0.5), Edge(2, 0, 1.0)]
    network = DirectedNetwork.from_edges(3, edges)
    assert network.edges == edges
    assert network.in_rate_sums().tolist() == [1.0, 2.0, 0.5]


def test_poster_rate_is_largest_out_rate():
    network = DirectedNetwork(3, [0, 0, 1], [1, 2, 2], [0.5, 2.0, 1.0])
    assert network.poster_rates().tolist() == [2.0, 1.0, 0.0]


def test_as_opinions_unit_interval():
    with pytest.raises(ValidationException):
        as_opinions([0.2, 1.2], unit_interval=True)
    with pytest.raises(InvalidArgumentException):
        as_opinions([0.2, 0.3], vertex_count=3)


def test_balanced_subgraph_keeps_groups_and_ids():
    network, opinions = generate_sbm([30, 30], [[0.2, 0.05], [0.05, 0.2]], [0.3, 0.7], seed=5)
    sub, sub_opinions = sample_balanced_subgraph(network, opinions, per_group=10, seed=2)
    assert sub.vertex_count == 20
    assert np.count_nonzero(sub_opinions <= 0.5) == 10
    kept = [int(i) for i in sub.external_ids()]
    assert kept == sorted(kept)
    original = network.edge_set()
    for source, target in sub.edge_set():
        assert (kept[source], kept[target]) in original


def test_balanced_subgraph_needs_enough_users(path11):
    network, opinions = path11
    with pytest.raises(InvalidArgumentException):
        sample_balanced_subgraph(network, opinions, per_group=6, seed=0)
