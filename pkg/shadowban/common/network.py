from dataclasses import dataclass
from typing import Iterable, Iterator, List, NamedTuple, Optional, Sequence, Set, Tuple

import numpy as np

from shadowban.helpers.exceptions import InvalidArgumentException, ValidationException
from shadowban.helpers.logger import logger

OpinionVector = np.ndarray


@dataclass(frozen=True)
class Edge:
    source: int
    target: int
    rate: float


class AdjacencyIndex(NamedTuple):
    """CSR-style index: edges of vertex v are positions[offsets[v]:offsets[v + 1]]."""
    offsets: np.ndarray
    positions: np.ndarray

    def of(self, vertex: int) -> np.ndarray:
        return self.positions[self.offsets[vertex]:self.offsets[vertex + 1]]

    def same_as(self, other: 'AdjacencyIndex') -> bool:
        return np.array_equal(self.offsets, other.offsets) and np.array_equal(self.positions, other.positions)


def _readonly(array: np.ndarray) -> np.ndarray:
    array.setflags(write=False)
    return array


def build_index(keys: np.ndarray, vertex_count: int) -> AdjacencyIndex:
    counts = np.bincount(keys, minlength=vertex_count)
    offsets = np.zeros(vertex_count + 1, dtype=np.int64)
    np.cumsum(counts, out=offsets[1:])
    positions = np.argsort(keys, kind='stable').astype(np.int64)
    return AdjacencyIndex(_readonly(offsets), _readonly(positions))


class DirectedNetwork:
    """Follower graph. An edge carries content (and influence) from source to target."""

    def __init__(self,
                 vertex_count: int,
                 sources: Sequence[int],
                 targets: Sequence[int],
                 rates: Sequence[float],
                 node_ids: Optional[Sequence[str]] = None):
        if vertex_count < 0:
            raise InvalidArgumentException('vertex_count must be non-negative')
        self.__vertex_count = int(vertex_count)
        self.__sources = _readonly(np.array(sources, dtype=np.int64).reshape(-1))
        self.__targets = _readonly(np.array(targets, dtype=np.int64).reshape(-1))
        self.__rates = _readonly(np.array(rates, dtype=np.float64).reshape(-1))
        self.__node_ids = tuple(str(i) for i in node_ids) if node_ids is not None else None
        self.__validate()
        self.__out_index = build_index(self.__sources, self.__vertex_count)
        self.__in_index = build_index(self.__targets, self.__vertex_count)

    def __validate(self):
        n = self.__vertex_count
        if not (len(self.__sources) == len(self.__targets) == len(self.__rates)):
            raise InvalidArgumentException('sources, targets and rates must have equal length')
        if self.__node_ids is not None and len(self.__node_ids) != n:
            raise InvalidArgumentException(f'expected {n} node ids, got {len(self.__node_ids)}')
        if len(self.__sources) == 0:
            return
        for name, endpoints in (('source', self.__sources), ('target', self.__targets)):
            bad = np.flatnonzero((endpoints < 0) | (endpoints >= n))
            if len(bad):
                raise ValidationException(f'edge {bad[0]} has {name} {endpoints[bad[0]]} outside [0, {n})')
        loops = np.flatnonzero(self.__sources == self.__targets)
        if len(loops):
            raise ValidationException(f'edge {loops[0]} is a self-loop on vertex {self.__sources[loops[0]]}')
        if not np.all(np.isfinite(self.__rates)) or np.any(self.__rates < 0):
            raise ValidationException('edge rates must be finite and non-negative')
        keys = self.__sources * n + self.__targets
        unique, counts = np.unique(keys, return_counts=True)
        if len(unique) != len(keys):
            dup = unique[counts > 1][0]
            raise ValidationException(f'duplicate edge ({dup // n}, {dup % n})')

    @classmethod
    def from_edges(cls, vertex_count: int, edges: Iterable[Edge], node_ids: Optional[Sequence[str]] = None):
        edges = list(edges)
        return cls(vertex_count,
                   [e.source for e in edges],
                   [e.target for e in edges],
                   [e.rate for e in edges],
                   node_ids)

    @property
    def vertex_count(self) -> int:
        return self.__vertex_count

    @property
    def edge_count(self) -> int:
        return len(self.__sources)

    @property
    def sources(self) -> np.ndarray:
        return self.__sources

    @property
    def targets(self) -> np.ndarray:
        return self.__targets

    @property
    def rates(self) -> np.ndarray:
        return self.__rates

    @property
    def node_ids(self) -> Optional[Tuple[str, ...]]:
        return self.__node_ids

    @property
    def out_index(self) -> AdjacencyIndex:
        return self.__out_index

    @property
    def in_index(self) -> AdjacencyIndex:
        return self.__in_index

    @property
    def edges(self) -> List[Edge]:
        return list(self.iter_edges())

    def iter_edges(self) -> Iterator[Edge]:
        for s, t, r in zip(self.__sources.tolist(), self.__targets.tolist(), self.__rates.tolist()):
            yield Edge(s, t, r)

    def external_id(self, vertex: int) -> str:
        return self.__node_ids[vertex] if self.__node_ids is not None else str(vertex)

    def external_ids(self) -> List[str]:
        if self.__node_ids is not None:
            return list(self.__node_ids)
        return [str(i) for i in range(self.__vertex_count)]

    def edge_set(self) -> Set[Tuple[int, int]]:
        return set(zip(self.__sources.tolist(), self.__targets.tolist()))

    def in_rate_sums(self) -> np.ndarray:
        return np.bincount(self.__targets, weights=self.__rates, minlength=self.__vertex_count)

    def poster_rates(self) -> np.ndarray:
        """Posting rate of each vertex, taken as the largest rate on its out-edges."""
        rates = np.zeros(self.__vertex_count)
        if self.edge_count:
            np.maximum.at(rates, self.__sources, self.__rates)
        return rates

    def indexes_consistent(self) -> bool:
        return (build_index(self.__sources, self.__vertex_count).same_as(self.__out_index)
                and build_index(self.__targets, self.__vertex_count).same_as(self.__in_index))

    def __eq__(self, other):
        if not isinstance(other, DirectedNetwork):
            return NotImplemented
        return (self.__vertex_count == other.vertex_count
                and np.array_equal(self.__sources, other.sources)
                and np.array_equal(self.__targets, other.targets)
                and np.array_equal(self.__rates, other.rates))

    def __repr__(self):
        return f'DirectedNetwork(vertex_count={self.__vertex_count}, edge_count={self.edge_count})'


def as_opinions(values, vertex_count: Optional[int] = None, unit_interval: bool = False) -> OpinionVector:
    opinions = np.array(values, dtype=np.float64).reshape(-1)
    if vertex_count is not None and len(opinions) != vertex_count:
        raise InvalidArgumentException(f'expected {vertex_count} opinions, got {len(opinions)}')
    if not np.all(np.isfinite(opinions)):
        raise ValidationException('opinions must be finite')
    if unit_interval and len(opinions) and (opinions.min() < 0 or opinions.max() > 1):
        bad = int(np.flatnonzero((opinions < 0) | (opinions > 1))[0])
        raise ValidationException(f'opinion {float(opinions[bad])!r} of vertex {bad} is outside [0, 1]')
    return _readonly(opinions)


def _sorted_network(vertex_count: int, sources: np.ndarray, targets: np.ndarray, rates: np.ndarray,
                    node_ids: Optional[Sequence[str]] = None) -> DirectedNetwork:
    order = np.lexsort((targets, sources))
    return DirectedNetwork(vertex_count, sources[order], targets[order], rates[order], node_ids)


def generate_path(n: int) -> Tuple[DirectedNetwork, OpinionVector]:
    if n < 2:
        raise InvalidArgumentException(f'path network needs at least 2 vertices, got {n}')
    left = np.arange(n - 1)
    sources = np.concatenate([left, left + 1])
    targets = np.concatenate([left + 1, left])
    network = _sorted_network(n, sources, targets, np.ones(2 * (n - 1)))
    return network, as_opinions(np.linspace(0.0, 1.0, n))


def _sample_block(rng: np.random.Generator, rows: int, cols: int, p: float,
                  diagonal: bool) -> Tuple[np.ndarray, np.ndarray]:
    # Bernoulli(p) on every pair == Binomial count + uniform subset of that size.
    pairs = rows * (cols - 1) if diagonal else rows * cols
    if pairs <= 0 or p <= 0:
        return np.empty(0, dtype=np.int64), np.empty(0, dtype=np.int64)
    count = int(rng.binomial(pairs, p))
    picks = rng.choice(pairs, size=count, replace=False) if count < pairs else np.arange(pairs)
    picks = np.sort(picks).astype(np.int64)
    if diagonal:
        r = picks // (cols - 1)
        c = picks % (cols - 1)
        c = c + (c >= r)
    else:
        r = picks // cols
        c = picks % cols
    return r, c


def _validate_probability_matrix(p, k: int) -> np.ndarray:
    matrix = np.array(p, dtype=np.float64)
    if matrix.shape != (k, k):
        raise InvalidArgumentException(f'probability matrix must be {k}x{k}, got shape {matrix.shape}')
    if not np.all(np.isfinite(matrix)) or np.any(matrix < 0) or np.any(matrix > 1):
        raise InvalidArgumentException('edge probabilities must lie in [0, 1]')
    return matrix


def generate_sbm(cluster_sizes: Sequence[int],
                 p,
                 cluster_opinions: Sequence[float],
                 seed: int,
                 rates: Optional[np.ndarray] = None) -> Tuple[DirectedNetwork, OpinionVector]:
    sizes = [int(s) for s in cluster_sizes]
    if not sizes or any(s <= 0 for s in sizes):
        raise InvalidArgumentException('cluster sizes must be positive integers')
    k = len(sizes)
    matrix = _validate_probability_matrix(p, k)
    if len(cluster_opinions) != k:
        raise InvalidArgumentException(f'expected {k} cluster opinions, got {len(cluster_opinions)}')

    rng = np.random.default_rng(seed)
    starts = np.concatenate([[0], np.cumsum(sizes)])
    sources, targets = [], []
    for a in range(k):
        for b in range(k):
            r, c = _sample_block(rng, sizes[a], sizes[b], matrix[a, b], diagonal=(a == b))
            sources.append(r + starts[a])
            targets.append(c + starts[b])
    sources = np.concatenate(sources)
    targets = np.concatenate(targets)
    vertex_count = int(starts[-1])
    edge_rates = np.ones(len(sources)) if rates is None else np.asarray(rates, dtype=np.float64)[sources]
    network = _sorted_network(vertex_count, sources, targets, edge_rates)
    opinions = as_opinions(np.repeat(np.asarray(cluster_opinions, dtype=np.float64), sizes))
    logger.debug(f'generated SBM with {vertex_count} vertices and {network.edge_count} edges (seed {seed})')
    return network, opinions


def generate_er(n: int, p: float, seed: int) -> DirectedNetwork:
    if n < 1:
        raise InvalidArgumentException(f'Erdos-Renyi network needs at least 1 vertex, got {n}')
    network, _ = generate_sbm([n], [[p]], [0.0], seed)
    return network


def generate_standin(vertex_count: int = 30000,
                     target_edges: int = 1_000_000,
                     inter_fraction: float = 0.1,
                     low_mode: float = 0.3,
                     high_mode: float = 0.7,
                     mode_spread: float = 0.12,
                     rate_range: Tuple[float, float] = (0.2, 5.0),
                     seed: int = 0) -> Tuple[DirectedNetwork, OpinionVector]:
    """Two-community follower graph with a bimodal opinion mixture.

    Half of the users hold opinions <= 0.5 and half > 0.5, each user posts at a
    single rate shared by all of its out-edges.
    """
    if vertex_count < 4 or vertex_count % 2:
        raise InvalidArgumentException('stand-in vertex_count must be an even number >= 4')
    if not 0 <= inter_fraction <= 1:
        raise InvalidArgumentException('inter_fraction must lie in [0, 1]')
    low_rate, high_rate = rate_range
    if not 0 < low_rate <= high_rate:
        raise InvalidArgumentException('rate_range must satisfy 0 < low <= high')
    half = vertex_count // 2
    p_intra = (1 - inter_fraction) * target_edges / (2.0 * half * (half - 1))
    p_inter = inter_fraction * target_edges / (2.0 * half * half)
    if p_intra > 1 or p_inter > 1:
        raise InvalidArgumentException(f'{target_edges} edges do not fit on {vertex_count} vertices')

    rng = np.random.default_rng(seed)
    above_half = np.nextafter(0.5, 1.0)
    low = np.clip(rng.normal(low_mode, mode_spread, half), 0.0, 0.5)
    high = np.clip(rng.normal(high_mode, mode_spread, half), above_half, 1.0)
    user_rates = np.exp(rng.uniform(np.log(low_rate), np.log(high_rate), vertex_count))
    network, _ = generate_sbm([half, half], [[p_intra, p_inter], [p_inter, p_intra]], [0.0, 0.0],
                              seed=int(rng.integers(2 ** 32)), rates=user_rates)
    logger.info(f'generated stand-in network: {vertex_count} vertices, {network.edge_count} edges')
    return network, as_opinions(np.concatenate([low, high]))


def sample_balanced_subgraph(network: DirectedNetwork,
                             opinions: OpinionVector,
                             per_group: int,
                             seed: int,
                             threshold: float = 0.5) -> Tuple[DirectedNetwork, OpinionVector]:
    """Induced subgraph on per_group users at or below threshold and per_group above it."""
    opinions = as_opinions(opinions, network.vertex_count)
    low = np.flatnonzero(opinions <= threshold)
    high = np.flatnonzero(opinions > threshold)
    if per_group < 0 or len(low) < per_group or len(high) < per_group:
        raise InvalidArgumentException(
            f'cannot sample {per_group} users per group from groups of {len(low)} and {len(high)}')
    rng = np.random.default_rng(seed)
    keep = np.sort(np.concatenate([rng.choice(low, per_group, replace=False),
                                   rng.choice(high, per_group, replace=False)]))
    new_id = np.full(network.vertex_count, -1, dtype=np.int64)
    new_id[keep] = np.arange(len(keep))
    mask = (new_id[network.sources] >= 0) & (new_id[network.targets] >= 0)
    node_ids = [network.external_id(v) for v in keep.tolist()]
    sub = DirectedNetwork(len(keep), new_id[network.sources[mask]], new_id[network.targets[mask]],
                          network.rates[mask], node_ids)
    return sub, as_opinions(opinions[keep])
