from typing import Dict, Optional, Tuple

import numpy as np

from shadowban.common.csv_tables import format_floats, parse_floats, read_table, write_table
from shadowban.common.network import DirectedNetwork, OpinionVector, as_opinions
from shadowban.helpers.exceptions import ValidationException
from shadowban.helpers.logger import logger

EDGE_SCHEMA = ('source', 'target', 'rate')
NODE_SCHEMA = ('node', 'opinion')
ID_MAP_SCHEMA = ('external_id', 'internal_id')


def id_map_path_for(nodes_path: str) -> str:
    return nodes_path + '.idmap.csv'


def _is_dense(ids) -> bool:
    return all(external == str(internal) for internal, external in enumerate(ids))


def load_network(edges_path: str,
                 nodes_path: str,
                 id_map_path: Optional[str] = None) -> Tuple[DirectedNetwork, OpinionVector]:
    """Read a network from the edge and node CSV files.

    Node ids may be arbitrary strings; they are remapped to dense internal ids in
    node-file order. When they are not already dense and `id_map_path` is given,
    the mapping is written there.
    """
    nodes, node_lines = read_table(nodes_path, NODE_SCHEMA)
    node_ids = nodes['node'].tolist()
    index: Dict[str, int] = {}
    for position, (node_id, line) in enumerate(zip(node_ids, node_lines)):
        if node_id in index:
            raise ValidationException(f'{nodes_path}:{line}: duplicate node id {node_id}')
        index[node_id] = position
    opinions = parse_floats(nodes, 'opinion', nodes_path, node_lines)
    outside = np.flatnonzero(~((opinions >= 0) & (opinions <= 1)))
    if len(outside):
        first = outside[0]
        raise ValidationException(
            f'{nodes_path}:{node_lines[first]}: opinion {nodes["opinion"].iloc[first]} of node {node_ids[first]} '
            f'is outside [0, 1]')

    edges, edge_lines = read_table(edges_path, EDGE_SCHEMA)
    rates = parse_floats(edges, 'rate', edges_path, edge_lines)
    endpoints = []
    for column in ('source', 'target'):
        mapped = edges[column].map(index)
        missing = np.flatnonzero(mapped.isna().to_numpy())
        if len(missing):
            first = missing[0]
            raise ValidationException(
                f'{edges_path}:{edge_lines[first]}: edge {column} {edges[column].iloc[first]} is not a known node id')
        endpoints.append(mapped.to_numpy(dtype=np.int64))
    bad_rate = np.flatnonzero(~(np.isfinite(rates) & (rates >= 0)))
    if len(bad_rate):
        raise ValidationException(f'{edges_path}:{edge_lines[bad_rate[0]]}: rate must be finite and non-negative')

    dense = _is_dense(node_ids)
    network = DirectedNetwork(len(node_ids), endpoints[0], endpoints[1], rates, None if dense else node_ids)
    if not dense and id_map_path is not None:
        write_id_map(network, id_map_path)
    logger.info(f'loaded network with {network.vertex_count} vertices and {network.edge_count} edges '
                f'from {edges_path}')
    return network, as_opinions(opinions, network.vertex_count)


def write_id_map(network: DirectedNetwork, path: str) -> None:
    write_table({'external_id': network.external_ids(),
                 'internal_id': np.arange(network.vertex_count)}, path)


def save_network(network: DirectedNetwork, opinions: OpinionVector, edges_path: str, nodes_path: str) -> None:
    opinions = as_opinions(opinions, network.vertex_count)
    ids = np.array(network.external_ids(), dtype=object)
    write_table({'source': ids[network.sources] if network.edge_count else [],
                 'target': ids[network.targets] if network.edge_count else [],
                 'rate': format_floats(network.rates)}, edges_path)
    write_table({'node': ids, 'opinion': format_floats(opinions)}, nodes_path)
    if network.node_ids is not None:
        write_id_map(network, id_map_path_for(nodes_path))
    logger.debug(f'saved network to {edges_path} and {nodes_path}')
