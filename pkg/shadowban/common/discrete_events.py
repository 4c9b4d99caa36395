from enum import Enum

import numpy as np

from shadowban.common.dynamics import DynamicsParams, ban_strengths, shift_function
from shadowban.common.network import DirectedNetwork, OpinionVector, as_opinions
from shadowban.common.policy import realize_stochastic
from shadowban.helpers.exceptions import InvalidArgumentException
from shadowban.helpers.logger import logger


class DeliveryMode(str, Enum):
    # a user's post reaches all of its followers at once
    BROADCAST = 'broadcast'
    # every edge carries its own independent stream of posts
    PER_EDGE = 'per-edge'


def simulate_discrete_events(network: DirectedNetwork,
                             opinions: OpinionVector,
                             policy,
                             params: DynamicsParams,
                             horizon: float,
                             seed: int,
                             delivery: DeliveryMode = DeliveryMode.BROADCAST) -> OpinionVector:
    """Post-by-post simulation of the opinion process.

    Posts form a merged Poisson process; each delivered post moves the reader by
    f(poster - reader) using the opinions at that instant. A post is hidden on
    edge e with probability u_e. In broadcast mode a user posts at the largest
    rate among its out-edges and an edge with a lower rate receives each post with
    probability rate_e / poster_rate.
    """
    if horizon < 0:
        raise InvalidArgumentException(f'horizon must be non-negative, got {horizon}')
    theta = np.array(as_opinions(opinions, network.vertex_count))
    u = ban_strengths(policy, network.edge_count)
    u = np.zeros(network.edge_count) if u is None else u
    rng = np.random.default_rng(seed)

    if delivery == DeliveryMode.BROADCAST:
        channel_rates = network.poster_rates()
        poster = channel_rates[network.sources]
        share = np.divide(network.rates, poster, out=np.zeros(network.edge_count), where=poster > 0)
    else:
        channel_rates = np.asarray(network.rates, dtype=np.float64)
        share = np.ones(network.edge_count)
    # posts dropped by rate thinning or by the ban are both "not visible"
    hidden = 1.0 - share * (1.0 - u)

    total_rate = float(channel_rates.sum())
    if total_rate <= 0 or horizon == 0:
        return as_opinions(theta)
    post_count = int(rng.poisson(total_rate * horizon))
    cumulative = np.cumsum(channel_rates)
    channels = np.searchsorted(cumulative, rng.random(post_count) * total_rate, side='right')
    channels = np.minimum(channels, len(channel_rates) - 1)
    logger.debug(f'discrete-event run: {post_count} posts over {horizon} days (seed {seed})')

    for channel in channels.tolist():
        if delivery == DeliveryMode.BROADCAST:
            edge_ids = network.out_index.of(channel)
        else:
            edge_ids = np.array([channel])
        if len(edge_ids) == 0:
            continue
        visible = realize_stochastic(hidden, rng, edge_ids)
        readers = network.targets[edge_ids[visible]]
        if len(readers) == 0:
            continue
        source = network.sources[edge_ids[0]]
        theta[readers] += shift_function(theta[source] - theta[readers], params)
    return as_opinions(theta)
