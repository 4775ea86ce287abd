import numpy as np

from .common import (BatchDecoderOutput, DecoderConfig, GraphLayout, edge_signs, flooding_decode,
                     lift_to_lattice)
from .costs import init_costs


def min_sum_check_update(layout, v2c):
    """Product of the other signs times the smallest other magnitude"""
    magnitude = np.abs(v2c)
    min1 = layout.group_reduce(np.minimum, magnitude)
    at_min = magnitude == min1[:, layout.group]

    # only the first minimum of each check is excluded from its own min
    running = np.cumsum(at_min, axis=1)
    before = np.zeros_like(running)
    before[:, 1:] = running[:, :-1]
    first = at_min & ((running - before[:, layout.starts][:, layout.group]) == 1)

    masked = np.where(first, np.inf, magnitude)
    min2 = layout.group_reduce(np.minimum, masked)
    others = np.where(first, min2[:, layout.group], min1[:, layout.group])
    return edge_signs(layout, v2c) * others


def min_sum_decode_batch(graph, received, cfg=None):
    """
    Min-sum over the squared-distance cost differences of each received word

    Args:
        graph: binary TannerGraph
        received: (T, n) real array
        cfg: DecoderConfig

    Raises:
        UnsupportedDecoderError: for non-binary label alphabets
    """
    cfg = cfg or DecoderConfig(algorithm="min-sum")
    layout = GraphLayout(graph)
    received = np.atleast_2d(np.asarray(received, dtype=np.float64))
    channel = init_costs(received, 2).llr()
    labels, soft, iterations, converged = flooding_decode(layout, channel, cfg, min_sum_check_update)
    return BatchDecoderOutput(lift_to_lattice(labels, received), labels, iterations, converged, soft)


def min_sum_decode(graph, r, cfg=None):
    return min_sum_decode_batch(graph, np.asarray(r, dtype=np.float64)[None, :], cfg).item(0)
