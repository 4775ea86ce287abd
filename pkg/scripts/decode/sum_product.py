import numpy as np

from .common import (BatchDecoderOutput, DecoderConfig, GraphLayout, edge_signs, flooding_decode,
                     lift_to_lattice)
from .costs import coset_llr

TINY = 1e-300
ATANH_LIMIT = 1.0 - 1e-15


def sum_product_check_update(layout, v2c):
    """tanh rule, with the product over the other edges taken in the log domain"""
    log_magnitude = np.log(np.maximum(np.abs(np.tanh(v2c / 2.0)), TINY))
    group_sum = layout.group_reduce(np.add, log_magnitude)
    others = np.exp(group_sum[:, layout.group] - log_magnitude)
    product = np.clip(edge_signs(layout, v2c) * others, -ATANH_LIMIT, ATANH_LIMIT)
    return 2.0 * np.arctanh(product)


def sum_product_decode_batch(graph, received, sigma, cfg=None):
    """
    Belief propagation on exact coset log-likelihood ratios

    Raises:
        ConfigError: if sigma <= 0
        UnsupportedDecoderError: for non-binary label alphabets
    """
    cfg = cfg or DecoderConfig(algorithm="sum-product")
    layout = GraphLayout(graph)
    received = np.atleast_2d(np.asarray(received, dtype=np.float64))
    channel = np.clip(coset_llr(received, sigma), -cfg.llr_clip, cfg.llr_clip)
    labels, soft, iterations, converged = flooding_decode(layout, channel, cfg, sum_product_check_update)
    return BatchDecoderOutput(lift_to_lattice(labels, received), labels, iterations, converged, soft)


def sum_product_decode(graph, r, sigma, cfg=None):
    return sum_product_decode_batch(graph, np.asarray(r, dtype=np.float64)[None, :], sigma, cfg).item(0)
