import numpy as np

from .common import BatchDecoderOutput
from .min_sum import min_sum_decode_batch
from .oracle import ml_oracle_batch
from .sum_product import sum_product_decode_batch


def decode_batch(lat, graph, received, sigma, cfg):
    """Run the decoder named by cfg.algorithm on a (T, n) batch"""
    if cfg.algorithm == "min-sum":
        return min_sum_decode_batch(graph, received, cfg)
    if cfg.algorithm == "sum-product":
        return sum_product_decode_batch(graph, received, sigma, cfg)

    points, _ = ml_oracle_batch(lat, received)
    T = points.shape[0]
    return BatchDecoderOutput(points, points % lat.modulus, np.ones(T, dtype=np.int64),
                              np.ones(T, dtype=bool), np.asarray(received, dtype=np.float64))
