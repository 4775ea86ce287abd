import logging

import numpy as np

from .. import config
from ..errors import DimensionTooLargeError, UnsupportedDecoderError

logger = logging.getLogger('Decoder')


def _codewords(code):
    k = code.k
    if k > config.MAX_ORACLE_DIMENSION:
        raise DimensionTooLargeError(
            f"ML oracle refuses k={k} (limit {config.MAX_ORACLE_DIMENSION})")
    generator = code.generator.astype(np.int64)
    messages = np.arange(1 << k, dtype=np.int64)
    bits = (messages[:, None] >> np.arange(k, dtype=np.int64)) & 1
    return bits @ generator % 2 if k else np.zeros((1, code.n), dtype=np.int64)


def ml_oracle_batch(lat, received):
    """
    Exact nearest lattice point for each row of `received`

    Every codeword c is lifted to its nearest point of c + 2Z^n (ties to the
    smaller integer) and the closest lift wins; equal distances go to the
    lexicographically smallest point.

    Returns:
        (points, squared distances)

    Raises:
        UnsupportedDecoderError: for lattices with more than one level
        DimensionTooLargeError: if the code dimension exceeds the oracle limit
    """
    if lat.a != 0:
        raise UnsupportedDecoderError("The ML oracle enumerates 1-level lattices only")
    received = np.atleast_2d(np.asarray(received, dtype=np.float64))
    T = received.shape[0]
    best = np.zeros((T, lat.n), dtype=np.int64)
    best_distance = np.full(T, np.inf)
    rows = np.arange(T)

    for codeword in _codewords(lat.chain.codes[0]):
        candidate = codeword + 2 * np.ceil((received - codeword) / 2.0 - 0.5).astype(np.int64)
        distance = ((received - candidate) ** 2).sum(axis=1)

        differs = candidate != best
        first = np.argmax(differs, axis=1)
        smaller = differs.any(axis=1) & (candidate[rows, first] < best[rows, first])
        better = (distance < best_distance) | ((distance == best_distance) & smaller)

        best[better] = candidate[better]
        best_distance[better] = distance[better]
    return best, best_distance


def ml_oracle(lat, r):
    points, _ = ml_oracle_batch(lat, np.asarray(r, dtype=np.float64)[None, :])
    return points[0]
