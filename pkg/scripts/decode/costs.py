from dataclasses import dataclass

import numpy as np
from scipy.special import logsumexp

from .. import config
from ..errors import ConfigError


@dataclass(frozen=True)
class CosetCostTable:
    """
    costs[..., i, b] = min over integers z of (r_i - b - g z)^2

    Leading axes are batch axes.
    """
    costs: np.ndarray
    alphabet: int

    def llr(self):
        """w(1) - w(0) for the binary alphabet (positive favours label 0)"""
        if self.alphabet != 2:
            raise ConfigError("Cost differences are defined for the binary alphabet only")
        return self.costs[..., 1] - self.costs[..., 0]


def init_costs(r, g=2):
    """Squared distance from each r_i to the nearest point of every coset b + gZ"""
    r = np.asarray(r, dtype=np.float64)
    labels = np.arange(g, dtype=np.float64)
    t = r[..., None] - labels
    return CosetCostTable((t - g * np.rint(t / g)) ** 2, int(g))


def coset_llr(r, sigma, replicas=None):
    """
    log P(r | coset 0) - log P(r | coset 1) for the cosets 2Z and 1 + 2Z

    Each coset sum keeps the `replicas` integer points nearest to r.
    """
    if sigma <= 0:
        raise ConfigError(f"Noise standard deviation must be positive, got {sigma}")
    replicas = config.COSET_REPLICAS if replicas is None else replicas
    r = np.asarray(r, dtype=np.float64)
    offsets = np.arange(replicas) - (replicas - 1) // 2
    scale = 2.0 * sigma * sigma

    def log_coset(b):
        t = r - b
        centre = np.rint(t / 2.0)
        points = 2.0 * (centre[..., None] + offsets)
        return logsumexp(-((t[..., None] - points) ** 2) / scale, axis=-1)

    return log_coset(0.0) - log_coset(1.0)
