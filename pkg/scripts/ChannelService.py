import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import erfc

from .errors import ConfigError, UnsupportedGeometryError
from . import config
from .lattice.construction import normalized_volume
from .lattice.geometry import exact_log2_volume, lattice_basis

logger = logging.getLogger('Channel')

ZERO_WORD_JUSTIFICATION = (
    "Lattices are geometrically uniform: every point sees the same Voronoi cell, so the "
    "error probability of a lattice decoder whose decisions commute with lattice translations "
    "does not depend on the transmitted point. The harness therefore sends the all-zero point; "
    "the random-member mode exists only to cross-check this."
)


def zero_word_justification():
    return ZERO_WORD_JUSTIFICATION


def vnr_linear(vnr_db):
    return 10.0 ** (vnr_db / 10.0)


def sigma_for_normalized_volume(normalized, vnr_db):
    if not math.isfinite(vnr_db):
        raise ConfigError(f"VNR must be finite, got {vnr_db}")
    return math.sqrt(normalized / (2.0 * math.pi * math.e * vnr_linear(vnr_db)))


def sigma_from_vnr(lat, vnr_db):
    """
    Noise standard deviation per dimension at the given VNR

    sigma^2 = det^(2/n) / (2 pi e VNR), using the exact lattice volume.
    """
    return sigma_for_normalized_volume(normalized_volume(lat, exact_log2_volume(lat)), vnr_db)


def vnr_from_sigma(lat, sigma):
    if sigma <= 0:
        raise ConfigError(f"Noise standard deviation must be positive, got {sigma}")
    normalized = normalized_volume(lat, exact_log2_volume(lat))
    return 10.0 * math.log10(normalized / (2.0 * math.pi * math.e * sigma * sigma))


def trial_rng(master_seed, point_index, trial_index):
    """Independent counter-based stream for one trial of one sweep point"""
    sequence = np.random.SeedSequence(master_seed, spawn_key=(point_index, trial_index))
    return np.random.Generator(np.random.Philox(sequence))


def awgn_sample(x, sigma, rng):
    """r = x + e with e i.i.d. N(0, sigma^2)"""
    if sigma <= 0:
        raise ConfigError(f"Noise standard deviation must be positive, got {sigma}")
    x = np.asarray(x)
    return x + sigma * rng.standard_normal(x.shape)


def nep(word_error_prob, n):
    """Error probability per two dimensions: (2/n) p"""
    if not 0.0 <= word_error_prob <= 1.0:
        raise ConfigError(f"Probability out of range: {word_error_prob}")
    return 2.0 * word_error_prob / n


def analytic_scalar_pe(sigma):
    """Exact error probability 2Q(1/sigma) of nearest-point decoding on 2Z"""
    if sigma <= 0:
        raise ConfigError(f"Noise standard deviation must be positive, got {sigma}")
    return float(erfc(1.0 / (sigma * math.sqrt(2.0))))


def random_member(lat, rng, spread=2):
    """
    Random lattice point with small coordinates

    1-level lattices draw c + 2z from the code; multi-level ones combine
    the rows of the HNF basis.
    """
    if lat.a == 0:
        code = lat.chain.codes[0]
        generator = code.generator.astype(np.int64)
        message = rng.integers(0, 2, size=generator.shape[0])
        codeword = message @ generator % 2 if generator.shape[0] else np.zeros(lat.n, dtype=np.int64)
        return codeword + 2 * rng.integers(-spread, spread + 1, size=lat.n)
    if lat.n > config.MAX_EXACT_LATTICE_DIMENSION:
        raise UnsupportedGeometryError(f"Random members of multi-level lattices need n <= "
                                       f"{config.MAX_EXACT_LATTICE_DIMENSION}")
    basis = np.asarray(lattice_basis(lat), dtype=np.int64)
    return rng.integers(-spread, spread + 1, size=lat.n) @ basis


@dataclass(frozen=True)
class ChannelConfig:
    vnr_db: float
    n: int
    normalized_volume: float

    def __post_init__(self):
        if self.sigma <= 0:
            raise ConfigError("Derived noise level must be positive")

    @classmethod
    def for_lattice(cls, lat, vnr_db):
        return cls(float(vnr_db), lat.n, normalized_volume(lat, exact_log2_volume(lat)))

    @property
    def sigma(self):
        return sigma_for_normalized_volume(self.normalized_volume, self.vnr_db)


@dataclass(frozen=True)
class TrialOutcome:
    word_error: bool
    symbol_errors: int
    iterations: int
    converged: bool

    def __post_init__(self):
        if not self.word_error and self.symbol_errors:
            raise ValueError("Symbol errors reported without a word error")


class ChannelService:
    """
    Transmits lattice points over the unconstrained AWGN channel

    Trial t of sweep point p always draws from trial_rng(master, p, t), so a
    batch is reproducible no matter which worker runs it.
    """

    def __init__(self, lat, channel_config, master_seed, random_members=False):
        self.lat = lat
        self.channel_config = channel_config
        self.master_seed = master_seed
        self.random_members = random_members

    @property
    def sigma(self):
        return self.channel_config.sigma

    def transmit(self, point_index, first_trial, count):
        """
        Returns:
            (sent, received): (count, n) integer and real arrays
        """
        n = self.lat.n
        sent = np.zeros((count, n), dtype=np.int64)
        received = np.empty((count, n), dtype=np.float64)
        for offset in range(count):
            rng = trial_rng(self.master_seed, point_index, first_trial + offset)
            if self.random_members:
                sent[offset] = random_member(self.lat, rng)
            received[offset] = awgn_sample(sent[offset], self.sigma, rng)
        return sent, received

    @staticmethod
    def outcomes(sent, decoded):
        """Per-trial word-error flags and symbol-error counts"""
        symbol_errors = (sent != decoded).sum(axis=1)
        return symbol_errors > 0, symbol_errors
