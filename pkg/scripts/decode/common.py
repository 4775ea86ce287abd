import logging
from dataclasses import dataclass, field

import numpy as np
from scipy.sparse import csr_matrix

from .. import config
from ..errors import ConfigError, UnsupportedDecoderError
from .costs import CosetCostTable

logger = logging.getLogger('Decoder')

ALGORITHMS = ("min-sum", "sum-product", "ml")


@dataclass(frozen=True)
class DecoderConfig:
    algorithm: str = config.DECODER_ALGORITHM
    max_iterations: int = config.MAX_ITERATIONS
    early_stop: bool = config.EARLY_STOP
    damping: float = config.DAMPING
    llr_clip: float = config.LLR_CLIP

    def __post_init__(self):
        if self.algorithm not in ALGORITHMS:
            raise ConfigError(f"Unknown decoder '{self.algorithm}'; choose one of {', '.join(ALGORITHMS)}")
        if self.max_iterations < 1:
            raise ConfigError("max_iterations must be at least 1")
        if not 0.0 < self.damping <= 1.0:
            raise ConfigError(f"damping must lie in (0, 1], got {self.damping}")
        if self.llr_clip <= 0:
            raise ConfigError("llr_clip must be positive")

    def describe(self):
        return (f"algorithm={self.algorithm} max_iterations={self.max_iterations} early_stop={self.early_stop} "
                f"damping={self.damping} llr_clip={self.llr_clip}")


@dataclass(frozen=True)
class DecoderOutput:
    point: np.ndarray
    label: np.ndarray
    iterations: int
    converged: bool
    soft: np.ndarray = field(repr=False)


@dataclass(frozen=True)
class BatchDecoderOutput:
    """One row per received word"""
    points: np.ndarray
    labels: np.ndarray
    iterations: np.ndarray
    converged: np.ndarray
    soft: np.ndarray = field(repr=False)

    def __len__(self):
        return len(self.iterations)

    def item(self, index):
        return DecoderOutput(self.points[index], self.labels[index], int(self.iterations[index]),
                             bool(self.converged[index]), self.soft[index])


def hard_decision(metrics):
    """
    Labels from decision metrics; ties go to label 0

    A CosetCostTable decides by the cheapest label, anything else is read
    as LLR totals (L > 0 means label 0).
    """
    if isinstance(metrics, CosetCostTable):
        return np.argmin(metrics.costs, axis=-1).astype(np.int64)
    return (np.asarray(metrics) < 0).astype(np.int64)


def lift_to_lattice(label, r, modulus=2):
    """x_i = c_i + g * round((r_i - c_i) / g), halves rounded to even"""
    label = np.asarray(label, dtype=np.int64)
    r = np.asarray(r, dtype=np.float64)
    return label + modulus * np.rint((r - label) / modulus).astype(np.int64)


class GraphLayout:
    """
    Index arrays shared by the message-passing decoders

    Edges arrive sorted by check, so each non-empty check owns a
    contiguous slice starting at `starts`.
    """

    def __init__(self, graph):
        if not graph.is_binary:
            raise UnsupportedDecoderError(
                "Iterative decoding is implemented for 1-level (binary label) lattices only")
        self.n = graph.n
        self.num_edges = graph.num_edges
        self.edge_check = graph.check_index
        self.edge_symbol = graph.symbol_index
        if self.num_edges and np.any(np.diff(self.edge_check) < 0):
            raise UnsupportedDecoderError("Tanner graph edges must be sorted by check")

        degrees = graph.check_degrees()
        active = degrees > 0
        offsets = np.concatenate(([0], np.cumsum(degrees)))
        self.starts = offsets[:-1][active]
        self.group = np.repeat(np.arange(int(active.sum())), degrees[active])

        ones = np.ones(self.num_edges, dtype=np.float64)
        # E x n: edge-to-symbol incidence for symbol sums
        self.incidence = csr_matrix((ones, (np.arange(self.num_edges), self.edge_symbol)),
                                    shape=(self.num_edges, self.n))
        self.parity = csr_matrix((np.ones(self.num_edges, dtype=np.int64), (self.edge_check, self.edge_symbol)),
                                 shape=(graph.r, self.n))

    def symbol_sums(self, messages):
        """(T, E) edge messages -> (T, n) per-symbol sums"""
        return np.asarray(self.incidence.T @ messages.T).T

    def syndrome(self, labels):
        return np.asarray(self.parity @ labels.T).T % 2

    def group_reduce(self, ufunc, values):
        return ufunc.reduceat(values, self.starts, axis=1)


def syndrome(graph, labels):
    """H c mod 2 for a label word (or a batch of them)"""
    labels = np.atleast_2d(np.asarray(labels, dtype=np.int64))
    return GraphLayout(graph).syndrome(labels)


def flooding_decode(layout, channel_llr, cfg, check_update):
    """
    Flooding schedule shared by min-sum and sum-product

    Each iteration first decides on the totals and checks the syndrome,
    then passes messages, so a member of the lattice stops at iteration 1.
    Words that satisfy the syndrome leave the active set when early_stop
    is on.
    """
    T = channel_llr.shape[0]
    c2v = np.zeros((T, layout.num_edges))
    labels = np.zeros((T, layout.n), dtype=np.int64)
    soft = np.array(channel_llr, dtype=np.float64)
    iterations = np.zeros(T, dtype=np.int64)
    converged = np.zeros(T, dtype=bool)
    live = np.arange(T)

    for iteration in range(1, cfg.max_iterations + 1):
        total = channel_llr[live] + layout.symbol_sums(c2v[live])
        hard = (total < 0).astype(np.int64)
        satisfied = ~layout.syndrome(hard).any(axis=1)

        labels[live] = hard
        soft[live] = total
        iterations[live] = iteration
        converged[live] = satisfied

        if cfg.early_stop:
            live, total = live[~satisfied], total[~satisfied]
        if len(live) == 0 or iteration == cfg.max_iterations or layout.num_edges == 0:
            break

        old = c2v[live]
        v2c = total[:, layout.edge_symbol] - old
        new = np.clip(check_update(layout, v2c), -cfg.llr_clip, cfg.llr_clip)
        if cfg.damping < 1.0:
            new = cfg.damping * new + (1.0 - cfg.damping) * old
        c2v[live] = new

    return labels, soft, iterations, converged


def edge_signs(layout, v2c):
    """Sign of the product over the other edges of each check (zero counts as positive)"""
    negative = v2c < 0
    parity = layout.group_reduce(np.add, negative.astype(np.int64)) % 2
    others = parity[:, layout.group] ^ negative
    return np.where(others, -1.0, 1.0)
