import itertools
import logging
import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .. import config
from ..errors import ConstructionError, DimensionTooLargeError
from .matrix import SparseBinaryMatrix, gf2_null_space

logger = logging.getLogger('Codes')


@dataclass(frozen=True)
class BinaryCode:
    """
    Binary linear code given by its parity-check matrix

    Regular LDPC matrices with an even column weight always contain
    dependent rows, so the parity matrix is kept as built and the dimension
    is n - rank. Pass require_independent=True to reject such matrices.
    """
    parity: SparseBinaryMatrix
    require_independent: bool = field(default=False, compare=False)

    def __post_init__(self):
        if self.require_independent and self.rank != self.parity.rows:
            raise ConstructionError(
                f"Parity matrix has {self.parity.rows} rows but GF(2) rank {self.rank}; "
                "dependent rows are not accepted here")

    @classmethod
    def from_dense(cls, dense, require_independent=False):
        return cls(SparseBinaryMatrix.from_dense(dense), require_independent)

    @classmethod
    def whole_space(cls, n):
        return cls(SparseBinaryMatrix(0, n, ()))

    @property
    def n(self):
        return self.parity.cols

    @cached_property
    def rank(self):
        return self.parity.rank()

    @property
    def k(self):
        return self.n - self.rank

    @property
    def redundant_rows(self):
        return self.parity.rows - self.rank

    @cached_property
    def generator(self):
        """k x n generator matrix (rows span the code)"""
        return gf2_null_space(self.parity.to_dense(), self.n)

    def contains(self, word):
        word = np.asarray(word, dtype=np.int64) % 2
        return not np.any(self.parity.to_dense().astype(np.int64) @ word % 2)

    def __repr__(self):
        return f"BinaryCode([{self.n},{self.k}], rows={self.parity.rows})"


def code_contains(big, small):
    """True iff every codeword of `small` lies in `big`"""
    if big.n != small.n:
        return False
    generator = small.generator.astype(np.int64)
    if generator.shape[0] == 0 or big.parity.rows == 0:
        return True
    return not np.any(generator @ big.parity.to_dense().T.astype(np.int64) % 2)


def same_code(first, second):
    return code_contains(first, second) and code_contains(second, first)


def min_distance(code):
    """
    Minimum Hamming weight over the nonzero codewords, by exhaustive enumeration

    Returns math.inf for the zero code.

    Raises:
        DimensionTooLargeError: if k exceeds config.MAX_MIN_DISTANCE_DIMENSION
    """
    k = code.k
    if k > config.MAX_MIN_DISTANCE_DIMENSION:
        raise DimensionTooLargeError(
            f"Refusing exhaustive min_distance for k={k} (limit {config.MAX_MIN_DISTANCE_DIMENSION})")
    if k == 0:
        return math.inf

    generator = code.generator.astype(np.int64)
    shifts = np.arange(k, dtype=np.int64)
    best = code.n
    chunk = 1 << 16
    for start in range(1, 1 << k, chunk):
        messages = np.arange(start, min(start + chunk, 1 << k), dtype=np.int64)
        bits = (messages[:, None] >> shifts) & 1
        weights = (bits @ generator % 2).sum(axis=1)
        best = min(best, int(weights.min()))
        if best == 1:
            break
    return best


def min_distance_syndrome_search(code, max_weight=None):
    """
    Minimum distance as the smallest number of parity-matrix columns summing to zero

    Works from H only, so it cross-checks the generator-side enumeration.
    """
    n = code.n
    columns = [0] * n
    for j, support in enumerate(code.parity.row_support):
        for c in support:
            columns[c] |= 1 << j
    limit = n if max_weight is None else min(max_weight, n)
    for weight in range(1, limit + 1):
        for subset in itertools.combinations(range(n), weight):
            syndrome = 0
            for c in subset:
                syndrome ^= columns[c]
            if syndrome == 0:
                return weight
    return math.inf


def min_distance_lower_bound(code, girth_value=None):
    """
    Structural lower bound on d_min usable at any block length

    No zero column gives 2, pairwise distinct columns give 3, and a Tanner
    graph of girth >= 6 with minimum column weight w gives w + 1.
    """
    columns = code.parity.column_support()
    if any(len(c) == 0 for c in columns):
        return 1
    if len(set(columns)) < len(columns):
        return 2
    bound = 3
    if girth_value is not None and girth_value >= 6:
        bound = max(bound, min(len(c) for c in columns) + 1)
    return bound


def dual_code(code):
    """Code generated by the rows of code.parity"""
    generator = code.generator
    return BinaryCode(SparseBinaryMatrix.from_dense(generator) if generator.shape[0]
                      else SparseBinaryMatrix(0, code.n, ()))


@dataclass(frozen=True)
class DegreeProfile:
    """
    Target degrees for an (E-)PEG construction

    symbol_degree[l] is the cumulative column degree of the parity matrix
    of C_l, so level l adds symbol_degree[l] - symbol_degree[l-1] edges per
    symbol node.
    """
    symbol_degree: tuple
    check_degree: int
    r_levels: tuple

    def __post_init__(self):
        object.__setattr__(self, 'symbol_degree', tuple(int(d) for d in self.symbol_degree))
        object.__setattr__(self, 'r_levels', tuple(int(r) for r in self.r_levels))
        if len(self.symbol_degree) != len(self.r_levels):
            raise ConstructionError("symbol_degree and r_levels must have one entry per level")
        if any(b <= a for a, b in zip(self.symbol_degree, self.symbol_degree[1:])):
            raise ConstructionError(f"Symbol degrees must increase with the level: {self.symbol_degree}")
        if self.symbol_degree and self.check_degree <= self.symbol_degree[-1]:
            raise ConstructionError(
                f"Check degree {self.check_degree} must exceed symbol degree {self.symbol_degree[-1]}")

    @property
    def levels(self):
        return len(self.r_levels)


def regular_family_profile(a, n):
    """
    Degree profile of the (a+2, 2^(a+1); a+1) regular LDPC lattice family

    Raises:
        ConstructionError: for a = 0 (r_0 would equal n) or when 2^(a+1) does not divide n
    """
    if a < 1:
        raise ConstructionError(
            "The regular family needs a >= 1; at a = 0 it yields r_0 = n (a rate-0 code). "
            "Use a (3,6)-regular PEG code for 1-level lattices instead")
    check_degree = 2 ** (a + 1)
    if n % check_degree:
        raise ConstructionError(f"Check degree {check_degree} must divide n = {n}")
    r_levels = tuple((level + 2) * n // check_degree for level in range(a + 1))
    return DegreeProfile(tuple(level + 2 for level in range(a + 1)), check_degree, r_levels)


@dataclass(frozen=True)
class NestedCodeChain:
    """
    Codes C_0 ⊇ C_1 ⊇ ... ⊇ C_a

    When built from a shared basis, C_l is defined by its first r_levels[l]
    rows and the basis row j with r_{l-1} < j <= r_l belongs to level l.
    """
    codes: tuple
    r_levels: tuple
    shared_basis: SparseBinaryMatrix = None

    @classmethod
    def from_basis(cls, basis, r_levels):
        r_levels = tuple(int(r) for r in r_levels)
        if not r_levels:
            raise ConstructionError("A chain needs at least one level")
        if any(b < a for a, b in zip(r_levels, r_levels[1:])):
            raise ConstructionError(f"r_levels must be non-decreasing: {r_levels}")
        if r_levels[0] < 0 or r_levels[-1] > basis.rows or r_levels[-1] > basis.cols:
            raise ConstructionError(
                f"r_levels {r_levels} inconsistent with a {basis.rows}x{basis.cols} basis")
        codes = tuple(BinaryCode(basis.prefix(r)) for r in r_levels)
        chain = cls(codes, r_levels, basis.prefix(r_levels[-1]))
        if not chain.is_independent:
            logger.warning(
                f"Shared basis rows are dependent over GF(2) (ranks {[c.rank for c in codes]} "
                f"for r_levels {list(r_levels)}); the row-count volume will overstate the lattice volume")
        return chain

    @classmethod
    def from_codes(cls, codes):
        codes = tuple(codes)
        if not codes:
            raise ConstructionError("A chain needs at least one level")
        if len({c.n for c in codes}) != 1:
            raise ConstructionError("All codes in a chain must share the block length")
        return cls(codes, tuple(c.parity.rows for c in codes), None)

    @property
    def a(self):
        return len(self.codes) - 1

    @property
    def n(self):
        return self.codes[0].n

    @property
    def is_independent(self):
        if self.shared_basis is None:
            return all(c.redundant_rows == 0 for c in self.codes)
        return self.shared_basis.rank() == self.shared_basis.rows

    def row_levels(self):
        levels = []
        previous = 0
        for level, r in enumerate(self.r_levels):
            levels.extend([level] * (r - previous))
            previous = r
        return tuple(levels)

    def design_distances(self, girth_value=None):
        """Exact d_min per level when enumerable, otherwise the structural lower bound"""
        distances = []
        exact = True
        for code in self.codes:
            if code.k <= config.MAX_MIN_DISTANCE_DIMENSION:
                distances.append(min_distance(code))
            else:
                distances.append(min_distance_lower_bound(code, girth_value))
                exact = False
        return tuple(distances), exact


def verify_nested(chain):
    """True iff C_0 ⊇ C_1 ⊇ ... ⊇ C_a"""
    for bigger, smaller in zip(chain.codes, chain.codes[1:]):
        if not code_contains(bigger, smaller):
            return False
    return True
