import logging
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy.sparse import csr_matrix

from ..codes.binary_code import NestedCodeChain, verify_nested
from ..codes.matrix import SparseBinaryMatrix, gf2_rank
from ..errors import ConstructionError, MembershipError

logger = logging.getLogger('Lattice')


@dataclass(frozen=True)
class LeveledParityMatrix:
    """
    Integer parity matrix of an (a+1)-level lattice

    Row j of `base` is scaled by 2^row_level[j]. Levels are non-decreasing
    so rows r_{l-1}..r_l - 1 carry 2^l, and x is a member iff
    H x == 0 (mod 2^(a+1)).
    """
    base: SparseBinaryMatrix
    row_level: tuple
    a: int

    def __post_init__(self):
        object.__setattr__(self, 'row_level', tuple(int(v) for v in self.row_level))
        if len(self.row_level) != self.base.rows:
            raise ConstructionError(f"{len(self.row_level)} row levels for {self.base.rows} rows")
        if any(v < 0 or v > self.a for v in self.row_level):
            raise ConstructionError(f"Row levels must lie in [0, {self.a}]")
        if any(b < c for c, b in zip(self.row_level, self.row_level[1:])):
            raise ConstructionError("Row levels must be non-decreasing in row order")

    @classmethod
    def from_chain(cls, basis, r_levels):
        levels = []
        previous = 0
        for level, r in enumerate(r_levels):
            levels.extend([level] * (r - previous))
            previous = r
        return cls(basis.prefix(previous), tuple(levels), len(r_levels) - 1)

    @property
    def modulus(self):
        return 2 ** (self.a + 1)

    @property
    def rows(self):
        return self.base.rows

    @property
    def cols(self):
        return self.base.cols

    @property
    def r_levels(self):
        """Cumulative row counts r_0..r_a"""
        counts = np.bincount(np.asarray(self.row_level, dtype=np.int64), minlength=self.a + 1)
        return tuple(int(v) for v in np.cumsum(counts[:self.a + 1]))

    @property
    def row_scales(self):
        return tuple(2 ** v for v in self.row_level)

    def int_rows(self):
        """H as a list of Python-int rows (exact arithmetic)"""
        dense = []
        for support, scale in zip(self.base.row_support, self.row_scales):
            row = [0] * self.cols
            for c in support:
                row[c] = scale
            dense.append(row)
        return dense

    def to_dense(self):
        return self.base.to_dense(np.int64) * np.asarray(self.row_scales, dtype=np.int64)[:, None]

    @cached_property
    def scaled_csr(self):
        csr = self.base.to_csr().astype(np.int64)
        scales = np.repeat(np.asarray(self.row_scales, dtype=np.int64), np.diff(csr.indptr))
        return csr_matrix((scales, csr.indices, csr.indptr), shape=csr.shape)


@dataclass(frozen=True)
class Lattice:
    """
    (a+1)-level lattice {x in Z^n : H x == 0 (mod 2^(a+1))}

    chain holds the nested codes the lattice was built from.
    """
    H: LeveledParityMatrix
    chain: NestedCodeChain

    @property
    def n(self):
        return self.H.cols

    @property
    def a(self):
        return self.H.a

    @property
    def levels(self):
        return self.a + 1

    @property
    def modulus(self):
        return self.H.modulus

    @property
    def r_levels(self):
        return self.H.r_levels

    @property
    def group_sizes(self):
        return (self.modulus,) * self.n

    @property
    def log2_det(self):
        return sum(self.r_levels)

    @property
    def det(self):
        """Volume by the row-count formula 2^(r_0 + ... + r_a)"""
        return 2 ** self.log2_det

    def __repr__(self):
        return f"Lattice(n={self.n}, levels={self.levels}, r_levels={list(self.r_levels)})"


def _shared_basis(chain):
    """Rows h_1..h_{r_a} whose prefixes define the chain codes"""
    if chain.shared_basis is not None:
        return chain.shared_basis, chain.r_levels
    rows = []
    r_levels = []
    for code in chain.codes:
        for support in code.parity.row_support:
            if support in rows:
                continue
            candidate = rows + [support]
            if gf2_rank(SparseBinaryMatrix(len(candidate), chain.n, tuple(candidate)).to_dense()) == len(candidate):
                rows.append(support)
        r_levels.append(len(rows))
    return SparseBinaryMatrix(len(rows), chain.n, tuple(rows)), tuple(r_levels)


def construction_a(code):
    """
    1-level lattice 2Z^n + C

    The lattice has the code's parity matrix at level 0 and modulus 2.
    """
    if code.redundant_rows:
        logger.info(f"{code} has {code.redundant_rows} dependent parity rows; "
                    "row-count volume exceeds the exact volume 2^(n-k)")
    chain = NestedCodeChain.from_codes([code])
    H = LeveledParityMatrix(code.parity, (0,) * code.parity.rows, 0)
    return Lattice(H, chain)


def construction_dprime(chain):
    """
    Lattice of the leveled congruences of a nested chain

    Raises:
        ConstructionError: if the chain is not nested
    """
    if not verify_nested(chain):
        raise ConstructionError("Construction D' needs nested codes C_0 ⊇ C_1 ⊇ ... ⊇ C_a")
    basis, r_levels = _shared_basis(chain)
    H = LeveledParityMatrix.from_chain(basis, r_levels)
    if chain.shared_basis is None:
        chain = NestedCodeChain(chain.codes, r_levels, basis)
    return Lattice(H, chain)


def _as_integer(x, n):
    x = np.asarray(x)
    if not np.issubdtype(x.dtype, np.integer):
        raise TypeError(f"Lattice vectors must be integer arrays, got dtype {x.dtype}")
    if x.shape[-1] != n:
        raise MembershipError(f"Expected vectors of length {n}, got {x.shape[-1]}")
    return x.astype(np.int64)


def syndromes(lat, points):
    """H x mod 2^(a+1) for each row x of `points` (T x n)"""
    points = _as_integer(points, lat.n)
    return np.asarray(lat.H.scaled_csr @ np.atleast_2d(points).T).T % lat.modulus


def is_member(lat, x):
    """True iff every leveled congruence holds for the integer vector x"""
    x = _as_integer(x, lat.n)
    if x.ndim != 1:
        raise MembershipError("is_member takes a single vector; use members_mask for batches")
    return not syndromes(lat, x[None, :]).any()


def members_mask(lat, points):
    return ~syndromes(lat, points).any(axis=1)


def volume(lat):
    return lat.det


def normalized_volume(lat, log2_det=None):
    """det^(2/n) as a float"""
    log2_det = lat.log2_det if log2_det is None else log2_det
    return 2.0 ** (2.0 * log2_det / lat.n)


def coding_gain(lat, d_min_sq, log2_det=None):
    """d_min^2 / det^(2/n)"""
    if d_min_sq <= 0:
        raise ValueError("Squared minimum distance must be positive")
    return d_min_sq / normalized_volume(lat, log2_det)


def regular_family_coding_gain(a):
    """Large-n coding gain of the (a+2, 2^(a+1); a+1) regular family"""
    return 4.0 ** ((a + 1) - (a + 1) * (a + 2) / 2 ** (a + 2))


def min_distance_bounds(lat, chain_d_mins):
    """
    Bounds on d_min^2 from the chain code distances

    lower = min over l of 4^l * d_min^(a-l), upper = 4^(a+1); the lower
    bound never exceeds the upper one (zero codes have infinite distance).
    """
    a = lat.a
    if len(chain_d_mins) != a + 1:
        raise ValueError(f"Expected {a + 1} code distances, got {len(chain_d_mins)}")
    upper = 4 ** (a + 1)
    lower = min(4 ** level * chain_d_mins[a - level] for level in range(a + 1))
    return min(lower, upper), upper


@dataclass(frozen=True)
class MinDistance:
    value: float
    provenance: str          # "exact" or "bound"
    lower: float
    upper: float
    code_distances: tuple


def lattice_min_distance(lat, girth_value=None):
    """
    Squared minimum distance with its provenance

    "exact" when every chain code distance was enumerated and the bounds
    meet, or for a 1-level lattice where d_min^2 = min(4, d_min(C_0)).
    """
    distances, exact = lat.chain.design_distances(girth_value)
    lower, upper = min_distance_bounds(lat, distances)
    provenance = "exact" if exact and (lower == upper or lat.a == 0) else "bound"
    return MinDistance(float(lower), provenance, float(lower), float(upper), distances)
