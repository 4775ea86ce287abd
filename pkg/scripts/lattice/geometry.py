"""
Label code, Tanner graph and exact duality for Construction D' lattices

Every lattice here sits between 2^(a+1) Z^n and Z^n, so its dual is
generated by Z^n together with the rows of H divided by 2^(a+1).
"""
import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

import numpy as np
import sympy

from .. import config
from ..errors import DimensionTooLargeError, MembershipError, UnsupportedGeometryError
from .construction import is_member
from .hnf import congruence_lattice_basis, determinant, row_basis

logger = logging.getLogger('Lattice')


@dataclass(frozen=True)
class LabelCode:
    """Group code over Z_{g_1} x ... x Z_{g_n} given by its dual generators"""
    alphabet: tuple
    dual_generators: tuple

    def __post_init__(self):
        for k, row in enumerate(self.dual_generators):
            if not any(v % g for v, g in zip(row, self.alphabet)):
                raise UnsupportedGeometryError(f"Dual generator {k} vanishes modulo the alphabet")


@dataclass(frozen=True)
class Decomposition:
    """x = z C + c P with C = diag(cross-section scales), P = diag(projection scales)"""
    C_mat: np.ndarray
    P_mat: np.ndarray
    label: LabelCode

    @property
    def group_sizes(self):
        return self.label.alphabet


@dataclass(frozen=True)
class TannerGraph:
    """
    Bipartite check/symbol graph of the check equations

    Edges are kept sorted by check and then symbol; coefficient[e] is the
    nonzero entry of the dual generator on that edge.
    """
    n: int
    r: int
    edge_check: tuple
    edge_symbol: tuple
    coefficient: tuple
    alphabet: tuple

    @classmethod
    def from_matrix(cls, matrix, coefficients=None, alphabet=None):
        checks, symbols, coeffs = [], [], []
        for j, support in enumerate(matrix.row_support):
            value = 1 if coefficients is None else coefficients[j]
            for c in support:
                checks.append(j)
                symbols.append(c)
                coeffs.append(value)
        alphabet = (2,) * matrix.cols if alphabet is None else tuple(alphabet)
        return cls(matrix.cols, matrix.rows, tuple(checks), tuple(symbols), tuple(coeffs), alphabet)

    @property
    def num_edges(self):
        return len(self.edge_check)

    @property
    def is_binary(self):
        return all(g == 2 for g in self.alphabet)

    @cached_property
    def check_index(self):
        return np.asarray(self.edge_check, dtype=np.int64)

    @cached_property
    def symbol_index(self):
        return np.asarray(self.edge_symbol, dtype=np.int64)

    def check_degrees(self):
        return np.bincount(self.check_index, minlength=self.r)

    def symbol_degrees(self):
        return np.bincount(self.symbol_index, minlength=self.n)


def decompose(lat):
    """
    Diagonal decomposition of a lattice whose level-0 code has d_min >= 2

    Raises:
        UnsupportedGeometryError: when C_0 has a zero column (d_min^0 = 1)
            or there are no check equations at all
    """
    if lat.H.rows == 0:
        raise UnsupportedGeometryError("Lattice has no check equations (Z^n); no label-code decomposition")
    level_zero = lat.chain.codes[0].parity
    empty = [j for j, c in enumerate(level_zero.column_support()) if not c]
    if empty:
        raise UnsupportedGeometryError(
            f"Level-0 code has d_min = 1 (zero parity columns {empty[:8]}); decomposition needs d_min >= 2")
    M = lat.modulus
    label = LabelCode(lat.group_sizes, tuple(tuple(v % M for v in row) for row in lat.H.int_rows()))
    return Decomposition(M * np.eye(lat.n, dtype=np.int64), np.eye(lat.n, dtype=np.int64), label)


def label_of(lat, x):
    """Label word x mod 2^(a+1) of a member x"""
    if not is_member(lat, x):
        raise MembershipError("label_of needs a lattice member")
    return np.asarray(x, dtype=np.int64) % lat.modulus


def label_inner_product(a_word, c_word, alphabet):
    """sum a_i c_i / g_i mod 1, exactly"""
    total = sum((Fraction(int(a) * int(c), int(g)) for a, c, g in zip(a_word, c_word, alphabet)), Fraction(0))
    return total - (total.numerator // total.denominator)


def tanner_graph(lat):
    """Graph of H: check k meets symbol j iff H[k, j] != 0 (mod 2^(a+1))"""
    return TannerGraph.from_matrix(lat.H.base, lat.H.row_scales, lat.group_sizes)


@dataclass(frozen=True)
class DualGenerators:
    """
    Generating set of the dual lattice

    scaled holds the same set multiplied by `scale`: the rows of H followed
    by scale * e_i, all integers.
    """
    scale: int
    scaled: tuple

    @property
    def generators(self):
        return tuple(tuple(Fraction(v, self.scale) for v in row) for row in self.scaled)


def dual_lattice(lat):
    """{rows of H / 2^(a+1)} together with the n unit vectors"""
    M = lat.modulus
    units = [[M * int(i == j) for j in range(lat.n)] for i in range(lat.n)]
    return DualGenerators(M, tuple(tuple(row) for row in lat.H.int_rows() + units))


def _check_exact_dimension(lat):
    if lat.n > config.MAX_EXACT_LATTICE_DIMENSION:
        raise DimensionTooLargeError(
            f"Exact lattice arithmetic refused for n={lat.n} (limit {config.MAX_EXACT_LATTICE_DIMENSION})")


def lattice_basis(lat):
    """Square upper-triangular integer basis of the lattice (rows)"""
    _check_exact_dimension(lat)
    return congruence_lattice_basis(lat.H.int_rows(), lat.n, lat.modulus)


def exact_log2_volume(lat):
    """
    log2 of the true volume

    1-level lattices use 2^rank(H) directly; small multi-level lattices use
    the HNF basis; larger ones fall back to the row-count formula.
    """
    if lat.a == 0:
        return lat.chain.codes[0].rank
    if lat.n <= config.MAX_EXACT_LATTICE_DIMENSION:
        return determinant(lattice_basis(lat)).bit_length() - 1
    logger.warning(f"n={lat.n} too large for an exact HNF volume; using the row-count formula")
    return lat.log2_det


def exact_volume(lat):
    return 2 ** exact_log2_volume(lat)


def dual_basis(lat):
    """Rows of B^{-T} for the HNF basis B, as Fractions"""
    inverse_t = sympy.Matrix(lattice_basis(lat)).inv().T
    return tuple(tuple(Fraction(int(v.p), int(v.q)) for v in inverse_t.row(i)) for i in range(lat.n))


@dataclass(frozen=True)
class DualityReport:
    generates_dual: bool        # HNF(M * B^{-T}) == HNF(rows of H, M * I)
    integral_pairing: bool      # B H^T == 0 (mod M)
    det_product: Fraction       # det(B) * det(B^{-T})


def duality_report(lat):
    _check_exact_dimension(lat)
    M = lat.modulus
    basis = lattice_basis(lat)
    dual = dual_basis(lat)

    scaled = []
    for row in dual:
        values = [v * M for v in row]
        if any(v.denominator != 1 for v in values):
            return DualityReport(False, False, Fraction(0))
        scaled.append([int(v) for v in values])
    generated = row_basis(dual_lattice(lat).scaled)
    generates = row_basis(scaled) == generated

    H_rows = lat.H.int_rows()
    integral = all(sum(b * h for b, h in zip(b_row, h_row)) % M == 0 for b_row in basis for h_row in H_rows)

    det_dual = Fraction(determinant(scaled), M ** lat.n)
    return DualityReport(generates, integral, determinant(basis) * det_dual)


@dataclass(frozen=True)
class LdlcReport:
    average_row_degree: float
    sparse: bool
    generates_dual: object      # True/False, or None when n is too large for the exact check

    @property
    def is_ldlc(self):
        return self.sparse and self.generates_dual is not False


def ldlc_report(lat):
    degrees = lat.H.base.row_degrees()
    average = float(degrees.mean()) if len(degrees) else 0.0
    sparse = average <= config.LDLC_MAX_AVERAGE_ROW_DEGREE
    generates = None
    if lat.n <= config.MAX_EXACT_LATTICE_DIMENSION:
        generates = duality_report(lat).generates_dual
    else:
        logger.debug(f"Skipping exact dual generation check at n={lat.n}")
    return LdlcReport(average, sparse, generates)


def ldlc_check(lat):
    """True iff H is sparse and its rows (scaled) with Z^n generate the dual lattice"""
    return ldlc_report(lat).is_ldlc
