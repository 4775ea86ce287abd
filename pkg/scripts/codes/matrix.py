import logging
from dataclasses import dataclass

import galois
import numpy as np
from scipy.sparse import csr_matrix

logger = logging.getLogger('Codes')

GF2 = galois.GF(2)


def gf2_rank(dense):
    """Rank of a 0/1 matrix over GF(2)"""
    dense = np.asarray(dense, dtype=np.int64) % 2
    if dense.size == 0:
        return 0
    return int(np.linalg.matrix_rank(GF2(dense)))


def gf2_null_space(dense, n=None):
    """
    Basis of {x : dense @ x = 0 (mod 2)} as the rows of a 0/1 array

    Args:
        dense: r x n matrix with 0/1 entries (r may be 0)
        n: number of columns, needed when dense has no rows

    Returns:
        k x n uint8 array
    """
    dense = np.asarray(dense, dtype=np.int64) % 2
    if n is None:
        n = dense.shape[1]
    if dense.size == 0 or not dense.any():
        return np.eye(n, dtype=np.uint8)
    if gf2_rank(dense) == n:
        return np.zeros((0, n), dtype=np.uint8)
    basis = GF2(dense).null_space()
    return np.asarray(basis, dtype=np.uint8)


@dataclass(frozen=True)
class SparseBinaryMatrix:
    """
    Binary matrix stored as per-row sorted column supports
    """
    rows: int
    cols: int
    row_support: tuple

    def __post_init__(self):
        if len(self.row_support) != self.rows:
            raise ValueError(f"Expected {self.rows} row supports, got {len(self.row_support)}")
        normalized = []
        for j, support in enumerate(self.row_support):
            support = tuple(int(c) for c in support)
            for a, b in zip(support, support[1:]):
                if a >= b:
                    raise ValueError(f"Row {j} support is not strictly increasing: {support}")
            if support and (support[0] < 0 or support[-1] >= self.cols):
                raise ValueError(f"Row {j} has a column index outside [0, {self.cols})")
            normalized.append(support)
        object.__setattr__(self, 'row_support', tuple(normalized))

    @classmethod
    def from_dense(cls, dense):
        dense = np.asarray(dense)
        if dense.ndim != 2:
            raise ValueError("Expected a 2-D matrix")
        rows, cols = dense.shape
        support = tuple(tuple(np.flatnonzero(dense[j] % 2).tolist()) for j in range(rows))
        return cls(rows, cols, support)

    @classmethod
    def from_rows(cls, cols, row_support):
        row_support = tuple(tuple(sorted(set(s))) for s in row_support)
        return cls(len(row_support), cols, row_support)

    def to_dense(self, dtype=np.uint8):
        dense = np.zeros((self.rows, self.cols), dtype=dtype)
        for j, support in enumerate(self.row_support):
            dense[j, list(support)] = 1
        return dense

    def to_csr(self):
        indptr = np.zeros(self.rows + 1, dtype=np.int64)
        indptr[1:] = np.cumsum(self.row_degrees())
        indices = np.fromiter((c for s in self.row_support for c in s), dtype=np.int64, count=int(indptr[-1]))
        data = np.ones(len(indices), dtype=np.int8)
        return csr_matrix((data, indices, indptr), shape=(self.rows, self.cols))

    def row_degrees(self):
        return np.array([len(s) for s in self.row_support], dtype=np.int64)

    def column_degrees(self):
        degrees = np.zeros(self.cols, dtype=np.int64)
        for support in self.row_support:
            degrees[list(support)] += 1
        return degrees

    def column_support(self):
        columns = [[] for _ in range(self.cols)]
        for j, support in enumerate(self.row_support):
            for c in support:
                columns[c].append(j)
        return tuple(tuple(c) for c in columns)

    @property
    def nnz(self):
        return int(sum(len(s) for s in self.row_support))

    def prefix(self, count):
        """First `count` rows as a new matrix"""
        return SparseBinaryMatrix(count, self.cols, self.row_support[:count])

    def rank(self):
        return gf2_rank(self.to_dense())

    def __repr__(self):
        return f"SparseBinaryMatrix({self.rows}x{self.cols}, nnz={self.nnz})"
