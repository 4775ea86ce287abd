"""
Exact integer row Hermite normal form on Python ints
"""
from dataclasses import dataclass


def _extgcd(a, b):
    """Returns (g, s, t) with s*a + t*b = g = gcd(a, b) >= 0"""
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r != 0:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


@dataclass(frozen=True)
class HermiteForm:
    """
    Row-style HNF: transform @ matrix == basis

    basis[:rank] is upper echelon with positive pivots and entries above
    each pivot reduced into [0, pivot); rows rank.. are zero.
    """
    basis: tuple
    transform: tuple
    rank: int
    pivots: tuple


def hermite_normal_form(matrix, with_transform=False):
    """
    Args:
        matrix: sequence of equal-length integer rows
        with_transform: also track the unimodular transform

    Returns:
        HermiteForm (transform is empty unless requested)
    """
    A = [[int(v) for v in row] for row in matrix]
    m = len(A)
    cols = len(A[0]) if m else 0
    U = [[int(i == j) for j in range(m)] for i in range(m)] if with_transform else None

    def combine(rows, p, i, s, t, u, v):
        # (row_p, row_i) <- (s*row_p + t*row_i, u*row_p + v*row_i)
        rp, ri = rows[p], rows[i]
        rows[p] = [s * x + t * y for x, y in zip(rp, ri)]
        rows[i] = [u * x + v * y for x, y in zip(rp, ri)]

    pivot_row = 0
    pivots = []
    for col in range(cols):
        if pivot_row == m:
            break
        for i in range(pivot_row + 1, m):
            b = A[i][col]
            if b == 0:
                continue
            a = A[pivot_row][col]
            g, s, t = _extgcd(a, b)
            combine(A, pivot_row, i, s, t, -b // g, a // g)
            if U is not None:
                combine(U, pivot_row, i, s, t, -b // g, a // g)
        pivot = A[pivot_row][col]
        if pivot == 0:
            continue
        if pivot < 0:
            A[pivot_row] = [-x for x in A[pivot_row]]
            if U is not None:
                U[pivot_row] = [-x for x in U[pivot_row]]
            pivot = -pivot
        for i in range(pivot_row):
            q = A[i][col] // pivot
            if q:
                A[i] = [x - q * y for x, y in zip(A[i], A[pivot_row])]
                if U is not None:
                    U[i] = [x - q * y for x, y in zip(U[i], U[pivot_row])]
        pivots.append(col)
        pivot_row += 1

    return HermiteForm(tuple(tuple(r) for r in A),
                       tuple(tuple(r) for r in U) if U is not None else (),
                       pivot_row, tuple(pivots))


def row_basis(matrix):
    """Nonzero HNF rows: the canonical basis of the Z-span of the rows"""
    form = hermite_normal_form(matrix)
    return form.basis[:form.rank]


def integer_kernel(matrix):
    """
    Basis of {z integer : matrix @ z = 0} as rows

    Computed from the HNF of matrix^T: the transform rows that map to zero
    rows span the left kernel of matrix^T.
    """
    rows = len(matrix)
    cols = len(matrix[0]) if rows else 0
    if rows == 0:
        return tuple(tuple(int(i == j) for j in range(cols)) for i in range(cols))
    transposed = [[int(matrix[i][j]) for i in range(rows)] for j in range(cols)]
    form = hermite_normal_form(transposed, with_transform=True)
    return form.transform[form.rank:]


def determinant(square):
    """Determinant of a square integer matrix via HNF (sign dropped)"""
    size = len(square)
    form = hermite_normal_form(square)
    if form.rank < size:
        return 0
    result = 1
    for i, col in enumerate(form.pivots):
        result *= form.basis[i][col]
    return result


def congruence_lattice_basis(rows, n, modulus):
    """
    Square HNF basis of {x in Z^n : rows @ x == 0 (mod modulus)}

    x is a member iff (x, y) lies in the integer kernel of [rows | modulus*I]
    for some y, and y is determined by x, so the kernel projected onto its
    first n coordinates is the lattice.
    """
    r = len(rows)
    if r == 0:
        return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))
    augmented = [list(row) + [modulus * int(i == j) for j in range(r)] for i, row in enumerate(rows)]
    kernel = integer_kernel(augmented)
    basis = row_basis([z[:n] for z in kernel])
    if len(basis) != n:
        raise ArithmeticError(f"Kernel projection has rank {len(basis)}, expected {n}")
    return basis
