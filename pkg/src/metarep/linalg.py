"""Small dense linear algebra helpers, exact and floating point.

Exact routines work over any field whose elements support ``+ - * /`` and
comparison with ``0`` (``Fraction``, :class:`~metarep.cyclotomic.CycNum`).
Matrices may be lists of rows or numpy object arrays.
"""
from __future__ import annotations

from fractions import Fraction

import numpy as np

from .errors import ToleranceAmbiguous

RANK_TOL = 1e-8


def _rows(M):
    if isinstance(M, np.ndarray):
        return [list(r) for r in M]
    return [list(r) for r in M]


def _is_zero(x):
    z = getattr(x, "is_zero", None)
    if z is not None:
        return z()
    return x == 0


def as_object_array(rows, shape=None):
    """Pack a list of rows into a 2-D numpy object array (no broadcasting surprises)."""
    if shape is None:
        r = len(rows)
        c = len(rows[0]) if r else 0
        shape = (r, c)
    A = np.empty(shape, dtype=object)
    for i, row in enumerate(rows):
        for j, v in enumerate(row):
            A[i, j] = v
    return A


def rref(M):
    """Reduced row echelon form; returns ``(R, pivot_columns)``."""
    A = _rows(M)
    r = len(A)
    c = len(A[0]) if r else 0
    pivots = []
    row = 0
    for col in range(c):
        if row >= r:
            break
        piv = None
        for i in range(row, r):
            if not _is_zero(A[i][col]):
                piv = i
                break
        if piv is None:
            continue
        A[row], A[piv] = A[piv], A[row]
        inv = 1 / A[row][col] if not isinstance(A[row][col], int) else Fraction(1, A[row][col])
        A[row] = [x * inv for x in A[row]]
        prow = A[row]
        for i in range(r):
            if i != row and not _is_zero(A[i][col]):
                f = A[i][col]
                Ai = A[i]
                A[i] = [Ai[k] - f * prow[k] if not _is_zero(prow[k]) else Ai[k] for k in range(c)]
        pivots.append(col)
        row += 1
    return A, pivots


def exact_rank(M):
    """Rank by forward elimination (no back substitution)."""
    A = _rows(M)
    r = len(A)
    if r == 0:
        return 0
    c = len(A[0])
    rank = 0
    for col in range(c):
        if rank >= r:
            break
        piv = None
        for i in range(rank, r):
            if not _is_zero(A[i][col]):
                piv = i
                break
        if piv is None:
            continue
        A[rank], A[piv] = A[piv], A[rank]
        p = A[rank]
        inv = 1 / p[col] if not isinstance(p[col], int) else Fraction(1, p[col])
        for i in range(rank + 1, r):
            a = A[i][col]
            if not _is_zero(a):
                f = a * inv
                Ai = A[i]
                A[i] = [Ai[k] - f * p[k] if k > col and not _is_zero(p[k]) else Ai[k] for k in range(c)]
                A[i][col] = 0
        rank += 1
    return rank


def exact_nullspace(M, ncols=None):
    """Basis of ``{v : M v = 0}`` as a list of column vectors (lists)."""
    A = _rows(M)
    c = ncols if ncols is not None else (len(A[0]) if A else 0)
    if not A:
        return [[1 if i == j else 0 for i in range(c)] for j in range(c)]
    R, piv = rref(A)
    free = [j for j in range(c) if j not in set(piv)]
    basis = []
    for f in free:
        v = [0] * c
        v[f] = 1
        for i, p in enumerate(piv):
            v[p] = -R[i][f]
        basis.append(v)
    return basis


def exact_inverse(M):
    A = _rows(M)
    n = len(A)
    aug = [A[i] + [1 if i == j else 0 for j in range(n)] for i in range(n)]
    R, piv = rref(aug)
    if piv[:n] != list(range(n)):
        raise ZeroDivisionError("matrix is singular")
    return [row[n:] for row in R]


def exact_det(M):
    """Determinant over a field by Gaussian elimination."""
    A = _rows(M)
    n = len(A)
    if n == 0:
        return 1
    det = 1
    for col in range(n):
        piv = None
        for i in range(col, n):
            if not _is_zero(A[i][col]):
                piv = i
                break
        if piv is None:
            return 0 * A[0][0]
        if piv != col:
            A[col], A[piv] = A[piv], A[col]
            det = -det
        p = A[col][col]
        det = det * p
        inv = 1 / p if not isinstance(p, int) else Fraction(1, p)
        for i in range(col + 1, n):
            a = A[i][col]
            if not _is_zero(a):
                f = a * inv
                A[i] = [A[i][k] - f * A[col][k] if k > col else A[i][k] for k in range(n)]
    return det


def bareiss_det(M):
    """Fraction-free determinant of an integer matrix."""
    A = [[int(x) for x in row] for row in M]
    n = len(A)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if A[k][k] == 0:
            sw = next((i for i in range(k + 1, n) if A[i][k] != 0), None)
            if sw is None:
                return 0
            A[k], A[sw] = A[sw], A[k]
            sign = -sign
        akk = A[k][k]
        Ak = A[k]
        for i in range(k + 1, n):
            Ai = A[i]
            aik = Ai[k]
            for j in range(k + 1, n):
                Ai[j] = (Ai[j] * akk - aik * Ak[j]) // prev
        prev = akk
    return sign * A[n - 1][n - 1]


def matmul(A, B):
    """Exact product of two list-of-rows matrices."""
    Bt = list(zip(*B))
    out = []
    for row in A:
        out_row = []
        for col in Bt:
            s = 0
            for x, y in zip(row, col):
                if not (_is_zero(x) or _is_zero(y)):
                    s = x * y + s
            out_row.append(s)
        out.append(out_row)
    return out


# floating point -------------------------------------------------------

def float_rank(M, tol=RANK_TOL, check_ambiguity=True):
    """Numerical rank with relative threshold ``tol``.

    Raises :class:`ToleranceAmbiguous` when some singular value sits within a
    factor ten of the threshold, where the answer cannot be trusted.
    """
    A = np.asarray(M, dtype=complex)
    if A.size == 0:
        return 0
    s = np.linalg.svd(A, compute_uv=False)
    smax = s[0] if s.size else 0.0
    if smax == 0:
        return 0
    rel = s / smax
    if check_ambiguity:
        band = (rel >= tol / 10) & (rel <= tol * 10)
        if np.any(band):
            raise ToleranceAmbiguous(
                f"singular value ratio {rel[band][0]:.3e} within the ambiguity band around {tol:g}"
            )
    return int(np.sum(rel > tol))


def float_nullspace(M, tol=RANK_TOL):
    """Orthonormal basis (columns) of the numerical kernel."""
    A = np.asarray(M, dtype=complex)
    ncols = A.shape[1]
    if A.shape[0] == 0:
        return np.eye(ncols, dtype=complex)
    _, s, vh = np.linalg.svd(A)
    smax = s[0] if s.size else 0.0
    rank = int(np.sum(s > tol * smax)) if smax > 0 else 0
    return vh[rank:].conj().T


def orth(M, tol=RANK_TOL):
    """Orthonormal basis (columns) of the column span."""
    A = np.asarray(M, dtype=complex)
    if A.size == 0:
        return np.zeros((A.shape[0], 0), dtype=complex)
    u, s, _ = np.linalg.svd(A, full_matrices=False)
    smax = s[0] if s.size else 0.0
    rank = int(np.sum(s > tol * smax)) if smax > 0 else 0
    return u[:, :rank]


def to_complex_array(M):
    return np.array([[complex(x) for x in row] for row in _rows(M)], dtype=complex)


# characteristic polynomials over a field --------------------------------

def charpoly(M):
    """Coefficients of det(x I - M), lowest degree first (Faddeev-LeVerrier)."""
    A = _rows(M)
    n = len(A)
    one = A[0][0] * 0 + 1 if n else 1
    coeffs = [one * 0] * n + [one]
    Mk = [[one * 0] * n for _ in range(n)]
    c = one
    for k in range(1, n + 1):
        Mk = matmul(A, Mk)
        Mk = [[Mk[i][j] + (c if i == j else 0) for j in range(n)] for i in range(n)]
        AM = matmul(A, Mk)
        tr = AM[0][0] * 0
        for i in range(n):
            tr = tr + AM[i][i]
        c = tr * Fraction(-1, k)
        coeffs[n - k] = c
    return coeffs


def _ptrim(p):
    p = list(p)
    while len(p) > 1 and _is_zero(p[-1]):
        p.pop()
    return p


def field_poly_gcd_degree(a, b):
    """Degree of gcd(a, b) for coefficient lists over a field (lowest first)."""
    a, b = _ptrim(a), _ptrim(b)
    if len(b) == 1 and _is_zero(b[0]):
        return len(a) - 1
    while not (len(b) == 1 and _is_zero(b[0])):
        r = list(a)
        lb = b[-1]
        while len(r) >= len(b) and not (len(r) == 1 and _is_zero(r[0])):
            f = r[-1] / lb
            off = len(r) - len(b)
            for j, bj in enumerate(b):
                r[off + j] = r[off + j] - f * bj
            r.pop()
            r = _ptrim(r) if r else [lb * 0]
        a, b = b, _ptrim(r)
    return len(a) - 1


def has_distinct_eigenvalues(M) -> bool:
    """Exact test: the characteristic polynomial is squarefree."""
    p = charpoly(M)
    dp = [p[k] * k for k in range(1, len(p))]
    if len(dp) == 0:
        return True
    return field_poly_gcd_degree(p, dp) == 0
