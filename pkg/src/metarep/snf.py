"""Integer Smith normal form with unimodular transforms.

``smith(M)`` returns ``(D, U, V, Vinv)`` with ``U @ M @ V == D`` where ``D`` is
diagonal with ``d_1 | d_2 | ...`` (trailing zeros allowed) and ``Vinv`` is the
inverse of ``V``.  Everything is plain Python ints in lists of lists, so entry
size is unbounded.

Convention for cokernels: a matrix whose *rows* are relations presents
``Z^m / rowspace(M)``.  In the coordinates ``w = x @ V`` that group is
``(+) Z/d_i``.
"""
from __future__ import annotations

from dataclasses import dataclass


def _identity(k):
    return [[1 if i == j else 0 for j in range(k)] for i in range(k)]


@dataclass(frozen=True)
class SNFResult:
    D: list
    U: list
    V: list
    Vinv: list

    @property
    def diagonal(self):
        k = min(len(self.D), len(self.D[0]) if self.D else 0)
        return [self.D[i][i] for i in range(k)]


def smith(M, *, want_U=True, want_V=True):
    """Smith normal form of an integer matrix given as a list of rows."""
    A = [[int(x) for x in row] for row in M]
    r = len(A)
    c = len(A[0]) if r else 0
    U = _identity(r) if want_U else None
    V = _identity(c) if want_V else None
    Vi = _identity(c) if want_V else None

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        if U is not None:
            U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        if V is not None:
            for row in V:
                row[i], row[j] = row[j], row[i]
            Vi[i], Vi[j] = Vi[j], Vi[i]

    def add_row(dst, src, q):
        # row_dst += q * row_src
        if q == 0:
            return
        rs, rd = A[src], A[dst]
        for k in range(c):
            if rs[k]:
                rd[k] += q * rs[k]
        if U is not None:
            us, ud = U[src], U[dst]
            for k in range(r):
                if us[k]:
                    ud[k] += q * us[k]

    def add_col(dst, src, q):
        # col_dst += q * col_src
        if q == 0:
            return
        for row in A:
            if row[src]:
                row[dst] += q * row[src]
        if V is not None:
            for row in V:
                if row[src]:
                    row[dst] += q * row[src]
            # inverse: row_src -= q * row_dst
            vd, vs = Vi[dst], Vi[src]
            for k in range(c):
                if vd[k]:
                    vs[k] -= q * vd[k]

    def negate_row(i):
        A[i] = [-x for x in A[i]]
        if U is not None:
            U[i] = [-x for x in U[i]]

    t = 0
    while t < min(r, c):
        # smallest nonzero entry in the lower-right block becomes the pivot
        best = None
        for i in range(t, r):
            row = A[i]
            for j in range(t, c):
                v = row[j]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, j)
                    if best[0] == 1:
                        break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        _, pi, pj = best
        if pi != t:
            swap_rows(pi, t)
        if pj != t:
            swap_cols(pj, t)
        while True:
            p = A[t][t]
            dirty = False
            for i in range(t + 1, r):
                if A[i][t]:
                    q = A[i][t] // p
                    add_row(i, t, -q)
                    if A[i][t]:
                        dirty = True
            for j in range(t + 1, c):
                if A[t][j]:
                    q = A[t][j] // p
                    add_col(j, t, -q)
                    if A[t][j]:
                        dirty = True
            if dirty:
                # move the smallest remainder in row/column t onto the pivot
                cand = [(abs(A[i][t]), i, t) for i in range(t, r) if A[i][t]]
                cand += [(abs(A[t][j]), t, j) for j in range(t, c) if A[t][j]]
                _, i, j = min(cand)
                if i != t:
                    swap_rows(i, t)
                if j != t:
                    swap_cols(j, t)
                continue
            # row and column cleared; enforce divisibility of the rest
            bad = None
            for i in range(t + 1, r):
                for j in range(t + 1, c):
                    if A[i][j] % p:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            add_row(t, bad, 1)
        if A[t][t] < 0:
            negate_row(t)
        t += 1
    return SNFResult(A, U, V, Vi)


def invariant_factors(M):
    """Diagonal of the Smith form (including zeros for free summands)."""
    if not M or not M[0]:
        return []
    return smith(M, want_U=False, want_V=False).diagonal


def cokernel(M, ncols=None):
    """Structure of ``Z^m / rowspace(M)``: ``(free_rank, [d_i >= 2])``."""
    m = ncols if ncols is not None else (len(M[0]) if M else 0)
    if not M:
        return m, []
    diag = invariant_factors(M)
    nonzero = [d for d in diag if d]
    free = m - len(nonzero)
    return free, [d for d in nonzero if d != 1]
