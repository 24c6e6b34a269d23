"""Alexander module computations.

The Alexander module ``H`` is presented over ``Z[t, t^-1]`` by the abelianized
Fox Jacobian with the meridian column removed (rows are relations).  When the
meridian is not itself a generator the presentation is first augmented by a
new generator ``m`` and the relator ``m^-1 * meridian``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Optional

import numpy as np

from .errors import INFINITE, NormalizationFailure, is_infinite
from .knotio import KnotPresentation, Word, abelian_fox
from .laurent import LaurentPoly, poly_gcd
from .linalg import bareiss_det
from .snf import smith


# ----------------------------------------------------------------------
# presentations with the meridian as a generator

@dataclass(frozen=True)
class MeridianForm:
    """Presentation data with a distinguished meridian generator ``m``."""

    num_generators: int
    relators: tuple
    eps: tuple
    m: int
    original_generators: int


def meridian_form(p: KnotPresentation) -> MeridianForm:
    mg = p.meridian_generator
    if mg is not None:
        return MeridianForm(p.num_generators, p.relators, p.epsilon, mg, p.num_generators)
    g = p.num_generators
    rels = tuple(p.relators) + (Word.gen(g, -1) * p.meridian,)
    return MeridianForm(g + 1, rels, tuple(p.epsilon) + (1,), g, g)


# ----------------------------------------------------------------------
# Alexander matrix and polynomial

def alexander_matrix(p: KnotPresentation) -> list[list[LaurentPoly]]:
    """Abelianized Fox Jacobian, one row per relator, one column per generator."""
    eps = p.epsilon
    g = p.num_generators
    rows = []
    for r in p.relators:
        d = abelian_fox(r, eps)
        rows.append([d.get(k, LaurentPoly()) for k in range(g)])
    return rows


def poly_det(M: list[list[LaurentPoly]]) -> LaurentPoly:
    """Fraction-free (Bareiss) determinant over Z[t, t^-1]."""
    n = len(M)
    if n == 0:
        return LaurentPoly.const(1)
    A = [list(r) for r in M]
    sign = 1
    prev = LaurentPoly.const(1)
    for k in range(n - 1):
        if A[k][k].is_zero():
            sw = next((i for i in range(k + 1, n) if not A[i][k].is_zero()), None)
            if sw is None:
                return LaurentPoly()
            A[k], A[sw] = A[sw], A[k]
            sign = -sign
        akk = A[k][k]
        for i in range(k + 1, n):
            aik = A[i][k]
            for j in range(k + 1, n):
                num = A[i][j] * akk - aik * A[k][j]
                A[i][j] = num.exact_div(prev) if not num.is_zero() else num
        prev = akk
    d = A[n - 1][n - 1]
    return -d if sign < 0 else d


def minors_gcd(A: list[list[LaurentPoly]], size: Optional[int] = None) -> LaurentPoly:
    """Gcd of all ``size``-minors (default: maximal), normalized."""
    from itertools import combinations

    r = len(A)
    c = len(A[0]) if r else 0
    size = min(r, c) if size is None else size
    if size == 0:
        return LaurentPoly.const(1)
    g = LaurentPoly()
    for rows in combinations(range(r), size):
        for cols in combinations(range(c), size):
            g = poly_gcd(g, poly_det([[A[i][j] for j in cols] for i in rows]))
    return g


def _quantum(e: int) -> LaurentPoly:
    """(t^e - 1)/(t - 1) as a Laurent polynomial (e may be negative)."""
    if e >= 0:
        return LaurentPoly({k: 1 for k in range(e)})
    return LaurentPoly({k: -1 for k in range(e, 0)})


def normalize_alexander(d: LaurentPoly) -> LaurentPoly:
    if d.is_zero():
        raise NormalizationFailure("Alexander polynomial vanished")
    d = d.normalized()
    if abs(d(1)) != 1:
        raise NormalizationFailure(f"|Delta(1)| = {abs(d(1))} != 1; the presentation is not a knot group")
    return d


def alexander_poly(p: KnotPresentation) -> LaurentPoly:
    """Normalized Alexander polynomial: lowest degree 0, positive leading coefficient."""
    return _alexander_cached(p)


@lru_cache(maxsize=256)
def _alexander_cached(p: KnotPresentation) -> LaurentPoly:
    A = alexander_matrix(p)
    eps = p.epsilon
    g = p.num_generators
    if g - len(A) != 1:
        # not deficiency one: fall back on the first elementary ideal
        mf = meridian_form(p)
        A2 = _module_matrix(mf)
        return normalize_alexander(minors_gcd(A2))
    k = min((i for i in range(g) if eps[i] != 0), key=lambda i: (abs(eps[i]), i))
    minor = poly_det([[row[j] for j in range(g) if j != k] for row in A])
    q = _quantum(eps[k])
    if q.is_zero():
        raise NormalizationFailure("degenerate generator degree")
    try:
        d = minor.exact_div(q)
    except ArithmeticError as exc:
        raise NormalizationFailure("minor is not divisible by (t^e-1)/(t-1)") from exc
    return normalize_alexander(d)


# ----------------------------------------------------------------------
# module presentation and covers

def _module_matrix(mf: MeridianForm) -> list[list[LaurentPoly]]:
    """Rows are relators, columns the non-meridian generators."""
    rows = []
    for r in mf.relators:
        d = abelian_fox(r, mf.eps)
        rows.append([d.get(k, LaurentPoly()) for k in range(mf.num_generators) if k != mf.m])
    return rows


def module_presentation(p: KnotPresentation):
    """``(matrix, columns)``: Lambda-presentation of H and the generator index of each column."""
    mf = meridian_form(p)
    cols = [k for k in range(mf.num_generators) if k != mf.m]
    return _module_matrix(mf), cols, mf


@dataclass(frozen=True)
class FinAbT:
    """Finitely generated abelian group H/(t^n - 1) with its t-action.

    Coordinates: torsion summands ``Z/d_i`` first (``d_i >= 2``, divisibility
    chain), then ``free_rank`` copies of ``Z``.  Elements are row vectors and
    ``t`` acts by ``w -> w @ t_matrix`` with column ``k`` reduced mod its
    invariant factor.
    """

    n: int
    free_rank: int
    invariant_factors: tuple
    t_matrix: tuple  # rows of ints, size (k + free_rank)
    # internal transport data
    _V: tuple = field(repr=False, compare=False, default=())
    _keep: tuple = field(repr=False, compare=False, default=())
    _block: int = field(repr=False, compare=False, default=0)

    @property
    def torsion_order(self) -> int:
        out = 1
        for d in self.invariant_factors:
            out *= d
        return out

    @property
    def rank(self):
        return len(self.invariant_factors) + self.free_rank

    @property
    def moduli(self) -> tuple:
        """Modulus of every coordinate (0 for free ones)."""
        return tuple(self.invariant_factors) + (0,) * self.free_rank

    @property
    def exponent(self) -> int:
        return self.invariant_factors[-1] if self.invariant_factors else 1

    def reduce(self, w):
        return tuple(x % d if d else x for x, d in zip(w, self.moduli))

    def act(self, w, power: int = 1):
        """``t^power`` applied to ``w`` (power taken mod n)."""
        power %= self.n
        T = self.t_matrix
        for _ in range(power):
            w = self.reduce([sum(w[i] * T[i][k] for i in range(len(w))) for k in range(len(w))])
        return tuple(w)

    def coords(self, gen_col: int, shift: int):
        """SNF coordinates of ``t^shift * y_{gen_col}`` (column index into the module matrix)."""
        row = self._V[gen_col * self._block + shift % self._block]
        return self.reduce([row[j] for j in self._keep])

    def t_minus_one_is_bijective(self) -> bool:
        """Whether ``t - 1`` acts bijectively on the torsion part."""
        if self.free_rank:
            return False
        k = len(self.invariant_factors)
        if k == 0:
            return True
        seen = set()
        from itertools import product

        for w in product(*[range(d) for d in self.invariant_factors]):
            tw = self.act(w)
            img = self.reduce([a - b for a, b in zip(tw, w)])
            if img in seen:
                return False
            seen.add(img)
        return True


def _cover_matrix(A: list[list[LaurentPoly]], n: int) -> list[list[int]]:
    rows = []
    ncols = len(A[0]) if A else 0
    for arow in A:
        for i in range(n):
            out = [0] * (ncols * n)
            for j, poly in enumerate(arow):
                for deg, c in poly.coeffs.items():
                    out[j * n + (deg + i) % n] += c
            rows.append(out)
    return rows


def branched_homology(p: KnotPresentation, n: int) -> FinAbT:
    """H_1 of the n-fold cyclic branched cover, presented as H/(t^n - 1)."""
    if n < 1:
        raise ValueError("n must be positive")
    return _branched_cached(p, n)


@lru_cache(maxsize=512)
def _branched_cached(p: KnotPresentation, n: int) -> FinAbT:
    A, cols, _ = module_presentation(p)
    m = len(cols) * n
    if m == 0:
        return FinAbT(n, 0, (), (), (), (), n)
    M = _cover_matrix(A, n)
    if not M:
        M = [[0] * m]
    res = smith(M)
    diag = res.diagonal + [0] * (m - len(res.diagonal))
    keep = [j for j in range(m) if diag[j] != 1]
    tors = [j for j in keep if diag[j] != 0]
    free = [j for j in keep if diag[j] == 0]
    keep = tors + free
    V, Vi = res.V, res.Vinv
    # t acts on Z^m by the cyclic shift inside each generator block
    def shift_row(row):
        out = [0] * m
        for j in range(len(cols)):
            for l in range(n):
                out[j * n + (l + 1) % n] = row[j * n + l]
        return out

    T = []
    for a in keep:
        img = shift_row(Vi[a])
        T.append([sum(img[r] * V[r][b] for r in range(m) if img[r]) for b in keep])
    factors = tuple(diag[j] for j in tors)
    moduli = factors + (0,) * len(free)
    T = tuple(tuple(x % moduli[k] if moduli[k] else x for k, x in enumerate(row)) for row in T)
    return FinAbT(
        n=n,
        free_rank=len(free),
        invariant_factors=factors,
        t_matrix=T,
        _V=tuple(tuple(r) for r in V),
        _keep=tuple(keep),
        _block=n,
    )


# ----------------------------------------------------------------------
# resultants and growth

def sylvester_resultant(f: LaurentPoly, g: LaurentPoly) -> int:
    """Res(f, g) of the polynomial parts (both shifted to lowest degree 0)."""
    a = f.shift(-f.low).to_list()[::-1]  # highest degree first
    b = g.shift(-g.low).to_list()[::-1]
    da, db = len(a) - 1, len(b) - 1
    if da == 0:
        return a[0] ** db
    if db == 0:
        return b[0] ** da
    size = da + db
    S = []
    for i in range(db):
        S.append([0] * i + a + [0] * (size - da - 1 - i))
    for i in range(da):
        S.append([0] * i + b + [0] * (size - db - 1 - i))
    return bareiss_det(S)


def torsion_order_resultant(delta: LaurentPoly, n: int):
    """|Res(Delta, t^n - 1)|, or INFINITE when it vanishes."""
    if delta.is_zero():
        raise ValueError("delta must be nonzero")
    if n < 1:
        raise ValueError("n must be positive")
    r = abs(sylvester_resultant(delta, LaurentPoly({n: 1, 0: -1})))
    return INFINITE if r == 0 else r


def mahler(delta: LaurentPoly) -> float:
    """Mahler measure from the companion-matrix roots."""
    if delta.is_zero():
        raise ValueError("delta must be nonzero")
    c = delta.shift(-delta.low).to_list()
    lead = abs(c[-1])
    if len(c) == 1:
        return float(lead)
    roots = np.roots([float(x) for x in c[::-1]])
    return float(lead * np.prod(np.maximum(1.0, np.abs(roots))))


def sw_ratio(p: KnotPresentation, n: int):
    """ln |Tor H_1(L_n)| / n (INFINITE when b_1(L_n) > 0)."""
    t = torsion_order_resultant(alexander_poly(p), n)
    if is_infinite(t):
        return INFINITE
    return math.log(t) / n


def roots_of_unity_multiplicity(delta: LaurentPoly, n: int, tol: float = 1e-8) -> int:
    """Number of roots of delta (with multiplicity) that are n-th roots of unity."""
    c = delta.shift(-delta.low).to_list()
    if len(c) <= 1:
        return 0
    roots = np.roots([complex(x) for x in c[::-1]])
    count = 0
    for z in roots:
        if abs(abs(z) - 1) < 1e-6 and abs(z**n - 1) < max(tol, 1e-6):
            count += 1
    return count


def tor_and_b1(p: KnotPresentation, n: int) -> tuple[int, int]:
    """``(|Tor H_1(L_n)|, b_1(L_n))`` via the resultant, SNF only when it vanishes."""
    t = torsion_order_resultant(alexander_poly(p), n)
    if not is_infinite(t):
        return t, 0
    H = branched_homology(p, n)
    return H.torsion_order, H.free_rank
