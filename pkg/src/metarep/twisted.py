"""Twisted cohomology of knot groups from presentations.

Cochains on the presentation 2-complex: ``C^0 = V``, ``C^1 = V^g``,
``C^2 = V^r``.  A 1-cochain is the vector ``(a(x_1), ..., a(x_g))`` and extends
to words by ``a(uv) = a(u) + rho(u) a(v)``, so ``a(w) = sum_i rho(dw/dx_i) a(x_i)``.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .alexmod import branched_homology
from .cyclotomic import CycNum
from .errors import (
    DecompositionMismatch,
    InfiniteFamily,
    Intractable,
    MissingLongitude,
    NotRegular,
    SingularDenominator,
)
from .knotio import KnotPresentation, Word, commutator, fox_eval
from .laurent import LaurentPoly
from .linalg import as_object_array, exact_det, exact_rank, float_rank, orth
from .metab import (
    Character,
    build_rep,
    character_action,
    enumerate_characters,
    make_character,
    meridian_is_regular,
    regular_rep,
)
from .representation import Backend, Representation

WORD_SEED = 0x5EED
COVER_CAP = 10**4


# ----------------------------------------------------------------------
# adjoint representation

def _sl_basis_exact(n, N):
    """E_ij (i != j) followed by H_k = E_kk - E_(k+1)(k+1)."""
    one, zero = CycNum.one(N), CycNum.zero(N)
    basis = []
    for i in range(n):
        for j in range(n):
            if i != j:
                M = [[zero] * n for _ in range(n)]
                M[i][j] = one
                basis.append(as_object_array(M))
    for k in range(n - 1):
        M = [[zero] * n for _ in range(n)]
        M[k][k] = one
        M[k + 1][k + 1] = -one
        basis.append(as_object_array(M))
    return basis


def _sl_coords_exact(X, n):
    out = [X[i, j] for i in range(n) for j in range(n) if i != j]
    c = X[0, 0] * 0
    for k in range(n - 1):
        c = c + X[k, k]
        out.append(c)
    return out


def sl_basis_float(n):
    """Frobenius-orthonormal basis of sl(n)."""
    basis = []
    for i in range(n):
        for j in range(n):
            if i != j:
                M = np.zeros((n, n), dtype=complex)
                M[i, j] = 1
                basis.append(M)
    for k in range(n - 1):
        M = np.zeros((n, n), dtype=complex)
        M[: k + 1, : k + 1] = np.eye(k + 1)
        M[k + 1, k + 1] = -(k + 1)
        basis.append(M / np.sqrt((k + 1) * (k + 2)))
    return basis


def sl_coords_float(X, basis):
    return np.array([np.vdot(B, X) for B in basis])


def sl_from_coords(c, basis):
    out = np.zeros_like(basis[0]) if basis else np.zeros((1, 1), dtype=complex)
    for x, B in zip(c, basis):
        out = out + x * B
    return out


def adjoint_matrix(A, Ainv, n, exact, N=1, basis=None):
    """Matrix of X -> A X A^-1 on sl(n) in the standard basis."""
    if exact:
        basis = basis if basis is not None else _sl_basis_exact(n, N)
        cols = [_sl_coords_exact(A @ B @ Ainv, n) for B in basis]
        d = len(basis)
        return as_object_array([[cols[m][i] for m in range(d)] for i in range(d)])
    basis = basis if basis is not None else sl_basis_float(n)
    cols = [sl_coords_float(A @ B @ Ainv, basis) for B in basis]
    return np.array(cols, dtype=complex).T


def adjoint_rep(rep: Representation) -> Representation:
    """Adjoint action on sl(n), dimension n^2 - 1."""
    n = rep.n
    if rep.exact:
        basis = _sl_basis_exact(n, rep.N)
        imgs = tuple(adjoint_matrix(A, Ai, n, True, rep.N, basis) for A, Ai in zip(rep.images, rep.inverses))
        return Representation(n * n - 1, imgs, Backend.EXACT, rep.N, {"kind": "Adjoint", "of": rep.provenance})
    basis = sl_basis_float(n)
    imgs = tuple(adjoint_matrix(A, Ai, n, False, basis=basis) for A, Ai in zip(rep.images, rep.inverses))
    return Representation(n * n - 1, imgs, Backend.FLOAT, 1, {"kind": "Adjoint", "of": rep.provenance})


def killing_gram(n: int, exact: bool, N: int = 1):
    """Gram matrix of (X, Y) -> tr(XY) in the standard sl(n) basis."""
    if exact:
        B = _sl_basis_exact(n, N)
        tr = lambda M: sum((M[i, i] for i in range(n)), CycNum.zero(N))
        return as_object_array([[tr(X @ Y) for Y in B] for X in B])
    B = sl_basis_float(n)
    return np.array([[np.trace(X @ Y) for Y in B] for X in B])


# ----------------------------------------------------------------------
# cochain complex

@dataclass
class TwistedComplex:
    d: int
    g: int
    r: int
    d0: object
    d1: object
    exact: bool

    def check(self, tol=1e-9) -> bool:
        """d1 d0 = 0."""
        if self.r == 0 or self.d == 0:
            return True
        if self.exact:
            P = as_object_array(self.d1) @ as_object_array(self.d0)
            return all(x == 0 for x in P.flat)
        return float(np.abs(self.d1 @ self.d0).max(initial=0.0)) <= tol


@dataclass
class CohomologyReport:
    h0: int
    h1: int
    z1: int
    b1_dim: int
    rank_d0: int
    rank_d1: int
    d: int

    def to_json(self):
        return dict(self.__dict__)


def _blocks_to_rows(blocks, nr, nc, d, zero):
    rows = []
    for bi in range(nr):
        for i in range(d):
            row = []
            for bj in range(nc):
                B = blocks[bi][bj]
                if B is None:
                    row.extend([zero] * d)
                else:
                    row.extend(B[i, k] for k in range(d))
            rows.append(row)
    return rows


def fox_blocks(words, rho: Representation, eps=None):
    """Per word, per generator: graded Fox derivative images ``{deg: matrix}``."""
    out = []
    for w in words:
        _, der = fox_eval(w, rho.images, rho.inverses, rho.identity, eps)
        out.append(der)
    return out


def twisted_complex(p: KnotPresentation, rho: Representation) -> TwistedComplex:
    d, g, r = rho.n, p.num_generators, len(p.relators)
    I = rho.identity
    ders = fox_blocks(p.relators, rho)
    if rho.exact:
        zero = CycNum.zero(rho.N)
        d0 = []
        for A in rho.images:
            D = A - I
            d0.extend([list(D[i]) for i in range(d)])
        blocks = [[sum(der[k].values()) if k in der else None for k in range(g)] for der in ders]
        d1 = _blocks_to_rows(blocks, r, g, d, zero)
        return TwistedComplex(d, g, r, d0, d1, True)
    d0 = np.vstack([A - I for A in rho.images]) if g else np.zeros((0, d))
    d1 = np.zeros((r * d, g * d), dtype=complex)
    for j, der in enumerate(ders):
        for k, slot in der.items():
            d1[j * d:(j + 1) * d, k * d:(k + 1) * d] = sum(slot.values())
    return TwistedComplex(d, g, r, d0, d1, False)


def cohomology_dims(p: KnotPresentation, rho: Representation, tol: float = 1e-8) -> CohomologyReport:
    """dim H^0 and H^1 with coefficients twisted by ``rho``."""
    C = twisted_complex(p, rho)
    d, g = C.d, C.g
    if d == 0:
        return CohomologyReport(0, 0, 0, 0, 0, 0, 0)
    if C.exact:
        r0 = exact_rank(C.d0)
        r1 = exact_rank(C.d1) if C.r else 0
    else:
        r0 = float_rank(C.d0, tol)
        r1 = float_rank(C.d1, tol) if C.r else 0
    h0 = d - r0
    z1 = g * d - r1
    b1 = d - h0
    return CohomologyReport(h0, z1 - b1, z1, b1, r0, r1, d)


# ----------------------------------------------------------------------
# decomposition: ad alpha + theta_1 = alpha_n + sum beta_(n, chi_i)

def random_words(num_generators: int, count: int = 200, seed: int = WORD_SEED, max_len: int = 12):
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        L = rng.randint(1, max_len)
        out.append(Word(tuple((rng.randrange(num_generators), rng.choice((1, -1))) for _ in range(L))))
    return out


def _trace(M, n):
    s = M[0, 0]
    for i in range(1, n):
        s = s + M[i, i]
    return s


def adjoint_trace(rep: Representation, w: Word, basis=None):
    """tr Ad(rho(w)) on sl(n), computed by conjugating the basis."""
    n = rep.n
    if n == 1:
        return CycNum.zero(rep.N) if rep.exact else 0j
    A = rep(w)
    Ai = rep(w.inverse())
    if rep.exact:
        basis = basis or _sl_basis_exact(n, rep.N)
        tot = CycNum.zero(rep.N)
        for m, B in enumerate(basis):
            tot = tot + _sl_coords_exact(A @ B @ Ai, n)[m]
        return tot
    basis = basis or sl_basis_float(n)
    return sum(np.vdot(B, A @ B @ Ai) for B in basis)


def chi_i(chi: Character, i: int) -> Character:
    """chi_i(v) = chi(v)^-1 chi(t^i v)."""
    H = chi.ambient
    b = character_action(H, chi.exponents, i)
    return make_character(H, tuple((x - y) % d for x, y, d in zip(b, chi.exponents, chi.moduli)))


@dataclass
class DecompositionReport:
    n: int
    words_checked: int
    traces_equal: bool
    h1_ad: int
    b1_Ln: int
    h1_betas: list
    h1_regular: int
    h1_additive: bool
    chi_orders: list

    def to_json(self):
        return dict(self.__dict__)


def verify_decomposition(p: KnotPresentation, n: int, chi: Character, num_words: int = 200, seed: int = WORD_SEED,
                         check_cohomology: bool = True) -> DecompositionReport:
    alpha = build_rep(p, n, chi)
    H = chi.ambient
    chis = [chi_i(chi, i) for i in range(1, n)]
    betas = [build_rep(p, n, c, beta=True) for c in chis]
    reg = regular_rep(p, n)
    words = [Word.gen(g) for g in range(p.num_generators)] + random_words(p.num_generators, num_words, seed)
    basis = _sl_basis_exact(n, alpha.N) if n > 1 else None
    for w in words:
        lhs = adjoint_trace(alpha, w, basis) + 1
        rhs = reg.trace(w)
        for b in betas:
            rhs = rhs + b.trace(w)
        if lhs != rhs:
            raise DecompositionMismatch(f"trace identity fails on {w}: {lhs} != {rhs}")
    h1_ad = h1_reg = 0
    h1b: list = []
    additive = True
    b1 = H.free_rank
    if check_cohomology:
        h1_ad = cohomology_dims(p, adjoint_rep(alpha)).h1 if n > 1 else 0
        h1b = [cohomology_dims(p, b).h1 for b in betas]
        h1_reg = cohomology_dims(p, reg).h1
        additive = h1_ad == b1 + sum(h1b) and h1_reg == 1 + b1
        if not additive:
            raise DecompositionMismatch(f"h1 additivity fails: {h1_ad} != {b1} + {sum(h1b)}")
    return DecompositionReport(n, len(words), True, h1_ad, b1, h1b, h1_reg, additive, [c.order for c in chis])


# ----------------------------------------------------------------------
# twisted Alexander polynomials

def _interpolate(xs, ys):
    """Newton interpolation over a field; returns coefficients lowest degree first."""
    m = len(xs)
    coef = list(ys)
    for j in range(1, m):
        for i in range(m - 1, j - 1, -1):
            coef[i] = (coef[i] - coef[i - 1]) / (xs[i] - xs[i - j])
    zero = ys[0] * 0
    poly = [zero] * m
    # expand the Newton form
    for i in range(m - 1, -1, -1):
        # poly = poly * (t - xs[i]) + coef[i]
        new = [zero] * m
        for k in range(m - 1):
            new[k + 1] = new[k + 1] + poly[k]
            new[k] = new[k] - poly[k] * xs[i]
        new[0] = new[0] + coef[i]
        poly = new
    return poly


def _poly_matrix_det(entries, size, exact, N=1):
    """Determinant of a square matrix with entries ``{deg: scalar}``."""
    if size == 0:
        return LaurentPoly.const(CycNum.one(N) if exact else 1.0)
    lows, highs = [], []
    for j in range(size):
        degs = [d for i in range(size) for d in entries[i][j]]
        lows.append(min(degs) if degs else 0)
        highs.append(max(degs) if degs else 0)
    bound = sum(h - l for h, l in zip(highs, lows))
    shift = sum(lows)
    if exact:
        xs = list(range(1, bound + 2))
        vals = []
        zero = CycNum.zero(N)
        for x in xs:
            M = [[zero] * size for _ in range(size)]
            for i in range(size):
                for j in range(size):
                    acc = zero
                    for d, c in entries[i][j].items():
                        acc = acc + c * _pow_frac(x, d - lows[j])
                    M[i][j] = acc
            vals.append(exact_det(M))
        coeffs = _interpolate([CycNum.from_int(N, x) for x in xs], vals)
        return LaurentPoly({k + shift: c for k, c in enumerate(coeffs)})
    m = bound + 1
    xs = np.exp(2j * np.pi * np.arange(m) / m)
    vals = []
    for x in xs:
        M = np.zeros((size, size), dtype=complex)
        for i in range(size):
            for j in range(size):
                for d, c in entries[i][j].items():
                    M[i, j] += c * x ** (d - lows[j])
        vals.append(np.linalg.det(M))
    # values at the m-th roots of unity -> coefficients
    coeffs = np.fft.ifft(vals)
    return LaurentPoly({k + shift: complex(c) for k, c in enumerate(coeffs) if abs(c) > 1e-9})


def _pow_frac(x, e):
    from fractions import Fraction

    return x**e if e >= 0 else Fraction(1, x ** (-e))


@dataclass
class TwistedAlexander:
    numerator: LaurentPoly
    denominator: LaurentPoly
    generator: int

    def to_json(self):
        def ser(poly):
            return {str(k): (v.to_json() if isinstance(v, CycNum) else [v.real, v.imag]) for k, v in sorted(poly.coeffs.items())}

        return {"numerator": ser(self.numerator), "denominator": ser(self.denominator), "generator": self.generator}


def twisted_alexander(p: KnotPresentation, rho: Representation) -> TwistedAlexander:
    """Wada's invariant as a pair (numerator, denominator).

    The numerator is the determinant of the twisted Fox Jacobian with the
    block column of generator ``k`` removed, the denominator ``det(rho(x_k) t^eps_k - I)``.
    ``k`` is the meridian generator when there is one.
    """
    eps = p.epsilon
    g, r, d = p.num_generators, len(p.relators), rho.n
    if g - r != 1:
        raise ValueError("twisted Alexander polynomials need a deficiency-one presentation")
    ders = fox_blocks(p.relators, rho, eps)
    order = []
    if p.meridian_generator is not None:
        order.append(p.meridian_generator)
    order += sorted((k for k in range(g) if k not in order), key=lambda k: (abs(eps[k]), k))
    N = rho.N if rho.exact else 1
    for k in order:
        if eps[k] == 0:
            continue
        # denominator
        den_entries = [[{} for _ in range(d)] for _ in range(d)]
        A = rho.images[k]
        for i in range(d):
            for j in range(d):
                if A[i, j] != 0:
                    den_entries[i][j][eps[k]] = A[i, j]
                if i == j:
                    den_entries[i][j][0] = den_entries[i][j].get(0, 0) - 1
        den = _poly_matrix_det(den_entries, d, rho.exact, N)
        if den.is_zero():
            continue
        cols = [c for c in range(g) if c != k]
        size = r * d
        entries = [[{} for _ in range(size)] for _ in range(size)]
        for jr, der in enumerate(ders):
            for ci, c in enumerate(cols):
                slot = der.get(c)
                if not slot:
                    continue
                for deg, M in slot.items():
                    for a in range(d):
                        for b in range(d):
                            v = M[a, b]
                            if v != 0:
                                e = entries[jr * d + a][ci * d + b]
                                e[deg] = e[deg] + v if deg in e else v
        num = _poly_matrix_det(entries, size, rho.exact, N)
        return TwistedAlexander(num, den, k)
    raise SingularDenominator("det(rho(x_k) t - I) vanishes for every generator")


def is_unit_multiple(a: LaurentPoly, b: LaurentPoly):
    """If ``a = c t^k b`` return ``(c, k)``; else ``None``."""
    if a.is_zero() or b.is_zero():
        return None
    try:
        q = a.exact_div(b)
    except (ArithmeticError, ZeroDivisionError):
        return None
    if not q.is_monomial():
        return None
    (k, c), = q.coeffs.items()
    return c, k


def substitute_root(delta: LaurentPoly, N: int, e: int) -> LaurentPoly:
    """``delta(zeta_N^e t)`` with exact cyclotomic coefficients."""
    return LaurentPoly({k: CycNum.root(N, e * k) * v for k, v in delta.coeffs.items()})


# ----------------------------------------------------------------------
# boundary restriction

@dataclass
class BoundaryReport:
    image_dim: int
    omega_matrix: list
    isotropy_residual: float
    torus_h0: int
    torus_h1: int
    torus_z1: int
    knot_h1: int

    def to_json(self):
        d = dict(self.__dict__)
        d["omega_matrix"] = [[[float(np.real(x)), float(np.imag(x))] for x in row] for row in self.omega_matrix]
        return d


def _word_cocycle_map(w: Word, ad: Representation, g: int):
    """Matrix sending (a(x_1), ..., a(x_g)) to a(w)."""
    d = ad.n
    _, der = fox_eval(w, ad.images, ad.inverses, ad.identity)
    F = np.zeros((d, g * d), dtype=complex)
    for k, slot in der.items():
        F[:, k * d:(k + 1) * d] = sum(slot.values())
    return F


def torus_complex(Amu, Alam):
    """Cochain maps of <mu, lambda | [mu, lambda]> with the given module images."""
    d = Amu.shape[0]
    rel = commutator(Word.gen(0), Word.gen(1))
    inv = (np.linalg.inv(Amu), np.linalg.inv(Alam))
    _, der = fox_eval(rel, (Amu, Alam), inv, np.eye(d, dtype=complex))
    d1 = np.zeros((d, 2 * d), dtype=complex)
    for k, slot in der.items():
        d1[:, k * d:(k + 1) * d] = sum(slot.values())
    d0 = np.vstack([Amu - np.eye(d), Alam - np.eye(d)])
    return d0, d1


def omega(u, v, Amu, Alam, basis):
    """Cup-product pairing on the boundary torus evaluated on its fundamental class."""
    d = Amu.shape[0]
    um, ul = u[:d], u[d:]
    vm, vl = v[:d], v[d:]
    X1 = sl_from_coords(um, basis)
    Y1 = sl_from_coords(Amu @ vl, basis)
    X2 = sl_from_coords(ul, basis)
    Y2 = sl_from_coords(Alam @ vm, basis)
    return np.trace(X1 @ Y1) - np.trace(X2 @ Y2)


def boundary_restriction(p: KnotPresentation, rep: Representation, with_longitude: bool = True, tol: float = 1e-8) -> BoundaryReport:
    """Image of H^1(N_K; ad rho) -> H^1(boundary; ad rho) and the pairing on it."""
    if p.longitude is None or not with_longitude:
        raise MissingLongitude("boundary restriction needs a longitude word")
    if not meridian_is_regular(rep, p):
        raise NotRegular("the meridian image does not have distinct eigenvalues")
    F = rep.to_float()
    ad = adjoint_rep(F)
    d, g = ad.n, p.num_generators
    basis = sl_basis_float(F.n)
    C = twisted_complex(p, ad)
    Z = _nullspace(C.d1, g * d, tol)
    Amu, Alam = ad(p.meridian), ad(p.longitude)
    R = np.vstack([_word_cocycle_map(p.meridian, ad, g), _word_cocycle_map(p.longitude, ad, g)]) @ Z
    t_d0, t_d1 = torus_complex(Amu, Alam)
    rb = float_rank(t_d0, tol)
    h0 = d - rb
    z1 = 2 * d - float_rank(t_d1, tol)
    joint = np.hstack([R, t_d0]) if R.size else t_d0
    image_dim = float_rank(joint, tol) - rb
    # an orthonormal basis of the image modulo torus coboundaries
    Bq = orth(t_d0, tol)
    Rp = R - Bq @ (Bq.conj().T @ R) if R.size else R
    img = orth(Rp, 1e-6) if Rp.size else np.zeros((2 * d, 0))
    k = img.shape[1]
    Om = [[omega(img[:, i], img[:, j], Amu, Alam, basis) for j in range(k)] for i in range(k)]
    resid = max((abs(x) for row in Om for x in row), default=0.0)
    knot_h1 = Z.shape[1] - float_rank(C.d0, tol)
    return BoundaryReport(image_dim, Om, float(resid), h0, z1 - rb, z1, knot_h1)


def _nullspace(M, ncols, tol):
    M = np.asarray(M, dtype=complex)
    if M.shape[0] == 0:
        return np.eye(ncols, dtype=complex)
    _, s, vh = np.linalg.svd(M)
    smax = s[0] if s.size else 0.0
    rank = int(np.sum(s > tol * smax)) if smax > 0 else 0
    return vh[rank:].conj().T


# ----------------------------------------------------------------------
# criteria

@dataclass
class CriterionVerdict:
    h1: int
    criterion_met: bool
    b1_Ln: int

    def to_json(self):
        return dict(self.__dict__)


def criterion_check(p: KnotPresentation, n: int, chi: Character, exact: bool = True) -> CriterionVerdict:
    """Is dim H^1(N_K; sl(n)_ad alpha) = n - 1?"""
    H = branched_homology(p, n)
    if H.free_rank:
        raise InfiniteFamily(f"b_1(L_{n}) = {H.free_rank} > 0; the criterion is not applicable")
    alpha = build_rep(p, n, chi)
    ad = adjoint_rep(alpha if exact else alpha.to_float())
    h1 = cohomology_dims(p, ad).h1
    met = h1 == n - 1
    if met and H.free_rank:
        raise AssertionError("criterion met with b_1(L_n) > 0")
    return CriterionVerdict(h1, met, H.free_rank)


@dataclass
class CoverReport:
    k: int
    b1_tilde: int
    equality: bool
    mv_bound: int
    h1_by_character: list = field(default_factory=list)

    def to_json(self):
        return dict(self.__dict__)


def cover_betti(p: KnotPresentation, n: int, chi: Optional[Character] = None, cap: int = COVER_CAP) -> CoverReport:
    """b_1 of the metabelian cover: sum over characters sigma of H of h1(beta_(n, sigma))."""
    H = branched_homology(p, n)
    if H.free_rank:
        raise InfiniteFamily(f"b_1(L_{n}) = {H.free_rank} > 0")
    k = H.torsion_order
    if k > cap:
        raise Intractable(f"|H| = {k} exceeds the cap {cap}")
    hs = []
    for sigma, _ in enumerate_characters(H):
        hs.append(cohomology_dims(p, build_rep(p, n, sigma, beta=True)).h1)
    b = sum(hs)
    return CoverReport(k, b, b == k, b - k, hs)
