"""Deformations of metabelian representations.

Cochains are stored in coordinates of a Frobenius-orthonormal basis of
sl(n): a 1-cochain is a complex vector of length ``g * (n^2 - 1)``.  The formal
solver works in truncated power series over ``C[t]/(t^(K+1))``; the numerical
continuation runs Newton on the relator equations with a gauge slice.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from scipy.linalg import expm

from .errors import InfiniteFamily, NewtonDiverged, ObstructionNonzero, is_infinite
from .knotio import KnotPresentation, Word
from .linalg import float_nullspace, orth
from .metab import commutant_dimension, count_classes, metabelian_reps
from .representation import Representation, float_rep
from .twisted import (
    adjoint_rep,
    random_words,
    sl_basis_float,
    sl_coords_float,
    sl_from_coords,
    torus_complex,
    twisted_complex,
)

FORMAL_TOL = 1e-7
NEWTON_TOL = 1e-10
NEWTON_MAX_ITER = 50
LSTSQ_RCOND = 1e-9
CERTIFY_GAP = 1e-4
PROBE_SEED = 0x5EED


# ----------------------------------------------------------------------
# cocycles and coboundaries

@dataclass
class CocycleSpaces:
    Z1: np.ndarray  # columns
    B1: np.ndarray
    H1: np.ndarray  # orthonormal, orthogonal to B1
    d: int
    g: int

    @property
    def dims(self):
        return {"Z1": self.Z1.shape[1], "B1": self.B1.shape[1], "H1": self.H1.shape[1]}


def _coboundary_matrix(module: Representation) -> np.ndarray:
    """Columns span B^1 = {g -> (I - rho(g)) X}."""
    d = module.n
    return np.vstack([np.eye(d) - A for A in module.images])


def cocycle_spaces(p: KnotPresentation, rep: Representation, adjoint: bool = True, tol: float = 1e-8) -> CocycleSpaces:
    """Z^1, B^1 and H^1 representatives (float).

    With ``adjoint=False`` the representation itself is the coefficient module.
    """
    F = rep.to_float()
    module = adjoint_rep(F) if adjoint else F
    C = twisted_complex(p, module)
    d, g = module.n, p.num_generators
    if C.r:
        _, s, vh = np.linalg.svd(C.d1)
        smax = s[0] if s.size else 0.0
        rank = int(np.sum(s > tol * smax)) if smax > 0 else 0
        Z = vh[rank:].conj().T
    else:
        Z = np.eye(g * d, dtype=complex)
    B = orth(_coboundary_matrix(module), tol)
    Zp = Z - B @ (B.conj().T @ Z) if B.size else Z
    Hr = orth(Zp, 1e-6) if Zp.size else np.zeros((g * d, 0), dtype=complex)
    return CocycleSpaces(Z, B, Hr, d, g)


def torus_cocycle_spaces(mu, lam, tol: float = 1e-8) -> CocycleSpaces:
    """Cocycle spaces of <mu, lambda | [mu, lambda]> with ad coefficients.

    ``mu`` and ``lam`` are commuting n x n matrices (the boundary images).
    """
    F = float_rep([mu, lam])
    ad = adjoint_rep(F)
    d0, d1 = torus_complex(ad.images[0], ad.images[1])
    d = ad.n
    Z = float_nullspace(d1, tol)
    B = orth(-d0, tol)
    Zp = Z - B @ (B.conj().T @ Z) if B.size else Z
    Hr = orth(Zp, 1e-6) if Zp.size else np.zeros((2 * d, 0), dtype=complex)
    return CocycleSpaces(Z, B, Hr, d, 2)


def cochain_matrices(vec, n: int, g: int) -> list[np.ndarray]:
    """Split a cochain vector into per-generator sl(n) matrices."""
    basis = sl_basis_float(n)
    d = n * n - 1
    return [sl_from_coords(vec[i * d:(i + 1) * d], basis) for i in range(g)]


def cochain_vector(mats: Sequence[np.ndarray], n: int) -> np.ndarray:
    basis = sl_basis_float(n)
    return np.concatenate([sl_coords_float(M, basis) for M in mats])


def cocycle_map(p: KnotPresentation, rep: Representation) -> np.ndarray:
    """The linear map a -> (a(r_j))_j on cochain vectors (the relator cocycle map)."""
    return twisted_complex(p, adjoint_rep(rep.to_float())).d1


# ----------------------------------------------------------------------
# truncated power series of matrices

def _smul(A, B, K):
    out = np.zeros_like(A)
    for i in range(K + 1):
        if not A[i].any():
            continue
        for j in range(K + 1 - i):
            out[i + j] += A[i] @ B[j]
    return out


def _sexp(X, K):
    """exp of a series with zero constant term."""
    n = X.shape[1]
    out = np.zeros_like(X)
    out[0] = np.eye(n)
    term = out.copy()
    for m in range(1, K + 1):
        term = _smul(term, X, K) / m
        out = out + term
    return out


def _series_rep(alpha_imgs, cochains, K):
    """Series images exp(sum t^i a_i(x)) alpha(x) and their inverses."""
    g = len(alpha_imgs)
    n = alpha_imgs[0].shape[0]
    imgs, invs = [], []
    for x in range(g):
        X = np.zeros((K + 1, n, n), dtype=complex)
        for i, a in enumerate(cochains, start=1):
            if i <= K:
                X[i] = a[x]
        E = _sexp(X, K)
        Einv = _sexp(-X, K)
        A = alpha_imgs[x]
        Ai = np.linalg.inv(A)
        imgs.append(np.einsum("kij,jl->kil", E, A))
        invs.append(np.einsum("ij,kjl->kil", Ai, Einv))
    return imgs, invs


def _series_word(w: Word, imgs, invs, K, n):
    P = np.zeros((K + 1, n, n), dtype=complex)
    P[0] = np.eye(n)
    for g, e in w.letters:
        M = imgs[g] if e > 0 else invs[g]
        for _ in range(abs(e)):
            P = _smul(P, M, K)
    return P


@dataclass
class DeformSeries:
    order: int
    cochains: list  # a_1..a_K, each a list of per-generator sl(n) matrices
    residuals: list  # residuals[k-1] = max relator coefficient norm at order k

    def to_json(self):
        return {"order": self.order, "residuals": [float(r) for r in self.residuals]}


def solve_formal(p: KnotPresentation, rep: Representation, a1, K: int, tol: float = FORMAL_TOL) -> DeformSeries:
    """Solve for a_2..a_K so that exp(sum t^i a_i) alpha is a homomorphism mod t^(K+1).

    ``a1`` is a cochain vector (orthonormal sl coordinates) or a list of matrices.
    """
    if K < 1:
        raise ValueError("order must be at least 1")
    F = rep.to_float()
    n, g = F.n, p.num_generators
    alpha = list(F.images)
    a1m = cochain_matrices(np.asarray(a1), n, g) if not isinstance(a1, list) else list(a1)
    L = cocycle_map(p, F)
    basis = sl_basis_float(n)
    cochains = [a1m]
    res0 = float(np.linalg.norm(L @ cochain_vector(a1m, n))) if L.size else 0.0
    residuals = [res0]
    if res0 > tol:
        raise ObstructionNonzero(1, res0)
    for k in range(1, K):
        imgs, invs = _series_rep(alpha, cochains, k + 1)
        c = []
        for r in p.relators:
            S = _series_word(r, imgs, invs, k + 1, n)
            c.append(sl_coords_float(S[k + 1], basis))
        c = np.concatenate(c) if c else np.zeros(0)
        if L.size:
            sol, *_ = np.linalg.lstsq(L, -c, rcond=None)
            resid = float(np.linalg.norm(L @ sol + c))
        else:
            sol, resid = np.zeros(g * (n * n - 1), dtype=complex), 0.0
        if resid > tol:
            raise ObstructionNonzero(k + 1, resid)
        cochains.append(cochain_matrices(sol, n, g))
        # the full relator coefficient at this order after the correction
        imgs, invs = _series_rep(alpha, cochains, k + 1)
        worst = 0.0
        for r in p.relators:
            S = _series_word(r, imgs, invs, k + 1, n)
            worst = max(worst, float(np.linalg.norm(S[k + 1])))
        residuals.append(worst)
    return DeformSeries(K, cochains, residuals)


def series_residuals(p: KnotPresentation, rep: Representation, series: DeformSeries) -> list[float]:
    """Recompute the relator residual at every order 1..K."""
    F = rep.to_float()
    K = series.order
    imgs, invs = _series_rep(list(F.images), series.cochains, K)
    out = [0.0] * K
    for r in p.relators:
        S = _series_word(r, imgs, invs, K, F.n)
        for k in range(1, K + 1):
            out[k - 1] = max(out[k - 1], float(np.linalg.norm(S[k])))
    return out


# ----------------------------------------------------------------------
# Newton continuation

def relator_residual(p: KnotPresentation, images) -> float:
    rep = float_rep(images)
    return rep.relator_residual(p)


def _relator_rhs(p, rep, basis):
    out = []
    for r in p.relators:
        R = rep(r)
        out.append(sl_coords_float(np.linalg.inv(R) - np.eye(rep.n), basis))
    return np.concatenate(out) if out else np.zeros(0)


def _sl_normalize(A):
    n = A.shape[0]
    det = np.linalg.det(A)
    return A / det ** (1.0 / n)


def newton_correct(p: KnotPresentation, images, a1_vec, max_iter: int = NEWTON_MAX_ITER, tol: float = NEWTON_TOL, t=None):
    """Newton iteration from ``images``; corrections orthogonal to B^1 and to ``a1``.

    Steps come from a truncated-SVD least-squares solve, so directions along
    which the gauge-fixed Jacobian is numerically singular (extra deformation
    parameters when dim H^1 > 1) are left alone.
    """
    imgs = [np.array(A, dtype=complex) for A in images]
    n = imgs[0].shape[0]
    g = len(imgs)
    basis = sl_basis_float(n)
    a1_unit = np.asarray(a1_vec, dtype=complex)
    nrm = np.linalg.norm(a1_unit)
    a1_unit = a1_unit / nrm if nrm > 0 else a1_unit
    resid = relator_residual(p, imgs)
    best = (resid, [A.copy() for A in imgs])
    it = 0
    while resid > tol * 1e-3 and it < max_iter:
        rep = float_rep(imgs)
        ad = adjoint_rep(rep)
        L = twisted_complex(p, ad).d1
        B = _coboundary_matrix(ad)
        cons = np.hstack([B, a1_unit[:, None]]) if nrm > 0 else B
        Q = _complement(cons, g * ad.n)
        rhs = _relator_rhs(p, rep, basis)
        y, *_ = np.linalg.lstsq(L @ Q, rhs, rcond=LSTSQ_RCOND)
        delta = Q @ y
        for i, D in enumerate(cochain_matrices(delta, n, g)):
            imgs[i] = _sl_normalize(expm(D) @ imgs[i])
        resid = relator_residual(p, imgs)
        it += 1
        if not np.isfinite(resid):
            break
        if resid < best[0]:
            best = (resid, [A.copy() for A in imgs])
        elif best[0] <= tol:
            break
    resid, imgs = best
    if not (resid <= tol):
        raise NewtonDiverged(t, resid)
    return imgs, resid, it


def _complement(C, dim, tol=1e-10):
    """Orthonormal basis of the orthogonal complement of the column span of C."""
    u, s, _ = np.linalg.svd(C, full_matrices=True)
    smax = s[0] if s.size else 0.0
    rank = int(np.sum(s > tol * smax)) if smax > 0 else 0
    return u[:, rank:]


def probe_words(num_generators: int, count: int = 20) -> list[Word]:
    gens = [Word.gen(i) for i in range(num_generators)]
    extra = random_words(num_generators, max(0, count - len(gens)), seed=PROBE_SEED)
    return (gens + extra)[:count]


def probe_characters(rep: Representation, words: Sequence[Word]) -> np.ndarray:
    F = rep.to_float()
    return np.array([complex(np.trace(F(w))) for w in words])


@dataclass
class NewtonStep:
    t: float
    rep: Representation
    residual: float
    iterations: int
    probe: np.ndarray

    def to_json(self):
        return {
            "t": self.t,
            "residual": self.residual,
            "iterations": self.iterations,
            "probe": [[float(z.real), float(z.imag)] for z in self.probe],
        }


def default_steps(count: int = 5, h: float = 0.02) -> list[float]:
    return [round(h * j, 12) for j in range(1, count + 1)]


def newton_deform(p: KnotPresentation, rep: Representation, a1, steps: Optional[Sequence[float]] = None,
                  max_iter: int = NEWTON_MAX_ITER, tol: float = NEWTON_TOL) -> list[NewtonStep]:
    """Continue ``rep`` along the first-order direction ``a1`` for each t in ``steps``."""
    steps = default_steps() if steps is None else list(steps)
    F = rep.to_float()
    n, g = F.n, p.num_generators
    a1_vec = np.asarray(a1 if not isinstance(a1, list) else cochain_vector(a1, n), dtype=complex)
    # split a1 = (I - Ad)X + h: the coboundary part is applied as an exact conjugation
    Bmat = _coboundary_matrix(adjoint_rep(F))
    X, *_ = np.linalg.lstsq(Bmat, a1_vec, rcond=None)
    hm = cochain_matrices(a1_vec - Bmat @ X, n, g)
    Xm = sl_from_coords(X, sl_basis_float(n))
    words = probe_words(g)
    out = []
    for t in steps:
        C, Ci = expm(t * Xm), expm(-t * Xm)
        init = [expm(t * hm[i]) @ C @ F.images[i] @ Ci for i in range(g)]
        imgs, resid, it = newton_correct(p, init, a1_vec, max_iter, tol, t=t)
        new = float_rep(imgs, {"kind": "Deformed", "t": t})
        out.append(NewtonStep(float(t), new, float(resid), it, probe_characters(new, words)))
    return out


def certify_nonmetabelian(rep: Representation, p: KnotPresentation, n: int) -> bool:
    """True iff ``rep`` is irreducible and its probe character is far from every metabelian one."""
    c = count_classes(p, n)
    if is_infinite(c):
        raise InfiniteFamily(f"infinitely many metabelian classes in rank {n}")
    if commutant_dimension(rep.to_float()) != 1:
        return False
    words = probe_words(p.num_generators)
    mine = probe_characters(rep, words)
    dist = min_metabelian_distance(mine, p, n, words)
    return dist > CERTIFY_GAP


def min_metabelian_distance(probe, p: KnotPresentation, n: int, words=None) -> float:
    words = words or probe_words(p.num_generators)
    best = np.inf
    for _, m in metabelian_reps(p, n):
        best = min(best, float(np.max(np.abs(probe - probe_characters(m, words)))))
    return best


def jacobian_fd(p: KnotPresentation, rep: Representation, h: float = 1e-6) -> np.ndarray:
    """Finite-difference Jacobian of a -> (sl part of rho_a(r) - I) at a = 0, rho_a(x) = exp(a(x)) rho(x)."""
    F = rep.to_float()
    n, g = F.n, p.num_generators
    d = n * n - 1
    basis = sl_basis_float(n)
    cols = []
    for k in range(g * d):
        v = np.zeros(g * d, dtype=complex)
        v[k] = h
        mats = cochain_matrices(v, n, g)
        plus = float_rep([expm(mats[i]) @ F.images[i] for i in range(g)])
        minus = float_rep([expm(-mats[i]) @ F.images[i] for i in range(g)])
        col = []
        for r in p.relators:
            col.append(sl_coords_float((plus(r) - minus(r)) / (2 * h), basis))
        cols.append(np.concatenate(col))
    return np.array(cols).T
