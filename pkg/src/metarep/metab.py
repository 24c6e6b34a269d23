"""Irreducible metabelian SL(n, C) representations of knot groups.

Characters of ``Tor H_1(L_n)`` are exponent vectors ``a`` with
``chi(w) = exp(2 pi i sum_k a_k w_k / d_k)`` in the SNF coordinates of
:class:`~metarep.alexmod.FinAbT`.  A character of order ``n`` (t-orbit of size
``n``) and a scalar ``z`` with ``z^n = (-1)^(n+1)`` give

    alpha(x) = P_z^eps(x) * diag(chi(h), chi(tau h), ..., chi(tau^(n-1) h))

where ``(eps(x), h(x))`` is the image of ``x`` in ``Z/n`` semidirect ``H/(t^n-1)``,
``P_z e_k = z e_(k+1)`` and ``tau`` is conjugation by the inverse meridian.  In
Fox-calculus terms ``tau`` is ``t^-1``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from math import gcd
from typing import Iterator, Optional, Union

import numpy as np

from .alexmod import FinAbT, branched_homology, module_presentation, tor_and_b1
from .cyclotomic import CycNum
from .errors import INFINITE, InfiniteFamily, Intractable, RelatorViolation
from .knotio import KnotPresentation, Word
from .linalg import (
    as_object_array,
    exact_rank,
    float_rank,
    has_distinct_eigenvalues,
)
from .representation import Backend, Representation

ENUMERATION_CAP = 10**6


# ----------------------------------------------------------------------
# small number theory

def divisors(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


def prime_factors(n: int) -> list[int]:
    """Prime factors with multiplicity, ascending."""
    out, p = [], 2
    while p * p <= n:
        while n % p == 0:
            out.append(p)
            n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


def mobius(n: int) -> int:
    f = prime_factors(n)
    if len(f) != len(set(f)):
        return 0
    return -1 if len(f) % 2 else 1


def _lcm(a, b):
    return a * b // gcd(a, b)


# ----------------------------------------------------------------------
# characters

@dataclass(frozen=True)
class Character:
    exponents: tuple
    moduli: tuple
    order: int
    ambient: Optional[FinAbT] = field(default=None, compare=False, repr=False, hash=False)

    def to_json(self):
        return {"exponents": list(self.exponents), "moduli": list(self.moduli), "order": self.order}

    def is_trivial(self):
        return not any(self.exponents)


def _torsion_block(H: FinAbT):
    k = len(H.invariant_factors)
    return [row[:k] for row in H.t_matrix[:k]]


def character_action(H: FinAbT, a, power: int = 1) -> tuple:
    """Exponents of ``chi o t^power``."""
    d = H.invariant_factors
    T = _torsion_block(H)
    k = len(d)
    a = tuple(a)
    for _ in range(power % H.n if H.n else 0):
        # chi(w T) = exp(2 pi i sum_j a_j (w T)_j / d_j)
        a = tuple(sum(a[j] * (T[i][j] * d[i] // d[j]) for j in range(k)) % d[i] for i in range(k))
    return a


def character_orbit(H: FinAbT, a) -> list[tuple]:
    orbit = [tuple(a)]
    while True:
        b = character_action(H, orbit[-1])
        if b == orbit[0]:
            return orbit
        orbit.append(b)
        if len(orbit) > H.n:
            raise AssertionError("t-orbit longer than n; t^n is not the identity")


def make_character(H: FinAbT, a) -> Character:
    a = tuple(int(x) % d for x, d in zip(a, H.invariant_factors))
    return Character(a, tuple(H.invariant_factors), len(character_orbit(H, a)), H)


def enumerate_characters(H: FinAbT, n: Optional[int] = None) -> Iterator[tuple[Character, int]]:
    """Every character of the torsion group, lexicographically, with its orbit size."""
    if H.free_rank:
        raise InfiniteFamily(f"b_1(L_{H.n}) = {H.free_rank} > 0: the character set is infinite")
    if n is not None and n != H.n:
        raise ValueError("n does not match the cover degree of H")
    if H.torsion_order > ENUMERATION_CAP:
        raise Intractable(f"|H| = {H.torsion_order} exceeds the enumeration cap {ENUMERATION_CAP}")
    for a in itertools.product(*[range(d) for d in H.invariant_factors]):
        ch = make_character(H, a)
        yield ch, ch.order


def orbit_representatives(H: FinAbT, order: Optional[int] = None) -> list[Character]:
    """Lexicographically smallest member of each t-orbit (optionally of a given order)."""
    reps = []
    for ch, size in enumerate_characters(H):
        if order is not None and size != order:
            continue
        if min(character_orbit(H, ch.exponents)) == ch.exponents:
            reps.append(ch)
    return reps


def conjugate_classes_equal(chi1: Character, chi2: Character) -> bool:
    """True iff ``chi2 = t^k chi1`` for some ``k``."""
    if chi1.moduli != chi2.moduli:
        return False
    H = chi1.ambient or chi2.ambient
    if H is None:
        raise ValueError("characters carry no ambient group")
    return chi2.exponents in character_orbit(H, chi1.exponents)


# ----------------------------------------------------------------------
# counting

def count_classes(p: KnotPresentation, n: int):
    """Number of conjugacy classes of irreducible metabelian SL(n, C) representations.

    Möbius inversion over the divisors of ``n`` of ``|Tor H_1(L_d)|``.  When
    ``b_1(L_n) > 0`` only divisors with the same Betti number carry top-
    dimensional families; the answer is ``INFINITE`` if any such family has
    characters of exact order ``n`` and 0 otherwise.
    """
    if n < 1:
        raise ValueError("n must be positive")
    info = {d: tor_and_b1(p, d) for d in divisors(n)}
    b_n = info[n][1]
    total = sum(mobius(n // d) * info[d][0] for d in info if info[d][1] == b_n)
    if b_n == 0:
        if total % n:
            raise AssertionError(f"Möbius sum {total} not divisible by {n}")
        return total // n
    return INFINITE if total > 0 else 0


def count_classes_bruteforce(p: KnotPresentation, n: int) -> int:
    H = branched_homology(p, n)
    return sum(1 for _, size in enumerate_characters(H) if size == n) // n


def rn_lower_bound(p: KnotPresentation, n: int) -> int:
    """Ceiling of ``(|Tor H_1(L_n)| - sum_i |Tor H_1(L_{n/p_i})|) / n`` clamped at 0.

    ``p_i`` runs over the prime factors of ``n`` with multiplicity.
    """
    terms = [n] + [n // q for q in prime_factors(n)]
    vals = {}
    for d in set(terms):
        t, b = tor_and_b1(p, d)
        if b:
            raise InfiniteFamily(f"b_1(L_{d}) = {b} > 0")
        vals[d] = t
    num = vals[n] - sum(vals[n // q] for q in prime_factors(n))
    return max(0, -((-num) // n))


# ----------------------------------------------------------------------
# structure map g -> (eps(g), mu^-eps(g) g)

@dataclass(frozen=True)
class StructureMap:
    n: int
    eps: tuple
    h: tuple  # per generator, SNF coordinates of the torsion part
    H: FinAbT = field(compare=False, repr=False)

    def tau(self, w, power: int = 1):
        """``tau^power`` on a torsion coordinate vector (tau = t^-1)."""
        k = len(self.H.invariant_factors)
        full = tuple(w) + (0,) * self.H.free_rank
        return self.H.act(full, -power)[:k]

    def mul(self, a, b):
        (j, h), (j2, h2) = a, b
        th = self.tau(h, j2)
        return (j + j2, tuple((x + y) % d for x, y, d in zip(th, h2, self.H.invariant_factors)))

    def inv(self, a):
        j, h = a
        th = self.tau(h, -j)
        return (-j, tuple((-x) % d for x, d in zip(th, self.H.invariant_factors)))

    def image(self, w: Word):
        k = len(self.H.invariant_factors)
        acc = (0, (0,) * k)
        for g, e in w.letters:
            x = (self.eps[g], self.h[g])
            if e < 0:
                x = self.inv(x)
            for _ in range(abs(e)):
                acc = self.mul(acc, x)
        return acc

    def is_trivial(self, w: Word) -> bool:
        j, h = self.image(w)
        return j % self.n == 0 and not any(h)


def structure_map(p: KnotPresentation, n: int) -> StructureMap:
    H = branched_homology(p, n)
    _, cols, mf = module_presentation(p)
    k = len(H.invariant_factors)
    eps = p.epsilon
    hs = []
    for g in range(p.num_generators):
        if g == mf.m:
            hs.append((0,) * k)
            continue
        c = cols.index(g)
        hs.append(tuple(H.coords(c, -eps[g])[:k]))
    S = StructureMap(n, tuple(eps), tuple(hs), H)
    if H.free_rank == 0:
        for r in p.relators:
            if not S.is_trivial(r):
                raise RelatorViolation(f"relator {r} does not vanish in Z/n x| H")
    return S


# ----------------------------------------------------------------------
# construction

ZChoice = Union[str, int]


def field_order(H: FinAbT, n: int) -> int:
    return _lcm(2 * n, H.exponent)


def z_exponent(n: int, z_choice: ZChoice, N: int) -> int:
    """Exponent ``e`` with ``z = zeta_N^e``.

    ``"canonical"``: ``exp(pi i / n)`` for even n and 1 for odd n.
    An integer ``k`` selects ``zeta_2n^(k0 + 2k)`` with ``k0 = 1`` for even n and 0 for odd n.
    """
    k0 = 1 if n % 2 == 0 else 0
    k = 0 if z_choice in ("canonical", "Canonical", None) else int(z_choice)
    return ((k0 + 2 * k) * (N // (2 * n))) % N


def _chi_value(chi: Character, w, N: int) -> int:
    """Exponent e with chi(w) = zeta_N^e."""
    return sum(a * x * (N // d) for a, x, d in zip(chi.exponents, w, chi.moduli)) % N


def _perm_power(n: int, e: int, z: CycNum, N: int):
    """``P_z^e`` with ``P_z e_k = z e_(k+1)``."""
    zero = CycNum.zero(N)
    ze = z ** e
    rows = [[zero] * n for _ in range(n)]
    for k in range(n):
        rows[(k + e) % n][k] = ze
    return rows


def metabelian_images(S: StructureMap, chi: Character, z_exp: int, N: int, n: int) -> tuple:
    z = CycNum.root(N, z_exp)
    imgs = []
    for g in range(len(S.eps)):
        e, h = S.eps[g], S.h[g]
        diag = []
        for i in range(n):
            diag.append(CycNum.root(N, _chi_value(chi, S.tau(h, i), N)))
        P = _perm_power(n, e, z, N)
        imgs.append(as_object_array([[P[r][c] * diag[c] for c in range(n)] for r in range(n)]))
    return tuple(imgs)


def build_rep(p: KnotPresentation, n: int, chi: Character, z_choice: ZChoice = "canonical", *, beta: bool = False) -> Representation:
    """The representation alpha_(n, chi, z), exactly over Q(zeta_N).

    With ``beta=True`` the scalar ``z`` is replaced by 1, giving the GL(n)
    representation beta_(n, chi).
    """
    S = structure_map(p, n)
    H = S.H
    if H.free_rank:
        raise InfiniteFamily(f"b_1(L_{n}) > 0")
    if tuple(chi.moduli) != tuple(H.invariant_factors):
        raise ValueError("character does not live on H_1(L_n)")
    N = field_order(H, n)
    ze = 0 if beta else z_exponent(n, z_choice, N)
    imgs = metabelian_images(S, chi, ze, N, n)
    prov = {
        "kind": "Beta" if beta else "Metabelian",
        "chi": list(chi.exponents),
        "moduli": list(chi.moduli),
        "n": n,
        "z": "1" if beta else (z_choice if isinstance(z_choice, str) else int(z_choice)),
        "z_exponent": ze,
    }
    rep = Representation(n, imgs, Backend.EXACT, N, prov)
    if not rep.satisfies(p):
        raise RelatorViolation("constructed representation violates a relator")
    return rep


def beta_rep(p: KnotPresentation, n: int, chi: Character) -> Representation:
    return build_rep(p, n, chi, beta=True)


def regular_rep(p: KnotPresentation, n: int) -> Representation:
    """alpha_n: the permutation representation of pi -> Z -> Z/n."""
    H = branched_homology(p, n)
    triv = Character((0,) * len(H.invariant_factors), tuple(H.invariant_factors), 1, H)
    if H.free_rank:
        # the regular representation only needs eps; build it directly
        N = 2 * n
        imgs = tuple(as_object_array(_perm_power(n, e, CycNum.one(N), N)) for e in p.epsilon)
        return Representation(n, imgs, Backend.EXACT, N, {"kind": "Regular", "n": n})
    return build_rep(p, n, triv, beta=True)


# ----------------------------------------------------------------------
# checks

def commutant_dimension(rep: Representation) -> int:
    """dim {M : M rho(x) = rho(x) M for every generator}."""
    n = rep.n
    blocks = []
    if rep.exact:
        zero = CycNum.zero(rep.N)
        for A in rep.images:
            # (M A - A M)_{ij} = sum_k M_ik A_kj - A_ik M_kj ; unknown index (i,k) -> i*n+k
            for i in range(n):
                for j in range(n):
                    row = [zero] * (n * n)
                    for k in range(n):
                        row[i * n + k] = row[i * n + k] + A[k, j]
                        row[k * n + j] = row[k * n + j] - A[i, k]
                    blocks.append(row)
        return n * n - exact_rank(blocks)
    I = np.eye(n)
    for A in rep.images:
        blocks.append(np.kron(I, A.T) - np.kron(A, I))
    return n * n - float_rank(np.vstack(blocks))


def is_irreducible(rep: Representation) -> bool:
    """Schur test: the commutant is one-dimensional."""
    dim = commutant_dimension(rep)
    irreducible = dim == 1
    prov = rep.provenance or {}
    if prov.get("kind") == "Metabelian" and "moduli" in prov:
        n = prov.get("n", rep.n)
        # cross-check against the order of the character
        if irreducible and rep.n != n:
            raise AssertionError("provenance rank mismatch")
    return irreducible


def character_of(rep: Representation, w: Word):
    return rep.trace(w)


def is_unitary(rep: Representation) -> bool:
    if not rep.exact:
        return all(np.allclose(A @ A.conj().T, np.eye(rep.n), atol=1e-9) for A in rep.images)
    for A in rep.images:
        Ah = as_object_array([[x.conj() for x in row] for row in A.T])
        P = A @ Ah
        for i in range(rep.n):
            for j in range(rep.n):
                if P[i, j] != (1 if i == j else 0):
                    return False
    return True


def has_unit_determinant(rep: Representation) -> bool:
    if rep.exact:
        return all(d == 1 for d in rep.determinants())
    return all(abs(d - 1) < 1e-9 for d in rep.determinants())


def meridian_is_regular(rep: Representation, p: KnotPresentation) -> bool:
    """alpha(mu) has n distinct eigenvalues."""
    M = rep(p.meridian)
    if rep.exact:
        return has_distinct_eigenvalues(M)
    ev = np.linalg.eigvals(M)
    gaps = [abs(a - b) for i, a in enumerate(ev) for b in ev[i + 1:]]
    return min(gaps, default=1.0) > 1e-6


def metabelian_reps(p: KnotPresentation, n: int, z_choice: ZChoice = "canonical") -> list[tuple[Character, Representation]]:
    """One representation per conjugacy class of irreducible metabelian reps."""
    H = branched_homology(p, n)
    if H.free_rank:
        raise InfiniteFamily(f"b_1(L_{n}) = {H.free_rank} > 0")
    return [(ch, build_rep(p, n, ch, z_choice)) for ch in orbit_representatives(H, order=n)]
