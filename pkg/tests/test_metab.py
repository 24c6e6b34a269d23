import numpy as np
import pytest

from metarep.alexmod import branched_homology
from metarep.errors import INFINITE, InfiniteFamily, is_infinite
from metarep.knotio import Word, torus_knot
from metarep.metab import (
    build_rep,
    character_action,
    character_of,
    commutant_dimension,
    conjugate_classes_equal,
    count_classes,
    count_classes_bruteforce,
    divisors,
    enumerate_characters,
    has_unit_determinant,
    is_irreducible,
    is_unitary,
    make_character,
    meridian_is_regular,
    metabelian_reps,
    mobius,
    orbit_representatives,
    prime_factors,
    rn_lower_bound,
    structure_map,
)
from metarep.twisted import random_words

from conftest import knot

TABLE1 = [1, 2, 5, 10, 24, 50, 120, 270, 640, 1500, 3600, 8610, 20880, 50700, 124024, 304290, 750120, 1854400, 4600200, 11440548, 28527320]


def test_number_theory():
    assert divisors(12) == [1, 2, 3, 4, 6, 12]
    assert prime_factors(12) == [2, 2, 3]
    assert [mobius(n) for n in range(1, 11)] == [1, -1, -1, 0, -1, 1, -1, 0, 0, 1]


# characters -------------------------------------------------------------------

def test_enumeration_examples():
    H = branched_homology(knot("4_1"), 2)
    chars = list(enumerate_characters(H, 2))
    assert len(chars) == 5
    assert sorted(c.order for c, _ in chars) == [1, 2, 2, 2, 2]
    assert len(orbit_representatives(H, order=2)) == 2

    Hu = branched_homology(knot("unknot"), 4)
    assert [c.is_trivial() for c, _ in enumerate_characters(Hu)] == [True]

    H3 = branched_homology(knot("3_1"), 3)
    assert list(H3.invariant_factors) == [2, 2]
    chars = list(enumerate_characters(H3))
    assert sorted(c.order for c, _ in chars) == [1, 3, 3, 3]
    assert len(orbit_representatives(H3, order=3)) == 1


def test_infinite_enumeration():
    H = branched_homology(knot("3_1"), 6)
    with pytest.raises(InfiniteFamily):
        list(enumerate_characters(H))


def test_conjugacy():
    H = branched_homology(knot("4_1"), 2)
    a, b = orbit_representatives(H, order=2)
    ta = make_character(H, character_action(H, a.exponents))
    assert conjugate_classes_equal(a, ta)
    assert conjugate_classes_equal(a, a)
    assert not conjugate_classes_equal(a, b)


@pytest.mark.parametrize("name", ["3_1", "4_1", "5_2", "6_1", "10_153"])
def test_order_equals_orbit_size(name):
    p = knot(name)
    for n in range(1, 6):
        H = branched_homology(p, n)
        if H.free_rank or H.torsion_order > 5000:
            continue
        for ch, size in enumerate_characters(H):
            assert n % ch.order == 0
            # order n <=> orbit size n; the order is the least l with t^l chi = chi
            assert character_action(H, ch.exponents, ch.order) == ch.exponents


# counting -------------------------------------------------------------------------

def test_table1_prefix():
    p = knot("4_1")
    assert [count_classes(p, n) for n in range(1, 13)] == TABLE1[:12]
    assert count_classes(p, 21) == 28527320


def test_torus_counts():
    t35 = torus_knot(3, 5)
    assert count_classes(t35, 3) == 8 and count_classes(t35, 5) == 16
    k = knot("10_153")
    assert count_classes(k, 3) == 16 and count_classes(k, 5) == 24


def test_trefoil_pattern():
    p = knot("3_1")
    vals = [count_classes(p, n) for n in range(1, 13)]
    nonzero = [n for n, v in zip(range(1, 13), vals) if n > 1 and (is_infinite(v) or v)]
    assert nonzero == [2, 3, 6]
    assert vals[5] is INFINITE


@pytest.mark.parametrize("name", ["unknot", "3_1", "4_1", "5_2"])
def test_counting_oracle(name):
    p = knot(name)
    for n in range(1, 7):
        if branched_homology(p, n).free_rank:
            continue
        assert count_classes(p, n) == count_classes_bruteforce(p, n)


def test_unknot_counts():
    p = knot("unknot")
    assert [count_classes(p, n) for n in range(1, 6)] == [1, 0, 0, 0, 0]
    assert all(rn_lower_bound(p, n) == 0 for n in range(2, 8))


def test_lower_bound():
    p = knot("4_1")
    for n in range(1, 22):
        lb, c = rn_lower_bound(p, n), count_classes(p, n)
        assert lb <= c
        if len(prime_factors(n)) == 1 and prime_factors(n)[0] == n:
            assert lb == c
    with pytest.raises(InfiniteFamily):
        rn_lower_bound(knot("3_1"), 6)


# structure map ------------------------------------------------------------------

def test_structure_map():
    p = knot("3_1")
    S = structure_map(p, 2)
    m = p.meridian_generator
    assert (S.eps[m], S.h[m]) == (1, (0,))
    others = [g for g in range(p.num_generators) if g != m]
    assert all(S.eps[g] == 1 and S.h[g] != (0,) for g in others)
    for r in p.relators:
        assert S.is_trivial(r)


# construction ----------------------------------------------------------------------

CASES = [("4_1", n) for n in (1, 2, 3, 4)] + [("3_1", n) for n in (2, 3)] + [("torus:3,5", 3), ("10_153", 3)]


@pytest.mark.parametrize("name,n", CASES)
def test_construction_soundness(name, n):
    p = knot(name)
    reps = metabelian_reps(p, n)
    assert len(reps) == count_classes(p, n)
    for chi, rep in reps:
        assert rep.exact and rep.satisfies(p)
        assert has_unit_determinant(rep)
        assert is_unitary(rep)
        assert meridian_is_regular(rep, p)
        assert commutant_dimension(rep) == 1 and is_irreducible(rep)


def test_longitude_commutes_and_is_trivial_for_fibered_genus_one():
    # 3_1 and 4_1 are fibered of genus one: alpha(lambda) = I
    for name, n in [("3_1", 2), ("3_1", 3), ("4_1", 2), ("4_1", 3)]:
        p = knot(name)
        for _, rep in metabelian_reps(p, n):
            assert character_of(rep, p.longitude) == n
            L = rep(p.longitude)
            assert all((L[i, j] == (1 if i == j else 0)) for i in range(n) for j in range(n))


def test_longitude_commutes_with_meridian():
    for name, n in [("5_2", 3), ("torus:3,5", 3), ("6_1", 3)]:
        p = knot(name)
        for _, rep in metabelian_reps(p, n):
            M, L = rep(p.meridian), rep(p.longitude)
            assert ((M @ L) == (L @ M)).all()


def test_lower_order_characters_are_reducible():
    p = knot("4_1")
    H = branched_homology(p, 4)
    low = [c for c, size in enumerate_characters(H) if size < 4]
    assert low
    for chi in low:
        assert not is_irreducible(build_rep(p, 4, chi))


def test_examples():
    p = knot("4_1")
    H1 = branched_homology(p, 1)
    triv = make_character(H1, ())
    rep = build_rep(p, 1, triv)
    assert all(A[0, 0] == 1 for A in rep.images)

    for chi, rep in metabelian_reps(p, 2):
        M = rep(p.meridian)
        assert M[0, 0] == 0 and M[1, 1] == 0
        z = M[1, 0]
        assert M[0, 1] == z and z * z == -1
        assert character_of(rep, p.meridian) == 0
        assert character_of(rep, Word()) == 2

    q = knot("3_1")
    (chi, rep), = metabelian_reps(q, 3)
    ev = np.linalg.eigvals(rep.to_float()(q.meridian))
    assert min(abs(a - b) for i, a in enumerate(ev) for b in ev[i + 1:]) > 0.5


@pytest.mark.parametrize("name,n", [("4_1", 2), ("4_1", 3), ("3_1", 3), ("5_2", 3)])
def test_z_independence(name, n):
    p = knot(name)
    words = random_words(p.num_generators, 100, seed=11)
    for chi, rep in metabelian_reps(p, n):
        other = build_rep(p, n, chi, 1)
        assert other.satisfies(p) and has_unit_determinant(other)
        assert all(rep.trace(w) == other.trace(w) for w in words)


def test_trivial_rep_reducible():
    p = knot("4_1")
    from metarep.representation import float_rep

    triv = float_rep([np.eye(2)] * p.num_generators)
    assert not is_irreducible(triv)
