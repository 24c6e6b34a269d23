import json
from pathlib import Path

import numpy as np
import pytest
from hypothesis import given, strategies as st

from metarep.alexmod import alexander_poly
from metarep.errors import (
    InvalidPD,
    InvalidPresentation,
    MultiComponentLink,
    NotCoprime,
    ParseError,
    UnknownKnot,
)
from metarep.knotio import (
    FreeGroupRingElt,
    KnotPresentation,
    Source,
    Word,
    braid_to_pd,
    fox_derivative,
    fox_eval,
    knot_from_spec,
    load_table,
    parse_braid,
    parse_braid_tokens,
    parse_pd,
    parse_pd_string,
    table_names,
    torus_knot,
    unknot,
)
from metarep.laurent import LaurentPoly
from metarep.snf import cokernel

DATA = Path(__file__).parent / "data" / "knotinfo_alexander.txt"

letters = st.lists(st.tuples(st.integers(0, 2), st.sampled_from([-2, -1, 1, 2])), max_size=8)


def W(text):
    return Word.parse(text)


# words -------------------------------------------------------------------

def test_free_reduction():
    assert Word(((0, 1), (0, -1))).is_identity()
    assert Word(((0, 2), (1, 1), (1, -1), (0, 1))) == Word.gen(0, 3)
    assert W("x0 x1^-1") * W("x1 x0^-1") == Word.identity()


@given(letters, letters)
def test_group_laws(a, b):
    u, v = Word(tuple(a)), Word(tuple(b))
    assert (u * v).inverse() == v.inverse() * u.inverse()
    assert (u * u.inverse()).is_identity()
    assert Word.parse(str(u)) == u
    assert Word.from_list(u.to_list()) == u


def test_parse_errors():
    with pytest.raises(ParseError):
        W("y0")


# Fox calculus -------------------------------------------------------------

def test_fox_examples():
    assert fox_derivative(W("x0 x1"), 0) == FreeGroupRingElt({Word(): 1})
    assert fox_derivative(W("x0^-1"), 0) == FreeGroupRingElt({W("x0^-1"): -1})
    assert fox_derivative(W("x0 x1 x0^-1"), 0) == FreeGroupRingElt({Word(): 1, W("x0 x1 x0^-1"): -1})


def _random_gl2(rng):
    while True:
        A = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
        if abs(np.linalg.det(A)) > 0.3:
            return A


@given(letters, st.integers(0, 10**6))
def test_fundamental_identity(a, seed):
    rng = np.random.default_rng(seed)
    imgs = [_random_gl2(rng) for _ in range(3)]
    invs = [np.linalg.inv(A) for A in imgs]
    I = np.eye(2, dtype=complex)
    w = Word(tuple(a))
    value, der = fox_eval(w, imgs, invs, I)

    def image(u):
        P = I.copy()
        for g, e in u.letters:
            M = imgs[g] if e > 0 else invs[g]
            for _ in range(abs(e)):
                P = P @ M
        return P

    assert np.allclose(value, image(w))
    total = sum((sum(der[k].values()) @ (imgs[k] - I) for k in der), np.zeros((2, 2), dtype=complex))
    assert np.allclose(total, image(w) - I, atol=1e-8)
    for k in range(3):
        ref = fox_derivative(w, k).evaluate(image, I)
        got = sum(der[k].values()) if k in der else np.zeros((2, 2))
        assert np.allclose(ref, got, atol=1e-8)


# braids ---------------------------------------------------------------------

def test_braid_tokens():
    assert parse_braid_tokens("s1 -s2 S1 3 -4") == [1, -2, -1, 3, -4]
    with pytest.raises(ParseError):
        parse_braid_tokens("s1 q2")


def test_braid_examples():
    tref = parse_braid("s1 s1 s1", 2)
    assert tref.meridian.degree(tref.epsilon) == 1
    assert alexander_poly(tref) == LaurentPoly.from_list([1, -1, 1])
    fig8 = parse_braid("s1 -s2 s1 -s2", 3)
    assert fig8.num_generators == 4 and len(fig8.relators) == 3
    assert alexander_poly(fig8) == LaurentPoly.from_list([1, -3, 1])
    assert alexander_poly(parse_braid("s1", 2)) == LaurentPoly.const(1)


def test_braid_errors():
    with pytest.raises(MultiComponentLink):
        parse_braid("s1 s1", 2)
    with pytest.raises(ParseError):
        parse_braid("s3", 3)


@pytest.mark.parametrize("word,strands", [("s1 s1 s1", 2), ("s1 -s2 s1 -s2", 3), ("s1 s1 s1 s1 s1", 2), ("s1 s1 s1 s2 -s1 s2", 3), ("1 2 3 -1 2 -3 -2", 4)])
def test_braid_and_pd_agree(word, strands):
    a = alexander_poly(parse_braid(word, strands))
    b = alexander_poly(parse_pd(braid_to_pd(word, strands)))
    assert a == b


# PD codes -------------------------------------------------------------------

def test_pd_examples():
    tref = parse_pd(load_table("3_1"))
    assert tref.num_generators == 3 and len(tref.relators) == 2
    k = knot_from_spec("10_153")
    assert k.num_generators == 10 and len(k.relators) == 9
    with pytest.raises(InvalidPD):
        parse_pd([])


def test_pd_string_forms():
    ref = [(1, 5, 2, 4), (3, 1, 4, 6), (5, 3, 6, 2)]
    assert parse_pd_string("[(1,5,2,4),(3,1,4,6),(5,3,6,2)]") == ref
    assert parse_pd_string("PD:[(1,5,2,4),(3,1,4,6),(5,3,6,2)]") == ref
    assert parse_pd_string("PD[X[1,5,2,4], X[3,1,4,6], X[5,3,6,2]]") == ref


def test_pd_errors():
    with pytest.raises(InvalidPD):
        parse_pd([(1, 2, 3, 4)])
    with pytest.raises(InvalidPD):
        parse_pd([(1, 5, 2, 4), (3, 1, 4, 6), (5, 3, 6, 9)])


def test_two_component_pd():
    # Hopf link
    with pytest.raises((MultiComponentLink, InvalidPD)):
        parse_pd([(4, 1, 3, 2), (2, 3, 1, 4)])


def test_mirror_has_same_alexander():
    code = load_table("3_1")
    mirror = [(a, d, c, b) for a, b, c, d in code]
    assert alexander_poly(parse_pd(mirror)) == alexander_poly(parse_pd(code))


# torus knots ----------------------------------------------------------------

def test_torus_presentation():
    p = torus_knot(2, 3)
    assert p.relators == (W("x0^2 x1^-3"),)
    assert p.meridian.degree(p.epsilon) == 1
    assert p.longitude.degree(p.epsilon) == 0
    assert p.source is Source.TORUS
    assert alexander_poly(p) == LaurentPoly.from_list([1, -1, 1])


def test_torus_matches_table():
    assert alexander_poly(torus_knot(3, 5)) == alexander_poly(knot_from_spec("10_124"))
    assert alexander_poly(torus_knot(2, 5)) == alexander_poly(knot_from_spec("5_1"))


def test_torus_errors():
    with pytest.raises(NotCoprime):
        torus_knot(2, 2)


@pytest.mark.parametrize("pq", [(2, 3), (2, 5), (3, 4), (3, 5), (2, 9), (4, 7)])
def test_torus_alexander_formula(pq):
    p, q = pq
    num = (LaurentPoly({p * q: 1, 0: -1}) * LaurentPoly({1: 1, 0: -1}))
    den = LaurentPoly({p: 1, 0: -1}) * LaurentPoly({q: 1, 0: -1})
    assert alexander_poly(torus_knot(p, q)) == num.exact_div(den).normalized()


# table ------------------------------------------------------------------------

def test_table_lookup():
    assert len(load_table("4_1")) == 4
    assert len(load_table("10_124")) == 10
    with pytest.raises(UnknownKnot):
        load_table("99_99")


def _knotinfo():
    out = {}
    for line in DATA.read_text().splitlines():
        if line.startswith("#") or not line.strip():
            continue
        name, *cs = line.split()
        out[name] = LaurentPoly.from_list([int(c) for c in cs])
    return out


def test_whole_table_against_knotinfo():
    ref = _knotinfo()
    names = table_names()
    assert len(names) == 249
    bad = []
    for name in names:
        p = knot_from_spec(name)
        g = p.num_generators
        free, tors = cokernel(p.abelian_matrix, ncols=g)
        assert (free, tors) == (1, [])
        assert len(p.relators) == g - 1
        assert p.longitude.degree(p.epsilon) == 0
        if alexander_poly(p) != ref[name]:
            bad.append(name)
    assert not bad


def test_unknot():
    p = unknot()
    assert alexander_poly(p) == LaurentPoly.const(1)


# presentations ----------------------------------------------------------------

def test_presentation_validation():
    with pytest.raises(InvalidPresentation):
        KnotPresentation(1, (W("x0^2"),), W("x0"))
    with pytest.raises(InvalidPresentation):
        KnotPresentation(2, (W("x0 x1^-1"),), W("x0^2 x1"))
    with pytest.raises(InvalidPresentation):
        KnotPresentation(1, (), W("x3"))
    p = KnotPresentation(1, (), W("x0"), W("1"))
    assert p.epsilon == (1,)


def test_json_roundtrip(tmp_path):
    p = knot_from_spec("5_2")
    q = KnotPresentation.from_json(json.loads(json.dumps(p.to_json())))
    assert q.relators == p.relators and q.meridian == p.meridian and q.longitude == p.longitude
    f = tmp_path / "k.json"
    f.write_text(json.dumps(dict(p.to_json(), source="Manual")))
    r = knot_from_spec(f"manual:{f}")
    assert alexander_poly(r) == alexander_poly(p)


def test_spec_forms():
    assert alexander_poly(knot_from_spec("braid:s1 s1 s1")) == LaurentPoly.from_list([1, -1, 1])
    assert alexander_poly(knot_from_spec("braid:3:1 -2 1 -2")) == LaurentPoly.from_list([1, -3, 1])
    assert alexander_poly(knot_from_spec("pd:[(1,5,2,4),(3,1,4,6),(5,3,6,2)]")) == LaurentPoly.from_list([1, -1, 1])
    assert alexander_poly(knot_from_spec("torus:2,5")) == LaurentPoly.from_list([1, -1, 1, -1, 1])
    with pytest.raises(ParseError):
        knot_from_spec("torus:2")
