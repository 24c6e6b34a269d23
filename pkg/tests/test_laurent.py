import pytest
import sympy
from hypothesis import given, strategies as st

from metarep.laurent import LaurentPoly, cyclotomic_poly, poly_gcd

T = sympy.Symbol("t")

coeff_lists = st.lists(st.integers(-9, 9), min_size=1, max_size=7)
shifts = st.integers(-4, 4)


def lp(cs, s=0):
    return LaurentPoly.from_list(cs, s)


def to_sympy(p):
    return sum(sympy.Integer(int(c)) * T**k for k, c in p.coeffs.items())


@given(coeff_lists, shifts, coeff_lists, shifts)
def test_ring_axioms_against_sympy(a, sa, b, sb):
    p, q = lp(a, sa), lp(b, sb)
    assert sympy.expand(to_sympy(p * q) - to_sympy(p) * to_sympy(q)) == 0
    assert sympy.expand(to_sympy(p + q) - to_sympy(p) - to_sympy(q)) == 0
    assert (p - q) + q == p


@given(coeff_lists, coeff_lists)
def test_gcd_matches_sympy(a, b):
    p, q = lp(a), lp(b)
    if p.is_zero() or q.is_zero():
        return
    g = poly_gcd(p, q)
    ref = sympy.Poly(sympy.gcd(to_sympy(p), to_sympy(q)), T)
    ref_l = LaurentPoly.from_list([int(c) for c in reversed(ref.all_coeffs())]).normalized()
    assert g == ref_l


@given(coeff_lists, shifts, coeff_lists)
def test_exact_division_roundtrip(a, s, b):
    p, q = lp(a, s), lp(b)
    if q.is_zero():
        return
    assert (p * q).exact_div(q) == p


def test_exact_division_rejects_remainder():
    with pytest.raises(ArithmeticError):
        lp([1, 1, 1]).exact_div(lp([1, 1]))


def test_normalized_form():
    p = LaurentPoly.from_list([-1, 3, -1], -5)
    n = p.normalized()
    assert n.low == 0 and n.lead() > 0
    assert n == lp([1, -3, 1])


def test_bar_and_palindrome():
    d = lp([1, -3, 1])
    assert d.is_palindromic()
    assert d.bar().normalized() == d
    assert not lp([1, 2]).is_palindromic()


def test_negative_power_only_for_monomials():
    m = LaurentPoly.monomial(3, -1)
    assert m ** -2 == LaurentPoly.monomial(-6, 1)
    with pytest.raises(ValueError):
        LaurentPoly.monomial(3, 2) ** -1
    with pytest.raises(ValueError):
        lp([1, 1]) ** -1


def test_evaluation_and_substitution():
    d = lp([1, -3, 1])
    assert d(1) == -1 and d(-1) == 5
    assert d.substitute_scaled(-1) == lp([1, 3, 1])


@pytest.mark.parametrize("n,expected", [(1, [-1, 1]), (2, [1, 1]), (3, [1, 1, 1]), (4, [1, 0, 1]), (6, [1, -1, 1]), (12, [1, 0, -1, 0, 1])])
def test_cyclotomic(n, expected):
    assert cyclotomic_poly(n) == lp(expected)


def test_cyclotomic_factorization_of_t_n_minus_1():
    for n in range(1, 16):
        prod = LaurentPoly.const(1)
        for d in range(1, n + 1):
            if n % d == 0:
                prod = prod * cyclotomic_poly(d)
        assert prod == LaurentPoly({n: 1, 0: -1})


def test_str():
    assert str(lp([1, -3, 1])) == "t^2 - 3*t + 1"
    assert str(LaurentPoly()) == "0"
