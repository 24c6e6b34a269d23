"""Laurent polynomials in one variable ``t``.

Coefficients are integers by default but any commutative ring element that
supports ``+``, ``-``, ``*`` and ``== 0`` works (the twisted Alexander code
uses cyclotomic coefficients).  Exact division needs either integers or a field.
"""
from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Mapping


def _is_int_like(c):
    if isinstance(c, int) or (isinstance(c, Fraction) and c.denominator == 1):
        return True
    return getattr(c, "is_rational", lambda: False)() and _is_int_like(c.coeffs[0])


def _as_int(c) -> int:
    return int(c) if isinstance(c, (int, Fraction)) else int(c.coeffs[0])


class LaurentPoly:
    __slots__ = ("_c", "_hash")

    def __init__(self, coeffs: Mapping[int, object] | None = None):
        c = {}
        if coeffs:
            for k, v in coeffs.items():
                if not v == 0:
                    c[int(k)] = v
        self._c = c
        self._hash = None

    # construction -----------------------------------------------------
    @classmethod
    def from_list(cls, coeffs, low=0):
        """Coefficients listed from degree ``low`` upwards."""
        return cls({low + i: v for i, v in enumerate(coeffs)})

    @classmethod
    def monomial(cls, deg=1, coeff=1):
        return cls({deg: coeff})

    @classmethod
    def const(cls, c):
        return cls({0: c})

    # inspection -------------------------------------------------------
    @property
    def coeffs(self) -> dict:
        return dict(self._c)

    def is_zero(self):
        return not self._c

    def __bool__(self):
        return bool(self._c)

    @property
    def low(self):
        return min(self._c) if self._c else 0

    @property
    def high(self):
        return max(self._c) if self._c else 0

    def span(self):
        return self.high - self.low if self._c else -1

    def coefficient(self, k):
        return self._c.get(k, 0)

    def to_list(self):
        """Coefficients from ``low`` to ``high``."""
        if not self._c:
            return []
        return [self._c.get(k, 0) for k in range(self.low, self.high + 1)]

    def lead(self):
        return self._c[self.high]

    def is_monomial(self):
        return len(self._c) == 1

    # arithmetic -------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, LaurentPoly):
            return other
        return LaurentPoly.const(other)

    def __add__(self, other):
        other = self._coerce(other)
        c = dict(self._c)
        for k, v in other._c.items():
            c[k] = c[k] + v if k in c else v
        return LaurentPoly(c)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly({k: -v for k, v in self._c.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, LaurentPoly):
            if other == 0:
                return LaurentPoly()
            return LaurentPoly({k: v * other for k, v in self._c.items()})
        c = {}
        for i, a in self._c.items():
            for j, b in other._c.items():
                k = i + j
                c[k] = c[k] + a * b if k in c else a * b
        return LaurentPoly(c)

    def __rmul__(self, other):
        if not isinstance(other, LaurentPoly):
            if other == 0:
                return LaurentPoly()
            return LaurentPoly({k: other * v for k, v in self._c.items()})
        return other * self

    def __pow__(self, e):
        if e < 0:
            if not self.is_monomial():
                raise ValueError("only monomials have Laurent inverses")
            (k, v), = self._c.items()
            if v not in (1, -1):
                raise ValueError("monomial coefficient is not a unit")
            return LaurentPoly({k * e: v ** (-e)})
        out = LaurentPoly.const(1)
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def shift(self, k):
        """Multiply by ``t**k``."""
        return LaurentPoly({d + k: v for d, v in self._c.items()})

    def __eq__(self, other):
        if not isinstance(other, LaurentPoly):
            if other == 0:
                return not self._c
            other = LaurentPoly.const(other)
        return self._c == other._c

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._c.items()))
        return self._hash

    def __call__(self, x):
        """Evaluate at ``x`` (Horner on the polynomial part, then the shift)."""
        if not self._c:
            return 0 * x
        acc = None
        for v in reversed(self.to_list()):
            acc = v if acc is None else acc * x + v
        lo = self.low
        if lo > 0:
            acc = acc * x**lo
        elif lo < 0:
            acc = acc / x ** (-lo) if not isinstance(x, int) else Fraction(acc) / x ** (-lo)
        return acc

    def substitute_scaled(self, c):
        """Return ``p(c * t)``."""
        return LaurentPoly({k: v * c**k if k >= 0 else v / c ** (-k) for k, v in self._c.items()})

    def bar(self):
        """``p(t^{-1})``."""
        return LaurentPoly({-k: v for k, v in self._c.items()})

    def map_coeffs(self, f):
        return LaurentPoly({k: f(v) for k, v in self._c.items()})

    # normal forms -----------------------------------------------------
    def content(self):
        g = 0
        for v in self._c.values():
            g = gcd(g, int(v))
        return g

    def primitive(self):
        c = self.content()
        if c in (0, 1):
            return self
        return LaurentPoly({k: v // c for k, v in self._c.items()})

    def normalized(self):
        """Lowest degree 0 and positive leading coefficient (integer coefficients)."""
        if not self._c:
            return self
        p = self.shift(-self.low)
        if p.lead() < 0:
            p = -p
        return p

    def is_palindromic(self):
        lst = self.to_list()
        return lst == lst[::-1] or lst == [-v for v in lst[::-1]]

    # division ---------------------------------------------------------
    def divmod_poly(self, other):
        """Long division treating both as polynomials after removing low shifts.

        Works over a field, or over the integers when each step divides
        exactly; returns ``(q, r)`` with ``self = q*other + r`` up to the shift
        bookkeeping done by :meth:`exact_div`.
        """
        if other.is_zero():
            raise ZeroDivisionError("division by zero polynomial")
        a = self.to_list()
        b = other.to_list()
        if not a:
            return LaurentPoly(), LaurentPoly()
        q = [0] * max(len(a) - len(b) + 1, 1)
        a = list(a)
        lb = b[-1]
        for i in range(len(a) - len(b), -1, -1):
            top = a[i + len(b) - 1]
            if top == 0:
                continue
            if _is_int_like(top) and _is_int_like(lb):
                top_i, lb_i = _as_int(top), _as_int(lb)
                if top_i % lb_i:
                    raise ArithmeticError("inexact integer division")
                f = top_i // lb_i
            else:
                f = top / lb
            q[i] = f
            for j, bj in enumerate(b):
                a[i + j] = a[i + j] - f * bj
        r = LaurentPoly.from_list(a[: len(b) - 1])
        return LaurentPoly.from_list(q), r

    def exact_div(self, other):
        """Exact quotient in the Laurent ring; raises ``ArithmeticError`` otherwise."""
        other = self._coerce(other)
        if self.is_zero():
            return LaurentPoly()
        a0 = self.shift(-self.low)
        b0 = other.shift(-other.low)
        q, r = a0.divmod_poly(b0)
        if not r.is_zero():
            raise ArithmeticError("polynomial division is not exact")
        return q.shift(self.low - other.low)

    def __floordiv__(self, other):
        return self.exact_div(other)

    def __truediv__(self, other):
        if isinstance(other, LaurentPoly):
            return self.exact_div(other)
        return LaurentPoly({k: v / other for k, v in self._c.items()})

    # display ----------------------------------------------------------
    def __repr__(self):
        return f"LaurentPoly({self})"

    def __str__(self):
        if not self._c:
            return "0"
        parts = []
        for k in sorted(self._c, reverse=True):
            v = self._c[k]
            mono = "" if k == 0 else ("t" if k == 1 else f"t^{k}")
            if mono and v == 1:
                s = mono
            elif mono and v == -1:
                s = "-" + mono
            else:
                vs = str(v)
                if mono and not _is_int_like(v):
                    vs = f"({vs})"
                s = vs + ("*" + mono if mono else "")
            parts.append(s)
        out = parts[0]
        for s in parts[1:]:
            out += " - " + s[1:] if s.startswith("-") else " + " + s
        return out


def poly_gcd(a: LaurentPoly, b: LaurentPoly) -> LaurentPoly:
    """Gcd in Z[t^{+-1}] by the primitive remainder sequence.

    The result is normalized (lowest degree 0, positive leading coefficient).
    """
    if a.is_zero():
        return b.normalized()
    if b.is_zero():
        return a.normalized()
    c = gcd(a.content(), b.content())
    a = a.primitive().shift(-a.low)
    b = b.primitive().shift(-b.low)
    if a.high < b.high:
        a, b = b, a
    while not b.is_zero():
        r = _pseudo_rem(a, b)
        a, b = b, (r.primitive() if not r.is_zero() else r)
    g = a.primitive().shift(-a.low)
    return (g * c).normalized()


def _pseudo_rem(a, b):
    la, lb = a.to_list(), b.to_list()
    while len(la) >= len(lb) and any(la):
        lead_b = lb[-1]
        lead_a = la[-1]
        la = [x * lead_b for x in la]
        off = len(la) - len(lb)
        for j, bj in enumerate(lb):
            la[off + j] -= lead_a * bj
        while la and la[-1] == 0:
            la.pop()
    return LaurentPoly.from_list(la)


def cyclotomic_poly(n: int) -> LaurentPoly:
    """The n-th cyclotomic polynomial with integer coefficients."""
    from .cyclotomic import cyclotomic_coeffs

    return LaurentPoly.from_list(list(cyclotomic_coeffs(n)))
