"""Exact arithmetic in cyclotomic fields Q(zeta_N).

An element is stored as an integer numerator vector of length phi(N) in the
power basis 1, z, ..., z^{phi(N)-1} together with a positive common
denominator.  The pair is kept gcd-reduced, so equality is plain tuple
equality.  Elements of different fields are added or multiplied inside the
field of the lcm of their orders.
"""
from __future__ import annotations

import cmath
from fractions import Fraction
from functools import lru_cache
from math import gcd


def _lcm(a, b):
    return a * b // gcd(a, b)


@lru_cache(maxsize=None)
def cyclotomic_coeffs(n: int) -> tuple:
    """Coefficients of Phi_n, lowest degree first."""
    if n < 1:
        raise ValueError("n must be positive")
    num = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d == 0:
            num = _divide_monic(num, list(cyclotomic_coeffs(d)))
    return tuple(num)


def _divide_monic(a, b):
    a = list(a)
    q = [0] * (len(a) - len(b) + 1)
    for i in range(len(a) - len(b), -1, -1):
        f = a[i + len(b) - 1]
        q[i] = f
        if f:
            for j, bj in enumerate(b):
                a[i + j] -= f * bj
    assert not any(a[: len(b) - 1]), "cyclotomic division not exact"
    return q


class _Field:
    """Per-N tables: reductions of z^k for 0 <= k < 2*phi and all N roots."""

    __slots__ = ("N", "phi", "reduce_table", "roots", "zero", "one")

    def __init__(self, N):
        self.N = N
        phi_poly = cyclotomic_coeffs(N)
        self.phi = phi = len(phi_poly) - 1
        tbl = []
        cur = [0] * phi
        cur[0] = 1
        for _k in range(max(2 * phi - 1, N)):
            tbl.append(tuple(cur))
            # multiply by z and reduce by the monic Phi_N
            top = cur[-1]
            cur = [0] + cur[:-1]
            if top:
                cur = [cur[i] - top * phi_poly[i] for i in range(phi)]
        self.reduce_table = tbl
        self.roots = tbl[:N]
        self.zero = (0,) * phi
        self.one = tbl[0]

    def reduce(self, vec):
        """Reduce an integer vector of any length modulo Phi_N."""
        phi = self.phi
        if len(vec) <= phi:
            return tuple(vec) + (0,) * (phi - len(vec))
        out = list(vec[:phi])
        tbl = self.reduce_table
        for k in range(phi, len(vec)):
            v = vec[k]
            if v:
                row = tbl[k] if k < len(tbl) else tbl[k % self.N]
                for i in range(phi):
                    if row[i]:
                        out[i] += v * row[i]
        return tuple(out)


@lru_cache(maxsize=None)
def field(N: int) -> _Field:
    return _Field(N)


def _norm(num, den):
    g = gcd(*num, den) if num else den
    if den < 0:
        g = -g
    if g != 1:
        num = tuple(x // g for x in num)
        den //= g
    return num, den


class CycNum:
    """Element of Q(zeta_N)."""

    __slots__ = ("N", "num", "den")

    def __init__(self, N: int, num, den: int = 1, _normalized=False):
        F = field(N)
        if not _normalized:
            num = F.reduce([int(x) for x in num])
            if not any(num):
                den = 1
            else:
                num, den = _norm(num, int(den))
        self.N = N
        self.num = num
        self.den = den

    # constructors -----------------------------------------------------
    @classmethod
    def from_int(cls, N, a):
        F = field(N)
        return cls(N, (int(a),) + (0,) * (F.phi - 1), 1, _normalized=True) if a else cls.zero(N)

    @classmethod
    def from_fraction(cls, N, q):
        q = Fraction(q)
        F = field(N)
        if q == 0:
            return cls.zero(N)
        return cls(N, (q.numerator,) + (0,) * (F.phi - 1), q.denominator, _normalized=True)

    @classmethod
    def zero(cls, N):
        return cls(N, field(N).zero, 1, _normalized=True)

    @classmethod
    def one(cls, N):
        return cls(N, field(N).one, 1, _normalized=True)

    @classmethod
    def root(cls, N, k=1):
        """``zeta_N ** k``."""
        return cls(N, field(N).roots[k % N], 1, _normalized=True)

    @classmethod
    def from_coeffs(cls, N, coeffs):
        """Rational coefficients in the power basis (length at most phi(N))."""
        fr = [Fraction(c) for c in coeffs]
        den = 1
        for f in fr:
            den = _lcm(den, f.denominator)
        return cls(N, [int(f * den) for f in fr], den)

    # helpers ----------------------------------------------------------
    @property
    def coeffs(self):
        return tuple(Fraction(x, self.den) for x in self.num)

    def is_zero(self):
        return not any(self.num)

    def is_rational(self):
        return not any(self.num[1:])

    def embed(self, L):
        """Same element viewed in Q(zeta_L); requires N | L."""
        if L == self.N:
            return self
        if L % self.N:
            raise ValueError(f"cannot embed Q(zeta_{self.N}) into Q(zeta_{L})")
        step = L // self.N
        F = field(L)
        vec = [0] * (step * (len(self.num) - 1) + 1)
        for k, v in enumerate(self.num):
            vec[k * step] = v
        return CycNum(L, F.reduce(vec), self.den) if any(self.num) else CycNum.zero(L)

    def _common(self, other):
        if isinstance(other, CycNum):
            if other.N == self.N:
                return self, other
            L = _lcm(self.N, other.N)
            return self.embed(L), other.embed(L)
        if isinstance(other, int):
            return self, CycNum.from_int(self.N, other)
        if isinstance(other, Fraction):
            return self, CycNum.from_fraction(self.N, other)
        return NotImplemented, NotImplemented

    # arithmetic -------------------------------------------------------
    def __add__(self, other):
        a, b = self._common(other)
        if a is NotImplemented:
            return NotImplemented
        if b.is_zero():
            return a
        if a.is_zero():
            return b
        if a.den == b.den:
            num = tuple(x + y for x, y in zip(a.num, b.num))
            den = a.den
        else:
            num = tuple(x * b.den + y * a.den for x, y in zip(a.num, b.num))
            den = a.den * b.den
        if not any(num):
            return CycNum.zero(a.N)
        num, den = _norm(num, den)
        return CycNum(a.N, num, den, _normalized=True)

    __radd__ = __add__

    def __neg__(self):
        return CycNum(self.N, tuple(-x for x in self.num), self.den, _normalized=True)

    def __sub__(self, other):
        a, b = self._common(other)
        if a is NotImplemented:
            return NotImplemented
        return a + (-b)

    def __rsub__(self, other):
        a, b = self._common(other)
        if a is NotImplemented:
            return NotImplemented
        return b + (-a)

    def __mul__(self, other):
        if isinstance(other, int):
            if other == 0:
                return CycNum.zero(self.N)
            num, den = _norm(tuple(x * other for x in self.num), self.den)
            return CycNum(self.N, num, den, _normalized=True)
        a, b = self._common(other)
        if a is NotImplemented:
            return NotImplemented
        if a.is_zero() or b.is_zero():
            return CycNum.zero(a.N)
        F = field(a.N)
        an = a.num
        bn = b.num
        if not any(bn[1:]):
            prod = tuple(x * bn[0] for x in an)
        elif not any(an[1:]):
            prod = tuple(x * an[0] for x in bn)
        else:
            acc = [0] * (2 * F.phi - 1)
            for i, x in enumerate(an):
                if x:
                    for j, y in enumerate(bn):
                        if y:
                            acc[i + j] += x * y
            prod = F.reduce(acc)
        if not any(prod):
            return CycNum.zero(a.N)
        num, den = _norm(prod, a.den * b.den)
        return CycNum(a.N, num, den, _normalized=True)

    __rmul__ = __mul__

    def inverse(self):
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in a cyclotomic field")
        N = self.N
        F = field(N)
        if not any(self.num[1:]):
            return CycNum.from_fraction(N, Fraction(self.den, self.num[0]))
        # extended Euclid: find s with s*a = 1 mod Phi_N, over Q
        a = [Fraction(x) for x in self.num]
        m = [Fraction(x) for x in cyclotomic_coeffs(N)]
        r0, r1 = m, _trim(a)
        s0, s1 = [Fraction(0)], [Fraction(1)]
        while len(r1) > 1 or r1[0] == 0:
            q, r = _pdivmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, _psub(s0, _pmul(q, s1))
        c = r1[0]
        s = [x / c for x in s1]
        # s * a == 1 (mod Phi); the true inverse is s * den
        den = 1
        for f in s:
            den = _lcm(den, f.denominator)
        vec = [int(f * den) * self.den for f in s]
        return CycNum(N, F.reduce(vec) if len(vec) > F.phi else vec, den)

    def __truediv__(self, other):
        if isinstance(other, int):
            if other == 0:
                raise ZeroDivisionError
            num, den = _norm(self.num, self.den * other)
            return CycNum(self.N, num, den, _normalized=True)
        a, b = self._common(other)
        if a is NotImplemented:
            return NotImplemented
        return a * b.inverse()

    def __rtruediv__(self, other):
        a, b = self._common(other)
        if a is NotImplemented:
            return NotImplemented
        return b * a.inverse()

    def __pow__(self, e):
        if e < 0:
            return self.inverse() ** (-e)
        out = CycNum.one(self.N)
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def conj(self):
        """Complex conjugate (z -> z^{-1})."""
        N = self.N
        F = field(N)
        vec = [0] * F.phi
        vec = list(vec)
        for k, v in enumerate(self.num):
            if v:
                row = F.roots[(-k) % N]
                for i in range(F.phi):
                    if row[i]:
                        vec[i] += v * row[i]
        return CycNum(N, tuple(vec), self.den)

    # comparison -------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, CycNum):
            if other.N != self.N:
                a, b = self._common(other)
                return a.num == b.num and a.den == b.den
            return self.num == other.num and self.den == other.den
        if isinstance(other, (int, Fraction)):
            if not self.is_rational():
                return False
            return Fraction(self.num[0], self.den) == other
        return NotImplemented

    def __hash__(self):
        if self.is_rational():
            return hash(Fraction(self.num[0], self.den))
        return hash((self.N, self.num, self.den))

    def __bool__(self):
        return not self.is_zero()

    # conversion -------------------------------------------------------
    def __complex__(self):
        N = self.N
        s = 0j
        for k, v in enumerate(self.num):
            if v:
                s += v * cmath.exp(2j * cmath.pi * k / N)
        return s / self.den

    def to_complex(self):
        return complex(self)

    def to_json(self):
        return {"N": self.N, "coeffs": [_frac_str(c) for c in self.coeffs]}

    @classmethod
    def from_json(cls, obj):
        return cls.from_coeffs(int(obj["N"]), [Fraction(s) for s in obj["coeffs"]])

    def __repr__(self):
        terms = []
        for k, c in enumerate(self.coeffs):
            if c:
                terms.append(f"{c}" if k == 0 else f"{c}*z^{k}")
        body = " + ".join(terms) if terms else "0"
        return f"CycNum[{self.N}]({body})"

    def __str__(self):
        """Plain form; ``zN`` stands for exp(2 pi i / N)."""
        terms = []
        for k, c in enumerate(self.coeffs):
            if not c:
                continue
            if k == 0:
                terms.append(str(c))
            else:
                mono = f"z{self.N}" + (f"^{k}" if k > 1 else "")
                terms.append(mono if c == 1 else f"-{mono}" if c == -1 else f"{c}*{mono}")
        if not terms:
            return "0"
        out = terms[0]
        for s in terms[1:]:
            out += " - " + s[1:] if s.startswith("-") else " + " + s
        return out


def _frac_str(f):
    return f"{f.numerator}/{f.denominator}"


def _trim(p):
    p = list(p)
    while len(p) > 1 and p[-1] == 0:
        p.pop()
    return p


def _pmul(a, b):
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _trim(out)


def _psub(a, b):
    n = max(len(a), len(b))
    a = list(a) + [Fraction(0)] * (n - len(a))
    b = list(b) + [Fraction(0)] * (n - len(b))
    return _trim([x - y for x, y in zip(a, b)])


def _pdivmod(a, b):
    a = list(a)
    b = _trim(b)
    if len(a) < len(b):
        return [Fraction(0)], _trim(a)
    q = [Fraction(0)] * (len(a) - len(b) + 1)
    lb = b[-1]
    for i in range(len(a) - len(b), -1, -1):
        f = a[i + len(b) - 1] / lb
        q[i] = f
        if f:
            for j, bj in enumerate(b):
                a[i + j] -= f * bj
    return _trim(q), _trim(a[: len(b) - 1] or [Fraction(0)])


def euler_phi(n: int) -> int:
    return len(cyclotomic_coeffs(n)) - 1
