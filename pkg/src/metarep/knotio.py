"""Knot inputs and group presentations.

Braid words, PD codes, torus-knot parameters and hand-written presentations
all end up as a :class:`KnotPresentation`: generators, relators, a meridian
word and (usually) a longitude word.  The free differential calculus lives
here too.

PD convention: each crossing ``(a, b, c, d)`` lists edge labels counter-
clockwise starting from the incoming under-edge ``a``; the under strand runs
``a -> c``.  Labels increase by one along the knot (mod the edge count).  The
crossing is positive when the over strand runs ``d -> b``.
"""
from __future__ import annotations

import ast
import enum
import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from importlib import resources
from math import gcd
from pathlib import Path
from typing import Iterable, Optional, Sequence

from .errors import (
    InvalidPD,
    InvalidPresentation,
    MultiComponentLink,
    NotCoprime,
    ParseError,
    UnknownKnot,
)
from .laurent import LaurentPoly


# ----------------------------------------------------------------------
# free group words

def _reduce(letters: Iterable[tuple[int, int]]) -> tuple[tuple[int, int], ...]:
    out: list[list[int]] = []
    for g, e in letters:
        g, e = int(g), int(e)
        if e == 0:
            continue
        if out and out[-1][0] == g:
            out[-1][1] += e
            if out[-1][1] == 0:
                out.pop()
        else:
            out.append([g, e])
    return tuple((g, e) for g, e in out)


@dataclass(frozen=True)
class Word:
    """Freely reduced word; each letter is ``(generator, exponent)``."""

    letters: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "letters", _reduce(self.letters))

    @classmethod
    def gen(cls, i: int, e: int = 1) -> "Word":
        return cls(((i, e),))

    @classmethod
    def identity(cls) -> "Word":
        return cls(())

    @classmethod
    def from_list(cls, seq) -> "Word":
        return cls(tuple((int(g), int(e)) for g, e in seq))

    def to_list(self):
        return [[g, e] for g, e in self.letters]

    def __mul__(self, other: "Word") -> "Word":
        return Word(self.letters + other.letters)

    def inverse(self) -> "Word":
        return Word(tuple((g, -e) for g, e in reversed(self.letters)))

    def __pow__(self, k: int) -> "Word":
        if k < 0:
            return self.inverse() ** (-k)
        return Word(self.letters * k)

    def __len__(self):
        return sum(abs(e) for _, e in self.letters)

    def __bool__(self):
        return bool(self.letters)

    def is_identity(self):
        return not self.letters

    def exponent_sum(self, g: int) -> int:
        return sum(e for h, e in self.letters if h == g)

    def max_generator(self) -> int:
        return max((g for g, _ in self.letters), default=-1)

    def degree(self, eps: Sequence[int]) -> int:
        return sum(e * eps[g] for g, e in self.letters)

    def __str__(self):
        if not self.letters:
            return "1"
        return "*".join(f"x{g}" if e == 1 else f"x{g}^{e}" for g, e in self.letters)

    @classmethod
    def parse(cls, text: str) -> "Word":
        """Parse ``"x0 x1^-1 x2^3"`` (separators ``*`` or whitespace; ``1`` is the identity)."""
        text = text.strip()
        if text in ("", "1"):
            return cls()
        letters = []
        for tok in re.split(r"[\s*]+", text):
            m = re.fullmatch(r"x(\d+)(?:\^(-?\d+))?", tok)
            if not m:
                raise ParseError(f"bad word token {tok!r}")
            letters.append((int(m.group(1)), int(m.group(2) or 1)))
        return cls(tuple(letters))


def commutator(a: Word, b: Word) -> Word:
    return a * b * a.inverse() * b.inverse()


class FreeGroupRingElt:
    """Element of Z[F]: a finite sum of words with integer coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        t = {}
        if terms:
            for w, c in dict(terms).items():
                if c:
                    t[w] = t.get(w, 0) + c
                    if t[w] == 0:
                        del t[w]
        self.terms = t

    @classmethod
    def word(cls, w: Word, c: int = 1):
        return cls({w: c})

    def __add__(self, other):
        t = dict(self.terms)
        for w, c in other.terms.items():
            t[w] = t.get(w, 0) + c
            if t[w] == 0:
                del t[w]
        out = FreeGroupRingElt()
        out.terms = t
        return out

    def __neg__(self):
        return FreeGroupRingElt({w: -c for w, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, Word):
            other = FreeGroupRingElt.word(other)
        out = {}
        for w1, c1 in self.terms.items():
            for w2, c2 in other.terms.items():
                w = w1 * w2
                out[w] = out.get(w, 0) + c1 * c2
        return FreeGroupRingElt(out)

    def __rmul__(self, other):
        if isinstance(other, Word):
            return FreeGroupRingElt.word(other) * self
        if isinstance(other, int):
            return FreeGroupRingElt({w: other * c for w, c in self.terms.items()})
        return NotImplemented

    def __eq__(self, other):
        if isinstance(other, FreeGroupRingElt):
            return self.terms == other.terms
        if isinstance(other, dict):
            return self.terms == FreeGroupRingElt(other).terms
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def abelianize(self, eps: Sequence[int]) -> LaurentPoly:
        out = {}
        for w, c in self.terms.items():
            d = w.degree(eps)
            out[d] = out.get(d, 0) + c
        return LaurentPoly(out)

    def evaluate(self, image, identity):
        """Sum of ``c * image(w)``; ``image`` maps a Word to a matrix."""
        acc = identity * 0
        for w, c in self.terms.items():
            acc = acc + c * image(w)
        return acc

    def __repr__(self):
        if not self.terms:
            return "0"
        return " + ".join(f"{c}*[{w}]" for w, c in sorted(self.terms.items(), key=lambda kv: str(kv[0])))


def fox_derivative(w: Word, k: int) -> FreeGroupRingElt:
    """Free derivative d w / d x_k."""
    out: dict[Word, int] = {}
    prefix: list[tuple[int, int]] = []
    for g, e in w.letters:
        if g == k:
            if e > 0:
                for m in range(e):
                    t = Word(tuple(prefix) + ((g, m),))
                    out[t] = out.get(t, 0) + 1
            else:
                for m in range(1, -e + 1):
                    t = Word(tuple(prefix) + ((g, -m),))
                    out[t] = out.get(t, 0) - 1
        prefix.append((g, e))
    return FreeGroupRingElt(out)


def fox_eval(w: Word, images, inverses, identity, eps=None):
    """Evaluate all Fox derivatives of ``w`` under a representation in one pass.

    ``images[g]`` and ``inverses[g]`` are matrices (anything supporting ``@``,
    ``+`` and ``-``).  Returns ``(rho(w), derivs)`` where ``derivs[k]`` maps a
    t-degree to the matrix coefficient of ``rho(dw/dx_k)`` in that degree.
    With ``eps=None`` all degrees are 0.
    """
    P = identity
    deg = 0
    derivs: dict[int, dict[int, object]] = {}
    for g, e in w.letters:
        eg = eps[g] if eps is not None else 0
        slot = derivs.setdefault(g, {})
        if e > 0:
            for _ in range(e):
                slot[deg] = slot[deg] + P if deg in slot else P
                P = P @ images[g]
                deg += eg
        else:
            for _ in range(-e):
                P = P @ inverses[g]
                deg -= eg
                slot[deg] = slot[deg] - P if deg in slot else -P
    return P, derivs


def abelian_fox(w: Word, eps: Sequence[int]) -> dict[int, LaurentPoly]:
    """Abelianized Fox derivatives ``{k: (dw/dx_k)^ab}`` with ``x_k -> t^eps[k]``."""
    deg = 0
    acc: dict[int, dict[int, int]] = {}
    for g, e in w.letters:
        slot = acc.setdefault(g, {})
        if e > 0:
            for _ in range(e):
                slot[deg] = slot.get(deg, 0) + 1
                deg += eps[g]
        else:
            for _ in range(-e):
                deg -= eps[g]
                slot[deg] = slot.get(deg, 0) - 1
    return {k: LaurentPoly(v) for k, v in acc.items()}


# ----------------------------------------------------------------------
# presentations

class Source(enum.Enum):
    BRAID = "Braid"
    PD = "PD"
    TORUS = "Torus"
    MANUAL = "Manual"


def _exact_int_kernel(rows: list[list[int]], ncols: int) -> list[list[int]]:
    """Integer basis (primitive vectors) of the rational kernel of ``rows``."""
    from .linalg import exact_nullspace

    basis = exact_nullspace([[Fraction(x) for x in r] for r in rows], ncols=ncols) if rows else [
        [1 if i == j else 0 for i in range(ncols)] for j in range(ncols)
    ]
    out = []
    for v in basis:
        v = [Fraction(x) for x in v]
        den = 1
        for x in v:
            den = den * x.denominator // gcd(den, x.denominator)
        iv = [int(x * den) for x in v]
        g = 0
        for x in iv:
            g = gcd(g, x)
        out.append([x // g for x in iv])
    return out


@dataclass(frozen=True)
class KnotPresentation:
    """Finite presentation of a knot group with peripheral words."""

    num_generators: int
    relators: tuple[Word, ...]
    meridian: Word
    longitude: Optional[Word] = None
    source: Source = Source.MANUAL
    name: str = ""
    pd: Optional[tuple[tuple[int, int, int, int], ...]] = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "relators", tuple(self.relators))
        if self.num_generators < 1:
            raise InvalidPresentation("a presentation needs at least one generator")
        for w in list(self.relators) + [self.meridian] + ([self.longitude] if self.longitude else []):
            if w.max_generator() >= self.num_generators:
                raise InvalidPresentation(f"word {w} uses an undeclared generator")
        if self.source is not Source.MANUAL and len(self.relators) != self.num_generators - 1:
            raise InvalidPresentation("expected deficiency one")
        self.epsilon  # validates the abelianization
        if self.longitude is not None and self.longitude.degree(self.epsilon) != 0:
            raise InvalidPresentation("longitude is not null-homologous")

    @property
    def num_relators(self) -> int:
        return len(self.relators)

    @property
    def deficiency(self) -> int:
        return self.num_generators - len(self.relators)

    @cached_property
    def abelian_matrix(self) -> list[list[int]]:
        g = self.num_generators
        return [[r.exponent_sum(k) for k in range(g)] for r in self.relators]

    @cached_property
    def epsilon(self) -> tuple[int, ...]:
        """Abelianization degrees of the generators, with the meridian at +1."""
        from .snf import cokernel

        g = self.num_generators
        rows = self.abelian_matrix
        free, tors = cokernel(rows, ncols=g)
        if free != 1 or tors:
            raise InvalidPresentation(f"abelianization is not infinite cyclic (free rank {free}, torsion {tors})")
        ker = _exact_int_kernel(rows, g)
        if len(ker) != 1:
            raise InvalidPresentation("abelianization kernel has unexpected rank")
        eps = ker[0]
        m = self.meridian.degree(eps)
        if m not in (1, -1):
            raise InvalidPresentation("meridian does not map to a generator of H_1")
        return tuple(x * m for x in eps)

    @cached_property
    def meridian_generator(self) -> Optional[int]:
        """Index of the meridian if it is a single positive generator."""
        L = self.meridian.letters
        if len(L) == 1 and L[0][1] == 1:
            return L[0][0]
        return None

    def to_json(self) -> dict:
        d = {
            "num_generators": self.num_generators,
            "relators": [r.to_list() for r in self.relators],
            "meridian": self.meridian.to_list(),
            "source": self.source.value,
            "name": self.name,
        }
        if self.longitude is not None:
            d["longitude"] = self.longitude.to_list()
        return d

    @classmethod
    def from_json(cls, obj: dict) -> "KnotPresentation":
        try:
            lon = obj.get("longitude")
            return cls(
                num_generators=int(obj["num_generators"]),
                relators=tuple(Word.from_list(r) for r in obj["relators"]),
                meridian=Word.from_list(obj["meridian"]),
                longitude=Word.from_list(lon) if lon is not None else None,
                source=Source(obj.get("source", "Manual")),
                name=obj.get("name", ""),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"malformed presentation JSON: {exc}") from exc


# ----------------------------------------------------------------------
# Wirtinger construction

@dataclass(frozen=True)
class _Crossing:
    under_in: int
    over_in: int
    under_out: int
    over_out: int
    sign: int

    def pd(self) -> tuple[int, int, int, int]:
        if self.sign > 0:
            # (a, b, c, d) with the over strand d -> b
            return (self.under_in, self.over_out, self.under_out, self.over_in)
        return (self.under_in, self.over_in, self.under_out, self.over_out)


def _wirtinger(E: int, crossings: Sequence[_Crossing], source: Source, name: str, pd=None) -> KnotPresentation:
    if not crossings:
        return KnotPresentation(1, (), Word.gen(0), Word(), source, name, pd)
    parent = list(range(E + 1))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for c in crossings:
        a, b = find(c.over_in), find(c.over_out)
        if a != b:
            parent[max(a, b)] = min(a, b)
    roots = sorted({find(e) for e in range(1, E + 1)}, key=lambda r: min(e for e in range(1, E + 1) if find(e) == r))
    arc = {r: i for i, r in enumerate(roots)}

    def x(edge):
        return arc[find(edge)]

    rels = []
    for c in crossings[:-1]:
        o, s = x(c.over_in), c.sign
        rels.append(Word(((o, s), (x(c.under_in), 1), (o, -s), (x(c.under_out), -1))))
    by_under = {c.under_in: c for c in crossings}
    W = Word()
    writhe = 0
    for e in range(1, E + 1):
        c = by_under.get(e)
        if c is None:
            continue
        W = Word.gen(x(c.over_in), c.sign) * W
        writhe += c.sign
    lon = W * Word.gen(0, -writhe)
    return KnotPresentation(len(roots), tuple(rels), Word.gen(0), lon, source, name, pd)


def _orient_pd(code) -> tuple[int, list[_Crossing]]:
    if code is None or len(code) == 0:
        raise InvalidPD("empty PD code")
    try:
        tuples = [tuple(int(v) for v in t) for t in code]
    except (TypeError, ValueError) as exc:
        raise InvalidPD(f"PD entries must be integer 4-tuples: {exc}") from exc
    if any(len(t) != 4 for t in tuples):
        raise InvalidPD("every PD crossing needs exactly four labels")
    E = 2 * len(tuples)
    counts: dict[int, int] = {}
    for t in tuples:
        for v in t:
            counts[v] = counts.get(v, 0) + 1
    if set(counts) != set(range(1, E + 1)) or any(c != 2 for c in counts.values()):
        raise InvalidPD("labels must be 1..2c, each used exactly twice")

    def succ(v):
        return v % E + 1

    out = []
    for a, b, c, d in tuples:
        if succ(a) != c:
            if succ(c) == a:
                raise InvalidPD(f"crossing {(a, b, c, d)}: under strand runs against the labelling")
            raise MultiComponentLink(f"crossing {(a, b, c, d)}: under labels are not consecutive")
        d_to_b = succ(d) == b
        b_to_d = succ(b) == d
        if not (d_to_b or b_to_d):
            raise MultiComponentLink(f"crossing {(a, b, c, d)}: over labels are not consecutive")
        if d_to_b and b_to_d:
            # only possible with two edges; pick the direction whose incoming edge differs from a
            d_to_b = d != a
        if d_to_b:
            out.append(_Crossing(a, d, c, b, +1))
        else:
            out.append(_Crossing(a, b, c, d, -1))
    ins = sorted([c.under_in for c in out] + [c.over_in for c in out])
    if ins != list(range(1, E + 1)):
        raise InvalidPD("edge incidence is inconsistent (an edge enters two crossings)")
    return E, out


def parse_pd(code, name: str = "") -> KnotPresentation:
    """Wirtinger presentation from a PD code (list of 4-tuples)."""
    if isinstance(code, str):
        code = parse_pd_string(code)
    E, crossings = _orient_pd(code)
    return _wirtinger(E, crossings, Source.PD, name, tuple(tuple(int(v) for v in t) for t in code))


def parse_pd_string(text: str) -> list[tuple[int, ...]]:
    """Accepts ``[(1,5,2,4),...]``, ``PD:[...]`` or ``PD[X[1,5,2,4],...]``."""
    s = text.strip()
    if s.upper().startswith("PD:"):
        s = s[3:]
    if s.startswith("PD["):
        s = s[2:]
    s = s.replace("X[", "(").replace("]", ")")
    s = s.strip().replace("[", "(")
    try:
        val = ast.literal_eval(s)
    except (ValueError, SyntaxError) as exc:
        raise InvalidPD(f"cannot parse PD code {text!r}") from exc
    if isinstance(val, tuple) and val and all(isinstance(v, int) for v in val):
        val = [val]
    try:
        return [tuple(int(x) for x in t) for t in val]
    except TypeError as exc:
        raise InvalidPD(f"cannot parse PD code {text!r}") from exc


_TOKEN = re.compile(r"(-?)([sS]?)(\d+)")


def parse_braid_tokens(text: str) -> list[int]:
    """Signed generator indices (1-based) from ``"s1 S2 -3 ..."``."""
    out = []
    for tok in text.replace(",", " ").split():
        m = _TOKEN.fullmatch(tok)
        if not m:
            raise ParseError(f"malformed braid token {tok!r}")
        k = int(m.group(3))
        if k < 1:
            raise ParseError(f"braid generator index must be >= 1 in {tok!r}")
        sign = -1 if (m.group(1) == "-") ^ (m.group(2) == "S") else 1
        out.append(sign * k)
    return out


def _braid_crossings(tokens: Sequence[int], strands: int) -> tuple[int, list[_Crossing]]:
    if strands < 1:
        raise ParseError("strand count must be positive")
    for k in tokens:
        if not 1 <= abs(k) < strands:
            raise ParseError(f"generator s{abs(k)} out of range for {strands} strands")
    perm = list(range(strands))
    for k in tokens:
        i = abs(k) - 1
        perm[i], perm[i + 1] = perm[i + 1], perm[i]
    # perm[pos] = strand now at pos; the closure is a knot iff this is one cycle
    seen, cur = 0, 0
    while True:
        cur = perm[cur]
        seen += 1
        if cur == 0:
            break
    if seen != strands:
        raise MultiComponentLink("braid closure has more than one component")
    pos_edge = list(range(strands))
    nxt = strands
    bottom = list(pos_edge)
    raw = []
    for k in tokens:
        i = abs(k) - 1
        BL, BR = pos_edge[i], pos_edge[i + 1]
        TL, TR = nxt, nxt + 1
        nxt += 2
        if k > 0:
            raw.append((BR, BL, TL, TR, +1))  # left strand over
        else:
            raw.append((BL, BR, TR, TL, -1))
        pos_edge[i], pos_edge[i + 1] = TL, TR
    # closure: the top edge at each position is the bottom edge at that position
    parent = list(range(nxt))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for p in range(strands):
        a, b = find(pos_edge[p]), find(bottom[p])
        if a != b:
            parent[a] = b
    nxt_edge = {}
    for ui, oi, uo, oo, _ in raw:
        nxt_edge[find(ui)] = find(uo)
        nxt_edge[find(oi)] = find(oo)
    E = 2 * len(raw)
    if E == 0:
        return 0, []
    label = {}
    cur = find(bottom[0])
    for lab in range(1, E + 1):
        if cur in label:
            raise MultiComponentLink("braid closure has more than one component")
        label[cur] = lab
        cur = nxt_edge[cur]
    crossings = [
        _Crossing(label[find(ui)], label[find(oi)], label[find(uo)], label[find(oo)], s) for ui, oi, uo, oo, s in raw
    ]
    return E, crossings


def parse_braid(text: str, strands: int, name: str = "") -> KnotPresentation:
    """Wirtinger presentation of a braid closure.

    Tokens are ``sK`` (positive, left strand over), ``SK`` or ``-sK`` or ``-K``
    (negative), or a bare ``K``.
    """
    tokens = parse_braid_tokens(text)
    E, crossings = _braid_crossings(tokens, strands)
    pd = tuple(c.pd() for c in crossings) if crossings else None
    return _wirtinger(E, crossings, Source.BRAID, name, pd)


def braid_to_pd(text: str, strands: int) -> list[tuple[int, int, int, int]]:
    E, crossings = _braid_crossings(parse_braid_tokens(text), strands)
    return [c.pd() for c in crossings]


def torus_knot(p: int, q: int) -> KnotPresentation:
    """``<x, y | x^p y^-q>`` with meridian ``x^s y^r`` and longitude ``x^p mu^{-pq}``."""
    if p < 2 or q < 2:
        raise ParseError("torus knot parameters must be at least 2")
    if gcd(p, q) != 1:
        raise NotCoprime(f"gcd({p}, {q}) != 1")
    s = pow(q, -1, p)
    r = (1 - s * q) // p
    mu = Word(((0, s), (1, r)))
    lam = Word.gen(0, p) * mu ** (-p * q)
    rel = Word(((0, p), (1, -q)))
    return KnotPresentation(2, (rel,), mu, lam, Source.TORUS, f"T({p},{q})")


# ----------------------------------------------------------------------
# bundled table

@lru_cache(maxsize=1)
def _table() -> dict[str, tuple[tuple[int, ...], ...]]:
    text = resources.files("metarep").joinpath("data/rolfsen_pd.txt").read_text()
    out = {}
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        name, code = line.split(None, 1)
        out[name] = tuple(parse_pd_string(code))
    return out


def table_names() -> list[str]:
    return list(_table())


def load_table(name: str) -> list[tuple[int, int, int, int]]:
    """Stored PD code of a Rolfsen-table knot."""
    try:
        return [tuple(t) for t in _table()[name]]
    except KeyError:
        raise UnknownKnot(f"{name!r} is not in the bundled table") from None


def unknot() -> KnotPresentation:
    p = parse_braid("s1", 2, name="0_1")
    return p


def knot_from_spec(spec: str) -> KnotPresentation:
    """Resolve a CLI knot spec.

    ``unknot`` | Rolfsen name (``4_1``) | ``braid:[strands:]tokens`` |
    ``pd:[...]`` | ``torus:p,q`` | ``manual:path.json``.
    """
    s = spec.strip()
    low = s.lower()
    if low in ("unknot", "0_1"):
        return unknot()
    if low.startswith("braid:"):
        body = s[6:].strip()
        m = re.match(r"^(\d+)\s*:(.*)$", body)
        if m:
            strands, body = int(m.group(1)), m.group(2)
        else:
            toks = parse_braid_tokens(body)
            strands = max((abs(k) for k in toks), default=0) + 1
        return parse_braid(body, strands, name=s)
    if low.startswith("pd:"):
        return parse_pd(parse_pd_string(s[3:]), name=s)
    if low.startswith("torus:"):
        try:
            p, q = (int(v) for v in s[6:].replace(" ", "").split(","))
        except ValueError as exc:
            raise ParseError(f"torus spec must look like torus:p,q, got {spec!r}") from exc
        return torus_knot(p, q)
    if low.startswith("manual:"):
        path = Path(s[7:])
        try:
            obj = json.loads(path.read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ParseError(f"cannot read manual presentation {path}: {exc}") from exc
        return KnotPresentation.from_json(obj)
    return parse_pd(load_table(s), name=s)
