"""Matrix representations of presentation groups, exact or floating point."""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from functools import cached_property
from typing import Optional

import numpy as np

from .cyclotomic import CycNum
from .errors import ParseError
from .knotio import KnotPresentation, Word
from .linalg import as_object_array, exact_det, exact_inverse


class Backend(enum.Enum):
    EXACT = "ExactCyclotomic"
    FLOAT = "ComplexFloat"


def exact_identity(d: int, N: int):
    one, zero = CycNum.one(N), CycNum.zero(N)
    return as_object_array([[one if i == j else zero for j in range(d)] for i in range(d)])


@dataclass(frozen=True, eq=False)
class Representation:
    """Images of the presentation generators.

    ``n`` is the dimension of the module.  Exact images are numpy object
    arrays of :class:`CycNum` over ``Q(zeta_N)``; float images are complex
    arrays.  ``provenance`` is a small JSON-able dict, e.g.
    ``{"kind": "Metabelian", "chi": [...], "z": k}``.
    """

    n: int
    images: tuple
    backend: Backend
    N: int = 1
    provenance: dict = field(default_factory=lambda: {"kind": "Manual"})

    @property
    def exact(self) -> bool:
        return self.backend is Backend.EXACT

    @property
    def num_generators(self):
        return len(self.images)

    @cached_property
    def identity(self):
        if self.exact:
            return exact_identity(self.n, self.N)
        return np.eye(self.n, dtype=complex)

    @cached_property
    def inverses(self) -> tuple:
        if self.exact:
            return tuple(as_object_array(exact_inverse(A)) for A in self.images)
        return tuple(np.linalg.inv(A) for A in self.images)

    def __call__(self, w: Word):
        """Image of a word."""
        P = self.identity
        for g, e in w.letters:
            M = self.images[g] if e > 0 else self.inverses[g]
            for _ in range(abs(e)):
                P = P @ M
        return P

    def trace(self, w: Word):
        M = self(w)
        s = M[0, 0]
        for i in range(1, self.n):
            s = s + M[i, i]
        return s

    def relator_residual(self, p: KnotPresentation) -> float:
        """Largest Frobenius norm of rho(r) - I (exact backend: 0.0 or inf)."""
        worst = 0.0
        for r in p.relators:
            D = self(r) - self.identity
            if self.exact:
                if any(not x.is_zero() for x in D.flat):
                    return float("inf")
            else:
                worst = max(worst, float(np.linalg.norm(D)))
        return worst

    def satisfies(self, p: KnotPresentation, tol: float = 1e-9) -> bool:
        r = self.relator_residual(p)
        return r == 0.0 if self.exact else r <= tol

    def determinants(self):
        if self.exact:
            return [exact_det(A) for A in self.images]
        return [complex(np.linalg.det(A)) for A in self.images]

    def to_float(self) -> "Representation":
        if not self.exact:
            return self
        imgs = tuple(np.array([[complex(x) for x in row] for row in A], dtype=complex) for A in self.images)
        return Representation(self.n, imgs, Backend.FLOAT, 1, dict(self.provenance))

    def conjugate_inverse_transpose(self) -> "Representation":
        """g -> (rho(g)^*)^{-1}; equal to rho for unitary representations."""
        if self.exact:
            imgs = tuple(
                as_object_array([[x.conj() for x in row] for row in inv.T]) for inv in self.inverses
            )
            return Representation(self.n, imgs, Backend.EXACT, self.N, {"kind": "Dual"})
        imgs = tuple(np.linalg.inv(A).conj().T for A in self.images)
        return Representation(self.n, imgs, Backend.FLOAT, 1, {"kind": "Dual"})

    def conjugated(self, C) -> "Representation":
        """C rho C^{-1} (float backend)."""
        F = self.to_float()
        Ci = np.linalg.inv(C)
        return Representation(self.n, tuple(C @ A @ Ci for A in F.images), Backend.FLOAT, 1, dict(self.provenance))

    # serialization ----------------------------------------------------
    def to_json(self) -> dict:
        if self.exact:
            imgs = [[[x.to_json() for x in row] for row in A] for A in self.images]
        else:
            imgs = [[[[float(x.real), float(x.imag)] for x in row] for row in A] for A in self.images]
        return {
            "n": self.n,
            "backend": self.backend.value,
            "N": self.N,
            "images": imgs,
            "provenance": self.provenance,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "Representation":
        try:
            backend = Backend(obj["backend"])
            n = int(obj["n"])
            if backend is Backend.EXACT:
                N = int(obj["N"])
                imgs = tuple(
                    as_object_array([[CycNum.from_json(x).embed(N) for x in row] for row in A]) for A in obj["images"]
                )
            else:
                N = 1
                imgs = tuple(np.array([[complex(a, b) for a, b in row] for row in A], dtype=complex) for A in obj["images"])
            return cls(n, imgs, backend, N, dict(obj.get("provenance", {"kind": "Manual"})))
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"malformed representation JSON: {exc}") from exc


def float_rep(images, provenance: Optional[dict] = None) -> Representation:
    imgs = tuple(np.asarray(A, dtype=complex) for A in images)
    return Representation(imgs[0].shape[0], imgs, Backend.FLOAT, 1, provenance or {"kind": "Manual"})
