"""Exception hierarchy and the ``INFINITE`` sentinel shared across modules."""


class MetarepError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(MetarepError):
    pass


class InvalidPD(MetarepError):
    pass


class MultiComponentLink(MetarepError):
    pass


class NotCoprime(MetarepError):
    pass


class UnknownKnot(MetarepError):
    pass


class InvalidPresentation(MetarepError):
    pass


class MissingLongitude(MetarepError):
    pass


class NormalizationFailure(MetarepError):
    pass


class InfiniteFamily(MetarepError):
    """Raised when b1 of a branched cover is positive and a finite answer is required."""


class RelatorViolation(MetarepError):
    pass


class ToleranceAmbiguous(MetarepError):
    """A singular value sits inside the ambiguity band of the float rank test."""


class DecompositionMismatch(MetarepError):
    pass


class SingularDenominator(MetarepError):
    pass


class NotRegular(MetarepError):
    pass


class NoRepresentations(MetarepError):
    """There is nothing of the requested kind to work on (e.g. no character of order n)."""


class Intractable(MetarepError):
    """A configured resource cap was exceeded."""


class ObstructionNonzero(MetarepError):
    def __init__(self, order, residual):
        super().__init__(f"obstruction at order {order} does not vanish (residual {residual:.3e})")
        self.order = order
        self.residual = residual


class NewtonDiverged(MetarepError):
    def __init__(self, t, residual):
        super().__init__(f"Newton iteration diverged at t={t} (residual {residual:.3e})")
        self.t = t
        self.residual = residual


class _Infinite:
    """Marker for an infinite count or torsion order; compares above every number."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INFINITE"

    def __str__(self):
        return "Infinite"

    def __reduce__(self):
        return (_Infinite, ())

    def __gt__(self, other):
        return other is not self

    def __ge__(self, other):
        return True

    def __lt__(self, other):
        return False

    def __le__(self, other):
        return other is self


INFINITE = _Infinite()


def is_infinite(x):
    return x is INFINITE
