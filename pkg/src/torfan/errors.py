"""Exception types shared across the package."""


class TorfanError(Exception):
    """Base class for every error raised by torfan."""


class StructuralError(TorfanError, TypeError):
    """Operands live in incompatible rings, fans or truncations."""


class DomainError(TorfanError, ValueError):
    """An argument violates a mathematical precondition."""


class UnsupportedError(TorfanError):
    """The requested configuration is outside what is implemented."""


class IncompatibleTupleError(DomainError):
    """A tuple of per-cone series does not agree on a shared face.

    ``pair`` holds the two maximal cones and ``monomial`` the first
    exponent vector whose coefficients differ after restriction.
    """

    def __init__(self, pair, monomial, message=None):
        self.pair = pair
        self.monomial = monomial
        super().__init__(message or f"tuple disagrees on {pair[0]} & {pair[1]} at {monomial}")


class UnderdeterminedError(TorfanError):
    """The push-forward recursion cannot reach a monomial."""
