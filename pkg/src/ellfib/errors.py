"""Exception hierarchy shared by every ellfib module."""

from __future__ import annotations


class EllfibError(Exception):
    """Base class for all library errors."""


class ZeroDivisorInModulus(EllfibError, ZeroDivisionError):
    """An inversion met a nontrivial common factor with the extension modulus.

    ``witness`` holds that factor as a coefficient list over Q (low degree first).
    """

    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


class ParseError(EllfibError, ValueError):
    def __init__(self, message: str, token: str | None = None, position: int | None = None):
        super().__init__(message)
        self.token = token
        self.position = position


class NonHomogeneousError(ParseError):
    def __init__(self, message: str, monomials=()):
        super().__init__(message)
        self.monomials = tuple(monomials)


class DegenerateModel(EllfibError, ValueError):
    """The discriminant vanishes identically."""


class WeightUnderflow(EllfibError, ValueError):
    pass


class NotMinimal(EllfibError, ValueError):
    pass


class NonSquarefreeTwist(EllfibError, ValueError):
    pass


class OddTwistImbalance(NonSquarefreeTwist):
    """Twisting by an odd-degree polynomial cannot yield integral weight."""


class InconsistentOrders(EllfibError, ArithmeticError):
    pass


class NotStarred(EllfibError, ValueError):
    pass


class DegeneratePoints(EllfibError, ValueError):
    pass


class FieldMismatch(EllfibError, ValueError):
    pass


class CatalogCorrupt(EllfibError):
    pass
