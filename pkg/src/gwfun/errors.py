"""Exception types shared across modules."""
from __future__ import annotations

from .specfun import PoleAtNonpositiveInteger


class DomainError(ValueError):
    """An argument lies outside the region where a formula is valid."""


class UnreachableSize(ValueError):
    """The requested tree size has probability zero (n not 1 mod span)."""


class PoleAtHalf(ArithmeticError):
    """Evaluation at (or too close to) the pole alpha = 1/2."""


class GammaPole(PoleAtNonpositiveInteger):
    """A Gamma factor of a recursion sits on a pole."""


class CapacityExceeded(RuntimeError):
    """A table would exceed the configured memory budget."""


class CustomNotSupported(ValueError):
    """The operation needs closed forms that exist only for presets."""


class QuadratureNonconvergence(RuntimeError):
    pass


class NotTabulated(ValueError):
    pass


class CenteredRequiresSubcriticalAlpha(DomainError):
    pass


class ZeroT(ValueError):
    pass


class DivisionByZeroLeadingCoefficient(ZeroDivisionError):
    pass
