"""Exception hierarchy shared by all modules."""


class OrrcongError(Exception):
    """Base class for every error raised by this package."""


class NonPIntegral(OrrcongError, ValueError):
    """A rational whose denominator is divisible by the working prime."""


class NonUnitDenominator(OrrcongError, ArithmeticError):
    """A division in Z/p^e by an element that is not a unit."""


class ZeroDenominator(OrrcongError, ZeroDivisionError):
    """An exact rational computation hit a vanishing denominator."""


class PrecisionExhausted(OrrcongError, ArithmeticError):
    """Fixed-precision p-adic arithmetic lost every known digit."""


class OrderMismatch(OrrcongError, ValueError):
    """Power series of different truncation orders were combined."""


class BadPrime(OrrcongError, ValueError):
    """The prime is outside the range a claim is stated for."""


class DivisionUndefined(OrrcongError, ZeroDivisionError):
    """A normalizing quantity vanished, so the quotient is meaningless."""


class ConfigInvalid(OrrcongError, ValueError):
    """A sweep configuration failed validation."""
