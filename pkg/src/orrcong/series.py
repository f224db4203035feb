"""Truncated formal power series over Q and the classical product formulas.

The Clausen and Orr identities are checked coefficient by coefficient for
concrete rational parameters.  An identity check reports the z-adic order of
``lhs - rhs``: agreement through ``z**N`` is the pass condition.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import OrderMismatch, ZeroDenominator
from .padic import RationalLike
from .records import CongruenceCheck, Valuation

MAX_ORDER = 200
DEFAULT_ORDER = 30

#: Identity checks share the record type of congruence checks; ``p`` is None
#: and valuations are z-adic orders.
IdentityCheck = CongruenceCheck


@dataclass(frozen=True)
class PowerSeries:
    coefficients: tuple[Fraction, ...]

    def __init__(self, coefficients: Sequence[RationalLike]):
        if not coefficients:
            raise ValueError("a power series needs at least the constant coefficient")
        object.__setattr__(self, "coefficients", tuple(Fraction(c) for c in coefficients))

    @property
    def order(self) -> int:
        return len(self.coefficients) - 1

    @classmethod
    def one(cls, order: int) -> PowerSeries:
        return cls([1] + [0] * order)

    def __getitem__(self, k: int) -> Fraction:
        return self.coefficients[k]

    def __len__(self) -> int:
        return len(self.coefficients)

    def _same_order(self, other: PowerSeries) -> None:
        if other.order != self.order:
            raise OrderMismatch(f"orders differ: {self.order} vs {other.order}")

    def __add__(self, other: PowerSeries) -> PowerSeries:
        self._same_order(other)
        return PowerSeries([a + b for a, b in zip(self.coefficients, other.coefficients)])

    def __sub__(self, other: PowerSeries) -> PowerSeries:
        self._same_order(other)
        return PowerSeries([a - b for a, b in zip(self.coefficients, other.coefficients)])

    def __mul__(self, other: PowerSeries) -> PowerSeries:
        return series_mul(self, other)

    def scale(self, c: RationalLike) -> PowerSeries:
        c = Fraction(c)
        return PowerSeries([c * a for a in self.coefficients])

    def z_order(self) -> int | None:
        """Index of the first nonzero coefficient, None for the zero series."""
        for k, c in enumerate(self.coefficients):
            if c:
                return k
        return None


def series_mul(a: PowerSeries, b: PowerSeries) -> PowerSeries:
    """Cauchy product truncated at the common order."""
    a._same_order(b)
    n = a.order
    ac, bc = a.coefficients, b.coefficients
    out = []
    for k in range(n + 1):
        s = Fraction(0)
        for i in range(k + 1):
            if ac[i] and bc[k - i]:
                s += ac[i] * bc[k - i]
        out.append(s)
    return PowerSeries(out)


def hyper_series(upper: Sequence[RationalLike], lower: Sequence[RationalLike], order: int) -> PowerSeries:
    """Coefficients prod (x_i)_k / (prod (y_j)_k * k!) for k = 0..order."""
    if not 0 <= order <= MAX_ORDER:
        raise ValueError(f"order must lie in [0, {MAX_ORDER}], got {order}")
    ups = [Fraction(x) for x in upper]
    lows = [Fraction(y) for y in lower]
    coeffs = [Fraction(1)]
    c = Fraction(1)
    for k in range(order):
        den = Fraction(k + 1)
        for y in lows:
            den *= y + k
        if den == 0:
            raise ZeroDenominator(f"a lower parameter in {[str(y) for y in lows]} hits a nonpositive integer")
        num = Fraction(1)
        for x in ups:
            num *= x + k
        c = c * num / den
        coeffs.append(c)
    return PowerSeries(coeffs)


def _identity_check(claim: str, lhs: PowerSeries, rhs: PowerSeries, params: dict) -> IdentityCheck:
    n = lhs.order
    first = (lhs - rhs).z_order()
    achieved = Valuation(n + 1, bound=True) if first is None else Valuation(first)
    return CongruenceCheck.modular(
        claim,
        p=None,
        e=None,
        params={**params, "N": n},
        achieved=achieved,
        required=n + 1,
        note="z-adic order of lhs - rhs",
    )


def check_clausen(alpha: RationalLike, beta: RationalLike, order: int = DEFAULT_ORDER) -> IdentityCheck:
    """Square of 2F1[a/2, b/2; (1+a+b)/2] against 3F2[a, b, (a+b)/2; a+b, (1+a+b)/2]."""
    a, b = Fraction(alpha), Fraction(beta)
    f = hyper_series([a / 2, b / 2], [(1 + a + b) / 2], order)
    g = hyper_series([a, b, (a + b) / 2], [a + b, (1 + a + b) / 2], order)
    return _identity_check("CLAUSEN", f * f, g, {"alpha": a, "beta": b})


def check_clausen_special(alpha: RationalLike, order: int = DEFAULT_ORDER) -> IdentityCheck:
    a = Fraction(alpha)
    f = hyper_series([a / 2, Fraction(1, 2) - a / 2], [1], order)
    g = hyper_series([a, 1 - a, Fraction(1, 2)], [1, 1], order)
    return _identity_check("CLAUSEN_SPECIAL", f * f, g, {"alpha": a})


def check_orr(alpha: RationalLike, beta: RationalLike, order: int = DEFAULT_ORDER) -> IdentityCheck:
    """2F1[a/2, b/2; c] 2F1[a/2, b/2 - 1; c] against 3F2[a, b-1, (a+b)/2 - 1; a+b-2, c], c = (a+b-1)/2."""
    a, b = Fraction(alpha), Fraction(beta)
    c = (a + b - 1) / 2
    f1 = hyper_series([a / 2, b / 2], [c], order)
    f2 = hyper_series([a / 2, b / 2 - 1], [c], order)
    g = hyper_series([a, b - 1, (a + b) / 2 - 1], [a + b - 2, c], order)
    return _identity_check("ORR", f1 * f2, g, {"alpha": a, "beta": b})


def check_orr_special(alpha: RationalLike, order: int = DEFAULT_ORDER) -> IdentityCheck:
    a = Fraction(alpha)
    f1 = hyper_series([a / 2, Fraction(3, 2) - a / 2], [1], order)
    f2 = hyper_series([a / 2, Fraction(1, 2) - a / 2], [1], order)
    g = hyper_series([a, 2 - a, Fraction(1, 2)], [1, 1], order)
    return _identity_check("ORR_SPECIAL", f1 * f2, g, {"alpha": a})
