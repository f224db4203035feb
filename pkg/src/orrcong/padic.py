"""Exact rational and modular primitives over Z/p^e.

Elements of Z_p are modelled as :class:`fractions.Fraction` values whose
reduced denominator is prime to ``p``.  Congruence arithmetic happens in
:class:`ResidueRing`; fixed-precision p-adic bookkeeping (needed when
individual terms of a sum carry powers of ``p``) lives in :class:`PadicApprox`.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Union

from .errors import NonPIntegral, NonUnitDenominator, PrecisionExhausted

RationalLike = Union[Fraction, int]

#: Valuation of zero.
INF = math.inf


def parse_rational(text: str) -> Fraction:
    """Parse ``"a"`` or ``"a/b"`` (sign on the numerator only)."""
    s = text.strip()
    if "/" in s:
        num, den = s.split("/", 1)
        if not den.strip().isdigit():
            raise ValueError(f"bad rational {text!r}: denominator must be a positive integer")
        d = int(den)
        if d == 0:
            raise ValueError(f"bad rational {text!r}: zero denominator")
        return Fraction(int(num), d)
    return Fraction(int(s))


def format_rational(x: RationalLike) -> str:
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def odd_primes(lo: int, hi: int) -> list[int]:
    """Odd primes in ``[lo, hi]`` by the sieve of Eratosthenes."""
    if hi < 3:
        return []
    sieve = bytearray([1]) * (hi + 1)
    sieve[0] = sieve[1] = 0
    for i in range(2, math.isqrt(hi) + 1):
        if sieve[i]:
            sieve[i * i :: i] = bytearray(len(range(i * i, hi + 1, i)))
    return [n for n in range(max(lo, 3), hi + 1) if sieve[n]]


def p_integral(x: RationalLike, p: int) -> Fraction:
    """Return ``x`` as a Fraction, rejecting it if ``p`` divides the denominator."""
    x = Fraction(x)
    if x.denominator % p == 0:
        raise NonPIntegral(f"{format_rational(x)} is not {p}-integral")
    return x


def mod_inverse(a: int, modulus: int) -> int:
    """Inverse of ``a`` modulo ``modulus`` (extended Euclid)."""
    try:
        return pow(a, -1, modulus)
    except ValueError:
        raise NonUnitDenominator(f"{a} is not invertible modulo {modulus}") from None


def to_mod(x: RationalLike, p: int, modulus: int) -> int:
    """Image of a p-integral rational in Z/modulus, where modulus is a power of p."""
    x = Fraction(x)
    if x.denominator % p == 0:
        raise NonPIntegral(f"{format_rational(x)} is not {p}-integral")
    if x.denominator == 1:
        return x.numerator % modulus
    return x.numerator * pow(x.denominator, -1, modulus) % modulus


def int_valuation(n: int, p: int) -> int | float:
    if n == 0:
        return INF
    n = abs(n)
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def valuation(x: RationalLike, p: int) -> int | float:
    """p-adic valuation of a rational; ``math.inf`` for zero."""
    x = Fraction(x)
    if x == 0:
        return INF
    return int_valuation(x.numerator, p) - int_valuation(x.denominator, p)


@dataclass(frozen=True)
class ResidueRing:
    """The ring Z/p^e for an odd prime ``p``."""

    p: int
    e: int

    def __post_init__(self) -> None:
        if self.e < 1:
            raise ValueError(f"exponent must be >= 1, got {self.e}")
        if self.p == 2 or not is_prime(self.p):
            raise ValueError(f"p must be an odd prime, got {self.p}")

    @cached_property
    def modulus(self) -> int:
        return self.p**self.e

    def __call__(self, x: RationalLike) -> Residue:
        return reduce(x, self)

    def is_unit(self, value: int) -> bool:
        return value % self.p != 0

    def __repr__(self) -> str:
        return f"ResidueRing({self.p}^{self.e})"


@dataclass(frozen=True)
class Residue:
    ring: ResidueRing
    value: int

    def __post_init__(self) -> None:
        if not 0 <= self.value < self.ring.modulus:
            object.__setattr__(self, "value", self.value % self.ring.modulus)

    def _coerce(self, other: object) -> int:
        if isinstance(other, Residue):
            if other.ring != self.ring:
                raise ValueError(f"ring mismatch: {self.ring} vs {other.ring}")
            return other.value
        if isinstance(other, (int, Fraction)):
            return to_mod(other, self.ring.p, self.ring.modulus)
        return NotImplemented  # type: ignore[return-value]

    def __add__(self, other: object) -> Residue:
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return Residue(self.ring, (self.value + o) % self.ring.modulus)

    __radd__ = __add__

    def __sub__(self, other: object) -> Residue:
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return Residue(self.ring, (self.value - o) % self.ring.modulus)

    def __rsub__(self, other: object) -> Residue:
        return -(self - other)

    def __neg__(self) -> Residue:
        return Residue(self.ring, -self.value % self.ring.modulus)

    def __mul__(self, other: object) -> Residue:
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return Residue(self.ring, self.value * o % self.ring.modulus)

    __rmul__ = __mul__

    def inverse(self) -> Residue:
        return Residue(self.ring, mod_inverse(self.value, self.ring.modulus))

    def __truediv__(self, other: object) -> Residue:
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return Residue(self.ring, self.value * mod_inverse(o, self.ring.modulus) % self.ring.modulus)

    def __pow__(self, k: int) -> Residue:
        if k < 0:
            return self.inverse() ** (-k)
        return Residue(self.ring, pow(self.value, k, self.ring.modulus))

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Residue):
            return self.ring == other.ring and self.value == other.value
        if isinstance(other, (int, Fraction)):
            try:
                return self.value == to_mod(other, self.ring.p, self.ring.modulus)
            except NonPIntegral:
                return False
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.ring, self.value))

    def __int__(self) -> int:
        return self.value

    def is_unit(self) -> bool:
        return self.value % self.ring.p != 0

    def valuation(self) -> int | float:
        """v_p of the representative, capped: zero maps to ``inf``."""
        return int_valuation(self.value, self.ring.p)

    def __repr__(self) -> str:
        return f"{self.value} (mod {self.ring.p}^{self.ring.e})"


def reduce(x: RationalLike, ring: ResidueRing) -> Residue:
    """Image of the p-integral rational ``x`` in ``ring``."""
    return Residue(ring, to_mod(x, ring.p, ring.modulus))


def least_residue(x: RationalLike, p: int) -> int:
    """The least nonnegative residue of ``x`` modulo ``p``."""
    return to_mod(x, p, p)


def pochhammer(x: RationalLike, k: int) -> Fraction:
    """Exact rising factorial x(x+1)...(x+k-1)."""
    if k < 0:
        raise ValueError("k must be >= 0")
    x = Fraction(x)
    out = Fraction(1)
    for j in range(k):
        out *= x + j
    return out


def pochhammer_residue(x: RationalLike, k: int, ring: ResidueRing) -> Residue:
    if k < 0:
        raise ValueError("k must be >= 0")
    m = ring.modulus
    xv = to_mod(x, ring.p, m)
    acc = 1
    for j in range(k):
        acc = acc * (xv + j) % m
    return Residue(ring, acc)


def binomial_rational(x: RationalLike, k: int) -> Fraction:
    """Generalized binomial coefficient x(x-1)...(x-k+1)/k!."""
    if k < 0:
        raise ValueError("k must be >= 0")
    x = Fraction(x)
    num = Fraction(1)
    for j in range(k):
        num *= x - j
    return num / factorial(k)


class _GrowingTable:
    """Append-only memo table, extended under a lock.

    Reads of already-filled entries need no lock: list items never change
    once appended.
    """

    def __init__(self, first, step) -> None:
        self._values = [first]
        self._step = step
        self._lock = threading.Lock()

    def __getitem__(self, k: int):
        if k < 0:
            raise ValueError("index must be >= 0")
        values = self._values
        if k < len(values):
            return values[k]
        with self._lock:
            while len(values) <= k:
                n = len(values)
                values.append(self._step(values[n - 1], n))
            return values[k]


_FACTORIALS = _GrowingTable(1, lambda prev, n: prev * n)
_HARMONICS = _GrowingTable(Fraction(0), lambda prev, n: prev + Fraction(1, n))


def factorial(k: int) -> int:
    return _FACTORIALS[k]


def harmonic(k: int) -> Fraction:
    """H_k = 1 + 1/2 + ... + 1/k, with H_0 = 0."""
    return _HARMONICS[k]


def central_binomial(k: int) -> int:
    return math.comb(2 * k, k)


class PadicApprox:
    """Fixed-precision p-adic number ``p**valuation * unit``.

    A nonzero value is known modulo ``p**(valuation + precision)``, with
    ``unit`` a residue modulo ``p**precision`` prime to ``p``.  A value whose
    known digits all cancelled is ZERO-at-precision: ``valuation`` is
    ``inf`` and ``precision`` holds the *absolute* precision, i.e. the
    value is only known to be divisible by ``p**precision``.
    """

    __slots__ = ("p", "valuation", "unit", "precision")

    def __init__(self, p: int, valuation: int | float, unit: int, precision: int) -> None:
        if precision < 1 and valuation != INF:
            raise PrecisionExhausted("relative precision must be >= 1")
        self.p = p
        self.valuation = valuation
        self.precision = precision
        if valuation == INF:
            self.unit = 0
        else:
            unit %= p**precision
            if unit % p == 0:
                raise ValueError(f"unit part {unit} is divisible by {p}")
            self.unit = unit

    @classmethod
    def zero(cls, p: int, absolute_precision: int) -> PadicApprox:
        return cls(p, INF, 0, absolute_precision)

    @classmethod
    def from_rational(cls, x: RationalLike, p: int, precision: int) -> PadicApprox:
        """Approximate an exact rational to ``precision`` unit digits.

        Zero becomes ZERO-at-precision ``precision``.
        """
        x = Fraction(x)
        if x == 0:
            return cls.zero(p, precision)
        v = valuation(x, p)
        num, den = x.numerator, x.denominator
        if v > 0:
            num //= p**v
        elif v < 0:
            den //= p ** (-v)
        m = p**precision
        return cls(p, v, num * pow(den, -1, m) % m, precision)

    @property
    def is_zero(self) -> bool:
        return self.valuation == INF

    @property
    def absolute_precision(self) -> int:
        if self.is_zero:
            return self.precision
        return self.valuation + self.precision

    def _check(self, other: PadicApprox) -> None:
        if not isinstance(other, PadicApprox):
            raise TypeError(f"expected PadicApprox, got {type(other).__name__}")
        if other.p != self.p:
            raise ValueError(f"prime mismatch: {self.p} vs {other.p}")

    def __add__(self, other: PadicApprox) -> PadicApprox:
        self._check(other)
        p = self.p
        n = min(self.absolute_precision, other.absolute_precision)
        if self.is_zero and other.is_zero:
            return PadicApprox.zero(p, n)
        v = min(self.valuation, other.valuation)
        if v >= n:
            return PadicApprox.zero(p, n)
        width = n - v
        m = p**width
        s = 0
        for a in (self, other):
            if not a.is_zero and a.valuation < n:
                s += a.unit * p ** (a.valuation - v)
        s %= m
        if s == 0:
            return PadicApprox.zero(p, n)
        w = int_valuation(s, p)
        return PadicApprox(p, v + w, s // p**w, width - w)

    def __neg__(self) -> PadicApprox:
        if self.is_zero:
            return self
        return PadicApprox(self.p, self.valuation, -self.unit, self.precision)

    def __sub__(self, other: PadicApprox) -> PadicApprox:
        return self + (-other)

    def __mul__(self, other: PadicApprox) -> PadicApprox:
        self._check(other)
        p = self.p
        if self.is_zero or other.is_zero:
            # 0 (mod p^N) times p^v u is 0 (mod p^(N+v))
            zero, rest = (self, other) if self.is_zero else (other, self)
            lift = rest.precision if rest.is_zero else rest.valuation
            return PadicApprox.zero(p, zero.precision + lift)
        prec = min(self.precision, other.precision)
        return PadicApprox(p, self.valuation + other.valuation, self.unit * other.unit, prec)

    def __truediv__(self, other: PadicApprox) -> PadicApprox:
        self._check(other)
        p = self.p
        if other.is_zero:
            raise ZeroDivisionError("division by a p-adic ZERO")
        if self.is_zero:
            n = self.precision - other.valuation
            if n < 1:
                raise PrecisionExhausted("quotient of ZERO has no known digits")
            return PadicApprox.zero(p, n)
        prec = min(self.precision, other.precision)
        m = p**prec
        return PadicApprox(p, self.valuation - other.valuation, self.unit * pow(other.unit, -1, m), prec)

    def agrees_with(self, x: RationalLike) -> bool:
        """True when the exact rational ``x`` is consistent with this approximation."""
        x = Fraction(x)
        if self.is_zero:
            return valuation(x, self.p) >= self.precision
        if valuation(x, self.p) != self.valuation:
            return False
        other = PadicApprox.from_rational(x, self.p, self.precision)
        return other.unit == self.unit

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PadicApprox):
            return NotImplemented
        return (self.p, self.valuation, self.unit, self.precision) == (
            other.p,
            other.valuation,
            other.unit,
            other.precision,
        )

    def __hash__(self) -> int:
        return hash((self.p, self.valuation, self.unit, self.precision))

    def __repr__(self) -> str:
        if self.is_zero:
            return f"PadicApprox(0 mod {self.p}^{self.precision})"
        return f"PadicApprox({self.p}^{self.valuation} * {self.unit}, prec={self.precision})"
