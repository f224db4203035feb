"""Truncated hypergeometric series, exactly and in Z/p^e.

Both evaluators build terms by the ratio recurrence

    t_{k+1} = t_k * prod(x_i + k) * z / (prod(y_j + k) * (k + 1))

so a series of truncation ``n`` costs O(n * (#upper + #lower)) operations.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

from .errors import NonUnitDenominator, ZeroDenominator
from .padic import (
    RationalLike,
    Residue,
    ResidueRing,
    central_binomial,
    format_rational,
    p_integral,
    to_mod,
)


@dataclass(frozen=True)
class HyperSpec:
    """``upper``/``lower`` parameters, argument ``z`` and truncation ``n``."""

    upper: tuple[Fraction, ...]
    lower: tuple[Fraction, ...]
    z: Fraction
    n: int

    def __init__(self, upper: Sequence[RationalLike], lower: Sequence[RationalLike], z: RationalLike, n: int):
        if n < 0:
            raise ValueError(f"truncation must be >= 0, got {n}")
        object.__setattr__(self, "upper", tuple(Fraction(x) for x in upper))
        object.__setattr__(self, "lower", tuple(Fraction(y) for y in lower))
        object.__setattr__(self, "z", Fraction(z))
        object.__setattr__(self, "n", n)

    def validate(self, p: int) -> None:
        for x in (*self.upper, *self.lower, self.z):
            p_integral(x, p)

    def __str__(self) -> str:
        up = ", ".join(map(format_rational, self.upper))
        lo = ", ".join(map(format_rational, self.lower))
        return f"{len(self.upper)}F{len(self.lower)}[{up}; {lo} | {format_rational(self.z)}]_{self.n}"


def _last_nonzero(spec: HyperSpec) -> int:
    """Index after which every term is exactly zero (``spec.n`` if none)."""
    if spec.z == 0:
        return 0
    stop = spec.n
    for x in spec.upper:
        if x.denominator == 1 and x <= 0:
            stop = min(stop, -x.numerator)
    return stop


def iter_terms_mod(spec: HyperSpec, ring: ResidueRing) -> Iterator[int]:
    """Yield the residues of the terms k = 0..n in Z/p^e.

    A series that terminates exactly (z = 0, or an upper parameter reaching 0)
    yields zeros from there on without dividing by later denominators.
    """
    p, m = ring.p, ring.modulus
    xs = [to_mod(x, p, m) for x in spec.upper]
    ys = [to_mod(y, p, m) for y in spec.lower]
    z = to_mod(spec.z, p, m)
    term = 1
    yield term
    stop = _last_nonzero(spec)
    for k in range(spec.n):
        if k >= stop:
            yield 0
            continue
        num = z
        for x in xs:
            num = num * (x + k) % m
        den = k + 1
        for y in ys:
            den = den * (y + k) % m
        if den % p == 0:
            raise NonUnitDenominator(
                f"term {k + 1} of {spec} divides by a multiple of {p}; "
                f"the series is not evaluable in Z/{p}^{ring.e} term by term"
            )
        term = term * num % m * pow(den, -1, m) % m
        yield term


def eval_truncated_mod(spec: HyperSpec, ring: ResidueRing) -> Residue:
    """The truncated series reduced modulo p^e.

    Raises :class:`NonUnitDenominator` when some ``(y_j)_k`` or ``k!`` with
    ``k <= n`` is divisible by ``p``.
    """
    m = ring.modulus
    total = 0
    for t in iter_terms_mod(spec, ring):
        total += t
    return Residue(ring, total % m)


def iter_terms_exact(spec: HyperSpec) -> Iterator[Fraction]:
    term = Fraction(1)
    yield term
    stop = _last_nonzero(spec)
    for k in range(spec.n):
        if k >= stop:
            yield Fraction(0)
            continue
        den = Fraction(k + 1)
        for y in spec.lower:
            den *= y + k
        if den == 0:
            raise ZeroDenominator(f"lower parameter of {spec} reaches a nonpositive integer at k = {k}")
        num = spec.z
        for x in spec.upper:
            num *= x + k
        term = term * num / den
        yield term


def eval_truncated_exact(spec: HyperSpec) -> Fraction:
    return sum(iter_terms_exact(spec), Fraction(0))


def central_binomial_term(k: int, ring: ResidueRing) -> Residue:
    """C(2k, k) / 4^k in Z/p^e, which equals (1/2)_k / k!."""
    if k < 0:
        raise ValueError("k must be >= 0")
    if k >= ring.p:
        raise NonUnitDenominator(f"k! is divisible by {ring.p} for k = {k}")
    m = ring.modulus
    return Residue(ring, central_binomial(k) * pow(4, -k, m) % m)
