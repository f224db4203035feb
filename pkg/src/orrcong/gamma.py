"""Morita's p-adic Gamma function modulo p^e.

``gamma_nat`` is the defining product on the naturals.  ``gamma_p`` extends it
to p-integral rationals by lifting the argument to its residue modulo
``p**e``; the tests check empirically that shifting a natural argument by a
multiple of ``p**e`` leaves the value unchanged modulo ``p**e``.
"""

from __future__ import annotations

import threading
from fractions import Fraction

from .records import CongruenceCheck, difference_valuation
from .padic import RationalLike, Residue, ResidueRing, least_residue, p_integral, to_mod

_PREFIX_CACHE: dict[tuple[int, int], list[int]] = {}
_PREFIX_LOCK = threading.Lock()


def _unit_product(n: int, p: int, m: int) -> int:
    acc = 1
    for k in range(1, n):
        if k % p:
            acc = acc * k % m
    return acc


def gamma_nat(n: int, ring: ResidueRing) -> Residue:
    """(-1)^n times the product of all 1 <= k < n prime to p, reduced mod p^e."""
    if n < 0:
        raise ValueError("n must be >= 0")
    if n == 0:
        return Residue(ring, 1)
    m = ring.modulus
    prod = _unit_product(n, ring.p, m)
    return Residue(ring, -prod % m if n % 2 else prod)


def _prefix_table(ring: ResidueRing) -> list[int]:
    key = (ring.p, ring.e)
    table = _PREFIX_CACHE.get(key)
    if table is not None:
        return table
    p, m = ring.p, ring.modulus
    # table[n] = product of 1 <= k < n with p not dividing k
    built = [1] * (m + 1)
    acc = 1
    for n in range(1, m + 1):
        built[n] = acc
        if n % p:
            acc = acc * n % m
    with _PREFIX_LOCK:
        return _PREFIX_CACHE.setdefault(key, built)


def clear_cache() -> None:
    with _PREFIX_LOCK:
        _PREFIX_CACHE.clear()


def gamma_p(x: RationalLike, ring: ResidueRing, *, cached: bool = True) -> Residue:
    """Gamma_p(x) mod p^e for a p-integral rational ``x``."""
    n = to_mod(x, ring.p, ring.modulus)
    if not cached:
        return gamma_nat(n, ring)
    if n == 0:
        return Residue(ring, 1)
    prod = _prefix_table(ring)[n]
    m = ring.modulus
    return Residue(ring, -prod % m if n % 2 else prod)


def check_gamma_shift(x: RationalLike, ring: ResidueRing) -> CongruenceCheck:
    """Gamma_p(x+1) = -x Gamma_p(x) when p does not divide x, else -Gamma_p(x)."""
    x = p_integral(x, ring.p)
    lhs = gamma_p(x + 1, ring)
    g = gamma_p(x, ring)
    divisible = least_residue(x, ring.p) == 0
    rhs = -g if divisible else g * (-x)
    branch = "p | x" if divisible else "p ∤ x"
    return CongruenceCheck.modular(
        "GAMMA_SHIFT",
        p=ring.p,
        e=ring.e,
        params={"x": x},
        achieved=difference_valuation(lhs.value, rhs.value, ring),
        required=ring.e,
        note=branch,
    )


def reflection_sign(x: RationalLike, p: int) -> int:
    return -1 if (p - least_residue(-Fraction(x), p)) % 2 else 1


def check_gamma_reflection(x: RationalLike, ring: ResidueRing) -> CongruenceCheck:
    """Gamma_p(x) Gamma_p(1-x) = (-1)^(p - <-x>_p)."""
    x = p_integral(x, ring.p)
    lhs = gamma_p(x, ring) * gamma_p(1 - x, ring)
    sign = reflection_sign(x, ring.p)
    return CongruenceCheck.modular(
        "GAMMA_REFL",
        p=ring.p,
        e=ring.e,
        params={"x": x},
        achieved=difference_valuation(lhs.value, sign % ring.modulus, ring),
        required=ring.e,
        note=f"sign {sign:+d}",
    )

