import random
from fractions import Fraction

import pytest

from orrcong.errors import NonPIntegral
from orrcong.gamma import check_gamma_reflection, check_gamma_shift, gamma_nat, gamma_p, reflection_sign
from orrcong.padic import ResidueRing, odd_primes
from orrcong.records import Verdict

from oracles import gamma_nat as brute_gamma, reduce


def test_gamma_nat_examples():
    assert gamma_nat(0, ResidueRing(7, 3)).value == 1
    assert gamma_nat(3, ResidueRing(5, 1)).value == 3
    # product over 1 <= k < 5 prime to 3 is 1*2*4
    assert gamma_nat(5, ResidueRing(3, 2)).value == (-8) % 9 == 1
    assert gamma_nat(1, ResidueRing(7, 2)).value == 48
    assert gamma_nat(2, ResidueRing(7, 2)).value == 1


@pytest.mark.parametrize("p, e", [(3, 2), (5, 2), (7, 1), (3, 3)])
def test_gamma_nat_matches_brute_force(p, e):
    m = p**e
    ring = ResidueRing(p, e)
    for n in range(0, 3 * m):
        assert gamma_nat(n, ring).value == brute_gamma(n, p, m)


def test_gamma_p_examples():
    assert gamma_p(0, ResidueRing(5, 2)).value == 1
    ring = ResidueRing(5, 2)
    g = gamma_p(Fraction(1, 2), ring)
    assert (g * g).value == 24
    assert g.value == brute_gamma(reduce(Fraction(1, 2), 25), 5, 25) == 18
    assert gamma_p(3, ResidueRing(5, 1)).value == 3


def test_gamma_p_rejects_non_integral():
    with pytest.raises(NonPIntegral):
        gamma_p(Fraction(1, 5), ResidueRing(5, 2))


@pytest.mark.parametrize("p, e", [(5, 2), (7, 2), (3, 3), (11, 2), (13, 1)])
def test_continuity_surrogate(p, e):
    rng = random.Random(p * 100 + e)
    ring = ResidueRing(p, e)
    m = ring.modulus
    for _ in range(200):
        n = rng.randrange(m)
        base = gamma_nat(n, ring)
        for j in (1, 2, 3):
            assert gamma_nat(n + j * m, ring) == base


@pytest.mark.parametrize("p, e", [(5, 2), (7, 2), (3, 3), (13, 2)])
def test_cached_equals_uncached(p, e):
    ring = ResidueRing(p, e)
    rng = random.Random(7)
    for _ in range(100):
        x = Fraction(rng.randint(-50, 50), rng.choice([d for d in range(1, 20) if d % p]))
        assert gamma_p(x, ring) == gamma_p(x, ring, cached=False)


def test_values_are_units():
    for p in (3, 5, 7, 11):
        ring = ResidueRing(p, 2)
        for n in range(ring.modulus):
            assert gamma_p(n, ring).is_unit()


@pytest.mark.parametrize(
    "x, p, e, branch",
    [(Fraction(1), 7, 2, "p ∤ x"), (Fraction(0), 5, 2, "p | x"), (Fraction(-1, 2), 5, 2, "p ∤ x")],
)
def test_shift_examples(x, p, e, branch):
    chk = check_gamma_shift(x, ResidueRing(p, e))
    assert chk.verdict is Verdict.PASS
    assert chk.note == branch


def test_reflection_examples():
    chk = check_gamma_reflection(Fraction(1, 2), ResidueRing(5, 2))
    assert chk.passed and chk.note == "sign -1"
    chk = check_gamma_reflection(Fraction(0), ResidueRing(7, 1))
    assert chk.passed and chk.note == "sign -1"
    assert check_gamma_reflection(Fraction(1, 3), ResidueRing(7, 2)).passed


def test_shift_and_reflection_on_lattice():
    xs = {Fraction(r, s) for r in range(-12, 13) for s in range(-12, 13) if s}
    for p in odd_primes(3, 97):
        for e in (1, 2):
            ring = ResidueRing(p, e)
            for x in xs:
                if x.denominator % p == 0:
                    continue
                assert check_gamma_shift(x, ring).passed, (p, e, x)
                assert check_gamma_reflection(x, ring).passed, (p, e, x)


def test_reflection_detects_wrong_sign():
    # the product pins down the sign; its negation must not also match
    ring = ResidueRing(7, 2)
    x = Fraction(1, 3)
    g = gamma_p(x, ring) * gamma_p(1 - x, ring)
    sign = reflection_sign(x, 7)
    assert g == sign
    assert g != -sign
