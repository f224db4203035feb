from fractions import Fraction
from math import comb

import pytest

from orrcong.checks import (
    b_gate,
    case2_expansions,
    check_binomial_product_identities,
    check_case2_expansions,
    check_clausen_congruence,
    check_corollary_b,
    check_identity_1_9,
    check_lemma_2_3,
    check_lemma_maopan,
    check_lemma_tauraso,
    check_special_cases,
    check_theorem_main,
    conjecture_valuations,
    explore_conjecture,
    orr_sum_exact,
    orr_sum_padic,
    parity_gate,
    special_case_sum,
    theorem_sides,
)
from orrcong.errors import BadPrime, DivisionUndefined, NonPIntegral, ZeroDenominator
from orrcong.padic import odd_primes
from orrcong.records import Verdict

from oracles import hyper, orr_sum, reduce, vp

HALF = Fraction(1, 2)


def test_theorem_example_p7():
    lhs, rhs = theorem_sides(7, -2, 1)
    assert lhs.value == rhs.value == 13
    chk = check_theorem_main(7, -2, 1)
    assert chk.verdict is Verdict.PASS
    assert str(chk.achieved) == ">=2"


def test_theorem_sides_match_oracle():
    for p in (5, 7, 11):
        m = p * p
        for alpha in (Fraction(-2), Fraction(1, 3), Fraction(4, 5)):
            if alpha.denominator % p == 0:
                continue
            z = Fraction(-1, 2)
            n = p - 1
            a = alpha
            f1 = hyper([a / 2, Fraction(3, 2) - a / 2], [1], z, n)
            f2 = hyper([a / 2, HALF - a / 2], [1], z, n)
            g = hyper([a, 2 - a, HALF], [1, 1], z, n)
            lhs, rhs = theorem_sides(p, alpha, z)
            assert lhs.value == reduce(f1 * f2, m)
            assert rhs.value == reduce(g, m)


def test_theorem_gate_skips_odd_parity():
    assert parity_gate(Fraction(-1), 7)[0] is False
    chk = check_theorem_main(7, -1, 1)
    assert chk.verdict is Verdict.SKIPPED
    assert "odd" in chk.hypothesis_reason


def test_theorem_rejects_bad_input():
    with pytest.raises(NonPIntegral):
        check_theorem_main(5, Fraction(1, 5), 1)
    with pytest.raises(ValueError):
        check_theorem_main(5, 2, 1, e=1)


def test_theorem_truncation_perturbation_can_fail():
    fails = [
        (p, a)
        for p in (5, 7, 11, 13)
        for a in range(-6, 7)
        if check_theorem_main(p, a, 1, truncation=p - 2).verdict is Verdict.FAIL
    ]
    assert fails


def test_clausen_congruence_examples():
    for p in (5, 7, 11):
        for a in (0, -2, Fraction(1, 3), Fraction(2, 3)):
            chk = check_clausen_congruence(p, a, 2)
            assert chk.verdict in (Verdict.PASS, Verdict.SKIPPED)


def test_b_gate():
    assert b_gate(17, 4) == (True, "")
    assert b_gate(11, 4) == (True, "")
    # 1/4 = 10 (mod 13), so <-1/4>_13 = 3 is odd
    assert "odd" in b_gate(13, 4)[1]
    assert "not +-1" in b_gate(7, 5)[1]
    assert b_gate(3, 3)[0] is False


@pytest.mark.parametrize("b", [1, 2, 3, 5, 7])
def test_orr_sum_exact_matches_oracle(b):
    for upto in (0, 1, 4, 10):
        assert orr_sum_exact(b, upto) == orr_sum(b, upto)


def test_orr_sum_padic_agrees_with_exact():
    for p, b, upto in ((7, 3, 13), (5, 2, 14), (13, 4, 12), (11, 6, 21)):
        exact = orr_sum_exact(b, upto)
        approx = orr_sum_padic(p, b, upto, 20)
        assert approx.agrees_with(exact)


def test_corollary_example():
    chk = check_corollary_b(17, 4)
    assert chk.verdict is Verdict.PASS
    assert chk.achieved.value == vp(orr_sum(4, 16), 17) == 2


def test_corollary_gate_and_b1():
    assert check_corollary_b(13, 4).verdict is Verdict.SKIPPED
    assert check_corollary_b(7, 5).verdict is Verdict.SKIPPED
    assert check_corollary_b(11, 1).verdict is Verdict.PASS


@pytest.mark.parametrize("claim, p, v", [("COR_1_4_A", 13, 2), ("COR_1_4_B", 3, 3), ("COR_1_4_C", 5, 2), ("COR_1_4_D", 5, 3)])
def test_special_case_examples(claim, p, v):
    (chk,) = check_special_cases(p, (claim,))
    assert chk.achieved.value == v
    assert chk.verdict is Verdict.PASS


def test_special_cases_raised_modulus():
    reqs = {c.claim_id: c.required for c in check_special_cases(3)}
    assert reqs["COR_1_4_B"] == 3 and reqs["COR_1_4_A"] == 2
    reqs = {c.claim_id: c.required for c in check_special_cases(5)}
    assert reqs["COR_1_4_D"] == 3 and reqs["COR_1_4_C"] == 2


def test_special_case_sums_against_binomial_forms():
    p = 13
    forms = {
        "COR_1_4_A": lambda k: (9 * k + 2) * Fraction(comb(2 * k, k) ** 2 * comb(3 * k, k), 108**k),
        "COR_1_4_B": lambda k: (16 * k + 3) * Fraction(comb(2 * k, k) ** 2 * comb(4 * k, 2 * k), 256**k),
        "COR_1_4_C": lambda k: (4 * k + 1) * Fraction(comb(2 * k, k) ** 3, 64**k),
        "COR_1_4_D": lambda k: (36 * k + 5) * Fraction(comb(6 * k, 3 * k) * comb(3 * k, k) * comb(2 * k, k), 12 ** (3 * k)),
    }
    for cid, term in forms.items():
        assert special_case_sum(cid, p) == sum(term(k) for k in range(p))


def test_special_cases_are_scaled_corollary_sums():
    # same sums up to a unit factor, so the valuations agree
    pairs = {"COR_1_4_A": 3, "COR_1_4_B": 4, "COR_1_4_C": 2, "COR_1_4_D": 6}
    for p in odd_primes(5, 60):
        for cid, b in pairs.items():
            if p <= b:
                continue
            ratio = special_case_sum(cid, p) / orr_sum_exact(b, p - 1)
            assert vp(ratio, p) == 0


def test_binomial_product_identities():
    chk = check_binomial_product_identities(40)
    assert chk.verdict is Verdict.PASS
    assert chk.required == 41
    assert check_binomial_product_identities(40) == chk


def test_identity_1_9():
    for p in (3, 5, 7, 13):
        for b in range(1, 8):
            if b % p == 0:
                with pytest.raises(ZeroDenominator):
                    check_identity_1_9(p, b)
                continue
            chk = check_identity_1_9(p, b)
            assert chk.verdict is Verdict.PASS
            assert str(chk.achieved) == "inf"


def test_tauraso():
    assert check_lemma_tauraso(5, 1).verdict is Verdict.PASS
    for p in (7, 11, 13):
        for x in (0, -1, 2, HALF, Fraction(2, 5)):
            assert check_lemma_tauraso(p, x).passed
    with pytest.raises(BadPrime):
        check_lemma_tauraso(3, 1)


def test_maopan_both_branches():
    notes = set()
    for p in (5, 7, 11):
        for a in (Fraction(1, 2), Fraction(1, 3), Fraction(-2, 3), Fraction(3, 4)):
            for b in (Fraction(1, 2), Fraction(2, 5), Fraction(-1, 6)):
                if p in (a.denominator, b.denominator) or (b.denominator % p == 0):
                    continue
                chk = check_lemma_maopan(p, a, b)
                assert chk.passed, chk.describe()
                notes.add(chk.note.split(" (")[0])
    assert notes == {"branch s<p", "branch s>=p"}


def test_lemma_2_3():
    assert check_lemma_2_3(17, 4).passed
    assert check_lemma_2_3(13, 4).verdict is Verdict.SKIPPED
    with pytest.raises(ValueError):
        check_lemma_2_3(7, 1)


def test_case2():
    for p in (5, 7, 11, 13):
        for t in (0, 1, -1, 2):
            for z in (1, 2, HALF):
                chk = check_case2_expansions(p, t, z)
                assert chk.passed, chk.describe()
    assert len(case2_expansions(7, Fraction(1), Fraction(2))) == 3
    with pytest.raises(BadPrime):
        check_case2_expansions(3, 0, 1)


def test_conjecture_examples():
    assert conjecture_valuations(7, 3, 2) == (conjecture_valuations(7, 3, 2)[0], 0)
    vs, vd = conjecture_valuations(7, 3, 2)
    assert (vs.value, vd) == (2, 0)
    vs, vd = conjecture_valuations(5, 2, 3)
    assert (vs.value, vd) == (4, 2)
    vs, vd = conjecture_valuations(3, 4, 1)
    assert (vs.value, vd) == (3, 1)
    chk = explore_conjecture(7, 3, 2)
    assert chk.passed and chk.exploratory
    assert not explore_conjecture(3, 4, 1).exploratory


def test_conjecture_padic_route_agrees():
    for p, b, n in ((7, 3, 2), (5, 2, 3), (13, 4, 2), (11, 3, 2), (3, 4, 1)):
        ex = conjecture_valuations(p, b, n, "exact")
        pa = conjecture_valuations(p, b, n, "padic")
        assert ex == pa


def test_conjecture_n1_consistent_with_corollary():
    for p in odd_primes(3, 60):
        for b in (2, 3, 4, 6):
            if b % p == 0:
                continue
            cor = check_corollary_b(p, b)
            conj = explore_conjecture(p, b, 1)
            assert cor.verdict is conj.verdict
            if cor.hypothesis_met:
                vs, vd = conjecture_valuations(p, b, 1)
                assert vs == cor.achieved


def test_conjecture_b1_undefined():
    with pytest.raises(DivisionUndefined):
        explore_conjecture(7, 1, 2)


def test_corollary_follows_from_components():
    # the exact identity, the key lemma and both theorem-level congruences hold; so does the corollary
    for p in odd_primes(5, 60):
        for b in range(2, 9):
            if b % p == 0 or not b_gate(p, b)[0]:
                continue
            assert check_identity_1_9(p, b).passed
            assert check_lemma_2_3(p, b).passed
            alpha = Fraction(1, b)
            assert check_theorem_main(p, 2 * alpha, 1).verdict is not Verdict.FAIL
            assert check_clausen_congruence(p, 2 * alpha, 1).verdict is not Verdict.FAIL
            assert check_corollary_b(p, b).passed
