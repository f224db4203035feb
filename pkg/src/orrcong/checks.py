"""One checker per claim: each returns a :class:`CongruenceCheck`.

Modular evaluation in Z/p^e is used only where every division is by a
p-unit.  Sums whose individual terms carry negative powers of ``p``
(harmonic-number corrections, the conjectural sums beyond ``k = p - 1``) are
formed exactly over Q and reduced at the end.
"""

from __future__ import annotations

import math
from fractions import Fraction

from .errors import BadPrime, DivisionUndefined, ZeroDenominator
from .gamma import gamma_p
from .hyper import HyperSpec, eval_truncated_exact, eval_truncated_mod
from .padic import (
    INF,
    PadicApprox,
    RationalLike,
    ResidueRing,
    binomial_rational,
    central_binomial,
    harmonic,
    least_residue,
    p_integral,
    to_mod,
    valuation,
)
from .records import CongruenceCheck, Valuation, difference_valuation, exact_valuation

HALF = Fraction(1, 2)


def parity_gate(alpha: Fraction, p: int) -> tuple[bool, str]:
    """Gate "<-alpha>_p is even"."""
    a = least_residue(-alpha, p)
    if a % 2:
        return False, f"<-alpha>_{p} = {a} is odd"
    return True, ""


def b_gate(p: int, b: int) -> tuple[bool, str]:
    """Gate "p = +-1 (mod b) and <-1/b>_p even"."""
    if b < 1:
        raise ValueError(f"b must be a positive integer, got {b}")
    if p % b not in (1 % b, (b - 1) % b):
        return False, f"p = {p % b} (mod {b}), not +-1"
    if b % p == 0:
        return False, f"{p} divides b"
    a = least_residue(Fraction(-1, b), p)
    if a % 2:
        return False, f"<-1/{b}>_{p} = {a} is odd"
    return True, ""


def _require_odd_prime(p: int) -> None:
    ResidueRing(p, 1)


# ---------------------------------------------------------------------------
# main theorem and the Clausen-type congruence


def theorem_sides(p: int, alpha: RationalLike, z: RationalLike, e: int = 2, truncation: int | None = None):
    """(L, R) residues of the main theorem in Z/p^e."""
    ring = ResidueRing(p, e)
    a = Fraction(alpha)
    n = p - 1 if truncation is None else truncation
    f1 = eval_truncated_mod(HyperSpec([a / 2, Fraction(3, 2) - a / 2], [1], z, n), ring)
    f2 = eval_truncated_mod(HyperSpec([a / 2, HALF - a / 2], [1], z, n), ring)
    g = eval_truncated_mod(HyperSpec([a, 2 - a, HALF], [1, 1], z, n), ring)
    return f1 * f2, g


def check_theorem_main(
    p: int, alpha: RationalLike, z: RationalLike, e: int = 2, *, truncation: int | None = None
) -> CongruenceCheck:
    """Product of two truncated 2F1 against a truncated 3F2, modulo p^2."""
    alpha = p_integral(alpha, p)
    z = p_integral(z, p)
    if e < 2:
        raise ValueError("the claim is modulo p^2; need e >= 2")
    lhs, rhs = theorem_sides(p, alpha, z, e, truncation)
    params = {"alpha": alpha, "z": z}
    note = ""
    if truncation is not None:
        params["truncation"] = truncation
        note = "perturbed truncation"
    return CongruenceCheck.modular(
        "THM_MAIN",
        p=p,
        e=e,
        params=params,
        achieved=difference_valuation(lhs.value, rhs.value, lhs.ring),
        required=2,
        gate=parity_gate(alpha, p),
        note=note,
    )


def check_clausen_congruence(p: int, alpha: RationalLike, z: RationalLike, e: int = 2) -> CongruenceCheck:
    """Square of a truncated 2F1 against a truncated 3F2, modulo p^2."""
    alpha = p_integral(alpha, p)
    z = p_integral(z, p)
    if e < 2:
        raise ValueError("the claim is modulo p^2; need e >= 2")
    ring = ResidueRing(p, e)
    n = p - 1
    f = eval_truncated_mod(HyperSpec([alpha / 2, HALF - alpha / 2], [1], z, n), ring)
    g = eval_truncated_mod(HyperSpec([alpha, 1 - alpha, HALF], [1, 1], z, n), ring)
    return CongruenceCheck.modular(
        "EQ_1_3",
        p=p,
        e=e,
        params={"alpha": alpha, "z": z},
        achieved=difference_valuation((f * f).value, g.value, ring),
        required=2,
        gate=parity_gate(alpha, p),
    )


# ---------------------------------------------------------------------------
# the binomial sum and its specializations


def orr_sum_exact(b: int, upto: int) -> Fraction:
    """Sum over k = 0..upto of (b^2 k + b - 1) C(2k,k)/4^k binom(-1/b,k) binom(1/b-1,k).

    Every term is put over the common denominator (4 b^2)^upto (upto!)^2, so
    the whole sum costs one gcd.
    """
    if b < 1:
        raise ValueError("b must be >= 1")
    if upto < 0:
        return Fraction(0)
    K = upto
    step = 4 * b * b
    # tail[k] = (K!/k!)^2 * step^(K-k)
    tail = [1] * (K + 1)
    for k in range(K - 1, -1, -1):
        tail[k] = tail[k + 1] * (k + 1) ** 2 * step
    num = 0
    rising = 1  # prod_{j<k} (1 + j b)(b - 1 + j b)
    cb = 1  # C(2k, k)
    for k in range(K + 1):
        c = b * b * k + b - 1
        if c and rising:
            num += c * cb * rising * tail[k]
        rising *= (1 + k * b) * (b - 1 + k * b)
        cb = cb * 2 * (2 * k + 1) // (k + 1)
    return Fraction(num, step**K * math.factorial(K) ** 2)


def orr_sum_padic(p: int, b: int, upto: int, precision: int) -> PadicApprox:
    """The same sum accumulated in fixed-precision p-adic arithmetic.

    Terms come from the ratio recurrence of (1/2)_k (1/b)_k (1-1/b)_k / k!^3,
    each factor rounded to ``precision`` unit digits.
    """
    def approx(x: RationalLike) -> PadicApprox:
        return PadicApprox.from_rational(x, p, precision)

    inv_b = Fraction(1, b)
    h = approx(1)
    total = approx(b - 1)
    for k in range(upto):
        ratio_num = (HALF + k) * (inv_b + k) * (1 - inv_b + k)
        if ratio_num == 0:
            break
        h = h * approx(ratio_num) / approx(Fraction((k + 1) ** 3))
        c = b * b * (k + 1) + b - 1
        total = total + h * approx(c)
    return total


def check_corollary_b(p: int, b: int, e: int = 2) -> CongruenceCheck:
    """The binomial sum up to p - 1 vanishes modulo p^2 under the b-gate."""
    _require_odd_prime(p)
    gate = (True, "") if b == 1 else b_gate(p, b)
    s = orr_sum_exact(b, p - 1)
    return CongruenceCheck.modular(
        "COR_1_3",
        p=p,
        e=e,
        params={"b": b},
        achieved=exact_valuation(s, p),
        required=e,
        gate=gate,
    )


def _integer_sum(p: int, coeff, ratio, base: int) -> Fraction:
    """Sum over k < p of coeff(k) * B_k / base^k, B_0 = 1, B_{k+1} = B_k * ratio(k).

    ``ratio`` returns an integer pair (num, den) whose quotient keeps B integral.
    """
    K = p - 1
    num = 0
    bk = 1
    for k in range(K + 1):
        num = num * base + coeff(k) * bk
        r_num, r_den = ratio(k)
        bk = bk * r_num // r_den
    return Fraction(num, base**K)


def _prod(*xs: int) -> int:
    return math.prod(xs)


# (claim id, residues of p admitted, modulus for the residues, coefficient,
#  ratio of consecutive binomial products, base, prime whose exponent is raised by one)
_SPECIAL_CASES = (
    # C(2k,k)^2 C(3k,k) = (2k)! (3k)! / k!^5
    (
        "COR_1_4_A",
        (1,),
        3,
        lambda k: 9 * k + 2,
        lambda k: (_prod(2 * k + 1, 2 * k + 2, 3 * k + 1, 3 * k + 2, 3 * k + 3), (k + 1) ** 5),
        108,
        None,
    ),
    # C(2k,k)^2 C(4k,2k) = (4k)! / k!^4
    (
        "COR_1_4_B",
        (1, 3),
        8,
        lambda k: 16 * k + 3,
        lambda k: (_prod(4 * k + 1, 4 * k + 2, 4 * k + 3, 4 * k + 4), (k + 1) ** 4),
        256,
        3,
    ),
    # C(2k,k)^3
    (
        "COR_1_4_C",
        (1,),
        4,
        lambda k: 4 * k + 1,
        lambda k: ((2 * (2 * k + 1)) ** 3, (k + 1) ** 3),
        64,
        None,
    ),
    # C(6k,3k) C(3k,k) C(2k,k) = (6k)! / ((3k)! k!^3)
    (
        "COR_1_4_D",
        (1,),
        4,
        lambda k: 36 * k + 5,
        lambda k: (
            _prod(*(6 * k + j for j in range(1, 7))),
            _prod(3 * k + 1, 3 * k + 2, 3 * k + 3) * (k + 1) ** 3,
        ),
        12**3,
        5,
    ),
)

SPECIAL_CASE_IDS = tuple(c[0] for c in _SPECIAL_CASES)


def special_case_sum(claim_id: str, p: int) -> Fraction:
    for cid, _, _, coeff, ratio, base, _ in _SPECIAL_CASES:
        if cid == claim_id:
            return _integer_sum(p, coeff, ratio, base)
    raise KeyError(claim_id)


def check_special_cases(p: int, claims: tuple[str, ...] = SPECIAL_CASE_IDS) -> list[CongruenceCheck]:
    """The b = 3, 4, 2, 6 specializations, each with its own gate and modulus."""
    _require_odd_prime(p)
    out = []
    for cid, residues, mod, coeff, ratio, base, raised in _SPECIAL_CASES:
        if cid not in claims:
            continue
        if p % mod in residues:
            gate = (True, "")
        else:
            admitted = ",".join(map(str, residues))
            gate = (False, f"p = {p % mod} (mod {mod}), need {admitted}")
        s = _integer_sum(p, coeff, ratio, base)
        out.append(
            CongruenceCheck.modular(
                cid,
                p=p,
                e=None,
                params={},
                achieved=exact_valuation(s, p),
                required=2 + (p == raised),
                gate=gate,
            )
        )
    return out


_BINOM_PRODUCTS = (
    (2, lambda k: binomial_rational(Fraction(-1, 2), k), lambda k: Fraction(math.comb(2 * k, k), (-4) ** k)),
    (
        3,
        lambda k: binomial_rational(Fraction(-1, 3), k) * binomial_rational(Fraction(-2, 3), k),
        lambda k: Fraction(math.comb(2 * k, k) * math.comb(3 * k, k), 27**k),
    ),
    (
        4,
        lambda k: binomial_rational(Fraction(-1, 4), k) * binomial_rational(Fraction(-3, 4), k),
        lambda k: Fraction(math.comb(2 * k, k) * math.comb(4 * k, 2 * k), 64**k),
    ),
    (
        6,
        lambda k: binomial_rational(Fraction(-1, 6), k) * binomial_rational(Fraction(-5, 6), k),
        lambda k: Fraction(math.comb(6 * k, 3 * k) * math.comb(3 * k, k), 432**k),
    ),
)


def check_binomial_product_identities(k_max: int) -> CongruenceCheck:
    """The four rational binomial products against their integer forms, k = 0..k_max.

    Achieved "valuation" is the number of leading k values where all four agree.
    """
    if k_max < 0:
        raise ValueError("k_max must be >= 0")
    agreed = k_max + 1
    bad = ""
    for k in range(k_max + 1):
        for b, lhs, rhs in _BINOM_PRODUCTS:
            if lhs(k) != rhs(k):
                agreed, bad = k, f"b = {b} fails at k = {k}"
                break
        if bad:
            break
    achieved = Valuation(agreed, bound=True) if not bad else Valuation(agreed)
    return CongruenceCheck.modular(
        "BINOM_IDS",
        p=None,
        e=None,
        params={"k_max": k_max},
        achieved=achieved,
        required=k_max + 1,
        note=bad or "leading k values in agreement",
    )


def identity_rhs(p: int, b: int) -> Fraction:
    """b * 3F2[1+1/b, 1-1/b, 1/2; 1, 1 | 1]_{p-1} - 3F2[1/b, 1-1/b, 1/2; 1, 1 | 1]_{p-1}."""
    inv = Fraction(1, b)
    big = eval_truncated_exact(HyperSpec([1 + inv, 1 - inv, HALF], [1, 1], 1, p - 1))
    small = eval_truncated_exact(HyperSpec([inv, 1 - inv, HALF], [1, 1], 1, p - 1))
    return b * big - small


def check_identity_1_9(p: int, b: int) -> CongruenceCheck:
    """The binomial sum equals a difference of two truncated 3F2, exactly."""
    _require_odd_prime(p)
    if b < 1:
        raise ValueError("b must be >= 1")
    if b % p == 0:
        raise ZeroDenominator(f"{p} divides b = {b}")
    diff = orr_sum_exact(b, p - 1) - identity_rhs(p, b)
    return CongruenceCheck.modular(
        "EQ_1_9",
        p=p,
        e=None,
        params={"b": b},
        achieved=exact_valuation(diff, p),
        required=INF,
        note="exact rational identity",
    )


# ---------------------------------------------------------------------------
# lemmas


def check_lemma_tauraso(p: int, x: RationalLike) -> CongruenceCheck:
    """Product of two central binomial sums against a harmonic-number sum, mod p."""
    if p <= 3:
        raise BadPrime(f"the harmonic-sum congruence is stated for p > 3, got {p}")
    ring = ResidueRing(p, 1)
    x = p_integral(x, p)
    xm = to_mod(x, p, p)
    s1 = s2 = 0
    xk = 1
    for k in range(1, p):
        xk = xk * xm % p
        cb = central_binomial(k) % p
        s1 += cb * xk
        s2 += cb * xk * pow(k, -1, p)
    lhs = s1 % p * (s2 % p) % p
    # exact: C(2k,k) carries the p that H_{2k-1} divides by once 2k - 1 >= p
    rhs = Fraction(0)
    xpow = Fraction(1)
    for k in range(1, p):
        xpow *= x
        if xpow:
            rhs += central_binomial(k) * (harmonic(2 * k - 1) - harmonic(k)) * xpow
    rhs *= 2
    return CongruenceCheck.modular(
        "LEM_TAURASO",
        p=p,
        e=1,
        params={"x": x},
        achieved=difference_valuation(lhs, to_mod(rhs, p, p), ring),
        required=1,
    )


def maopan_sides(p: int, alpha: Fraction, beta: Fraction, e: int = 2):
    ring = ResidueRing(p, e)
    s = least_residue(-alpha, p) + least_residue(-beta, p)
    lhs = eval_truncated_mod(HyperSpec([alpha, beta], [1], 1, p - 1), ring)
    ratio = gamma_p(1 - alpha - beta, ring) / (gamma_p(1 - alpha, ring) * gamma_p(1 - beta, ring))
    if s < p:
        rhs = -ratio
    else:
        rhs = ratio * (alpha + beta + s - p)
    return lhs, rhs, s


def check_lemma_maopan(p: int, alpha: RationalLike, beta: RationalLike, e: int = 2) -> CongruenceCheck:
    """Truncated 2F1(1) against a ratio of p-adic Gamma values, both branches."""
    alpha = p_integral(alpha, p)
    beta = p_integral(beta, p)
    lhs, rhs, s = maopan_sides(p, alpha, beta, e)
    return CongruenceCheck.modular(
        "LEM_MAOPAN",
        p=p,
        e=e,
        params={"alpha": alpha, "beta": beta},
        achieved=difference_valuation(lhs.value, rhs.value, lhs.ring),
        required=2,
        note=f"branch {'s<p' if s < p else 's>=p'} (s={s})",
    )


def check_lemma_2_3(p: int, b: int, e: int = 2) -> CongruenceCheck:
    """b * 3F2[1+1/b, ...]_{p-1} = 3F2[1/b, ...]_{p-1} modulo p^2 under the b-gate."""
    if b < 2:
        raise ValueError(f"b must be >= 2, got {b}")
    _require_odd_prime(p)
    gate = b_gate(p, b)
    if b % p == 0:
        return CongruenceCheck.modular(
            "LEM_2_3", p=p, e=e, params={"b": b}, achieved=Valuation(0), required=2, gate=gate
        )
    ring = ResidueRing(p, e)
    inv = Fraction(1, b)
    big = eval_truncated_mod(HyperSpec([1 + inv, 1 - inv, HALF], [1, 1], 1, p - 1), ring)
    small = eval_truncated_mod(HyperSpec([inv, 1 - inv, HALF], [1, 1], 1, p - 1), ring)
    return CongruenceCheck.modular(
        "LEM_2_3",
        p=p,
        e=e,
        params={"b": b},
        achieved=difference_valuation((big * b).value, small.value, ring),
        required=2,
        gate=gate,
    )


def case2_expansions(p: int, t: Fraction, z: Fraction) -> list[tuple[str, int, int]]:
    """(label, lhs, rhs) residues mod p^2 for the three alpha = 1 + pt expansions."""
    ring = ResidueRing(p, 2)
    m = ring.modulus
    alpha = 1 + p * t
    n = p - 1
    w = z / 4
    pt = p * t
    a_rhs = Fraction(0)
    b_sum = Fraction(0)
    c_rhs = Fraction(0)
    wk = Fraction(1)
    for k in range(n + 1):
        cb = central_binomial(k)
        term = cb * wk
        a_rhs += term * (1 + pt * harmonic(2 * k) - pt * harmonic(k))
        c_rhs += term
        if k >= 1:
            b_sum += term / k
        wk *= w
    b_rhs = 1 - pt / 2 * b_sum
    f_a = eval_truncated_mod(HyperSpec([alpha / 2, Fraction(3, 2) - alpha / 2], [1], z, n), ring)
    f_b = eval_truncated_mod(HyperSpec([alpha / 2, HALF - alpha / 2], [1], z, n), ring)
    f_c = eval_truncated_mod(HyperSpec([alpha, 2 - alpha, HALF], [1, 1], z, n), ring)
    return [
        ("2F1[a/2,3/2-a/2]", f_a.value, to_mod(a_rhs, p, m)),
        ("2F1[a/2,1/2-a/2]", f_b.value, to_mod(b_rhs, p, m)),
        ("3F2[a,2-a,1/2]", f_c.value, to_mod(c_rhs, p, m)),
    ]


def check_case2_expansions(p: int, t: RationalLike, z: RationalLike) -> CongruenceCheck:
    """Expansions of the three series at alpha = 1 + pt, modulo p^2."""
    if p <= 3:
        raise BadPrime(f"the alpha = 1 + pt expansions are stated for p > 3, got {p}")
    t = p_integral(t, p)
    z = p_integral(z, p)
    ring = ResidueRing(p, 2)
    parts = []
    worst = Valuation(ring.e, bound=True)
    for label, lhs, rhs in case2_expansions(p, t, z):
        v = difference_valuation(lhs, rhs, ring)
        parts.append(f"{label}: {v}")
        worst = min(worst, v, key=lambda x: (x.value, not x.bound))
    return CongruenceCheck.modular(
        "CASE2_EXP",
        p=p,
        e=2,
        params={"t": t, "z": z},
        achieved=worst,
        required=2,
        note="; ".join(parts),
    )


# ---------------------------------------------------------------------------
# the conjecture for general n


def conjecture_normalizer(b: int, n: int) -> Fraction:
    """n^2 binom(-1/b, n) binom(1/b - 1, n)."""
    inv = Fraction(1, b)
    return n * n * binomial_rational(-inv, n) * binomial_rational(inv - 1, n)


def conjecture_valuations(p: int, b: int, n: int, method: str = "exact") -> tuple[Valuation, int | float]:
    """(v_p(S), v_p(D)) for the conjectural sum S up to pn - 1 and normalizer D.

    With ``method="padic"`` the sum is accumulated in fixed precision; if it
    cancels completely the result is a lower bound, refined by doubling the
    precision until it settles the comparison against ``v_p(D) + 2``.
    """
    d = conjecture_normalizer(b, n)
    if d == 0:
        raise DivisionUndefined(f"normalizer vanishes for b = {b}, n = {n}")
    vd = valuation(d, p)
    upto = p * n - 1
    if method == "exact":
        return exact_valuation(orr_sum_exact(b, upto), p), vd
    if method != "padic":
        raise ValueError(f"unknown method {method!r}")
    precision = 8
    while True:
        s = orr_sum_padic(p, b, upto, precision)
        if not s.is_zero:
            return Valuation(s.valuation), vd
        if s.precision - vd >= 2 or precision >= MAX_PADIC_PRECISION:
            return Valuation(s.precision, bound=True), vd
        precision *= 2


MAX_PADIC_PRECISION = 256


def explore_conjecture(p: int, b: int, n: int, method: str = "exact") -> CongruenceCheck:
    """v_p(S) - v_p(D) >= 2 for the sum S up to pn - 1; exploratory for n >= 2."""
    _require_odd_prime(p)
    if n < 1:
        raise ValueError("n must be >= 1")
    gate = (True, "") if b == 1 else b_gate(p, b)
    vs, vd = conjecture_valuations(p, b, n, method)
    return CongruenceCheck.modular(
        "CONJ_1_2",
        p=p,
        e=None,
        params={"b": b, "n": n},
        achieved=Valuation(vs.value - vd, bound=vs.bound),
        required=2,
        gate=gate,
        note=f"v_p(S)={vs}, v_p(D)={vd}",
        exploratory=n >= 2,
    )
