from __future__ import annotations
import math

import pytest
from sympy import primerange

from recdiv.core.constructions import (
    REMARK_SPEC,
    default_y,
    discriminant_power_members,
    lucas_special_count,
    lucas_special_members,
    m_y,
    primitive_prime_factors,
    special_primes,
    verify_membership,
    verify_remark_sequence,
    zero_term_members,
)
from recdiv.core.errors import PreconditionError, SpecError
from recdiv.core.lucas import lucas_spec, z_prime
from recdiv.core.modular import divides_term, term_mod
from recdiv.schemas.recurrence import RecurrenceSpec
from recdiv.schemas.reports import ConstructionCertificate

# ---- Test helpers ----

FIB = lucas_spec(1, 1)
PELL = lucas_spec(2, 1)
TWO_POW = RecurrenceSpec(coeffs=[3, -2], init=[-1, 0])
THREE_POW = RecurrenceSpec(coeffs=[4, -3], init=[-8, -6])


def _cert(n: int, kind: str = "lucas-special") -> ConstructionCertificate:
    return ConstructionCertificate(n=n, kind=kind)


# ---- M_y and special primes ----

@pytest.mark.parametrize("y, m", [(1, 1), (3, 6), (10, 2520), (10.9, 2520)])
def test_m_y(y, m):
    assert m_y(y) == m


@pytest.mark.parametrize(
    "y, z, primes",
    [(10, 100, [11, 13, 19, 29]), (7, 100, []), (10, 11, [11]), (10.5, 100, [13, 19, 29])],
)
def test_special_primes(y, z, primes):
    assert special_primes(y, z).primes == primes


def test_special_primes_agree_with_m_y_formulation():
    for y, z in [(5, 200), (10, 500), (10.5, 500), (12, 2000), (12.5, 2000), (20, 3000)]:
        M = m_y(y)
        expected = [p for p in primerange(math.ceil(y + 1), int(z) + 1) if M % (p * p - 1) == 0]
        assert special_primes(y, z).primes == expected


def test_special_primes_precondition():
    with pytest.raises(PreconditionError):
        special_primes(2, 10)


# ---- lucas-special ----

def test_lucas_special_small_cases():
    assert [c.n for c in lucas_special_members(100, 3)] == [12]
    assert [c.n for c in lucas_special_members(200, 5)] == [120]


def test_lucas_special_y10_includes_55440():
    certs = lucas_special_members(10**5, 10)
    ns = [c.n for c in certs]
    assert ns == [5040, 55440, 65520, 95760]
    assert certs[1].witness["s"] == [11]
    assert not any(c.verified for c in certs)


def test_lucas_special_members_all_verify():
    specs = [FIB.recurrence(), PELL.recurrence(), lucas_spec(3, -1).recurrence()]
    for y in (3, 5, 10):
        certs = lucas_special_members(10**6, y)
        for spec in specs:
            checked = verify_membership(spec, certs)
            assert len(checked) == len(certs)
            assert all(c.verified for c in checked)
    ns = {c.n for y in (3, 5, 10) for c in lucas_special_members(10**6, y)}
    assert {12, 120, 55440} <= ns


def test_lucas_special_exact_mode():
    # r = floor((log x - 2y) / log z) = 0 at this scale, so only s = 1
    certs = lucas_special_members(10**5, 10, r_mode="exact")
    assert [c.n for c in certs] == [5040]
    assert lucas_special_count(10**5, 10) == (1, 0)


def test_lucas_special_default_y():
    x = 10**5
    y = default_y(x)
    assert y == pytest.approx(math.log(x) / math.log(math.log(x)))
    certs = lucas_special_members(x)
    assert [c.n for c in certs] == [24]  # y ~ 4.71, M_y = 12, no special primes up to y^(4/3)
    assert certs[0].witness["y"] == pytest.approx(y)
    assert [c.n for c in certs] == [c.n for c in lucas_special_members(x, y)]
    assert verify_membership(FIB.recurrence(), certs)[0].verified
    # r = floor((log x - 2y) / log z) = 1; only s = 1 is available
    assert lucas_special_count(x) == (1, 1)


def test_default_y_needs_room():
    with pytest.raises(PreconditionError):
        default_y(10)


def test_lucas_special_needs_room():
    with pytest.raises(PreconditionError):
        lucas_special_members(100, 5)


def test_verify_membership_flags_corrupted_certificate():
    out = verify_membership(FIB.recurrence(), [_cert(13), _cert(12), _cert(12)])
    assert [(c.n, c.verified) for c in out] == [(12, True), (13, False)]


def test_verify_membership_pell_12():
    (c,) = verify_membership(PELL.recurrence(), [_cert(12)])
    assert c.verified


def test_verify_membership_rejects_a2_not_unit():
    with pytest.raises(SpecError):
        verify_membership(lucas_spec(1, 2).recurrence(), [_cert(12)])


# ---- primitive prime factors and discriminant powers ----

@pytest.mark.parametrize("n, primes", [(25, [3001]), (12, []), (7, [13])])
def test_primitive_prime_factors_fibonacci(n, primes):
    pf = primitive_prime_factors(FIB, n)
    assert pf.primes == primes
    assert pf.complete
    assert pf.congruence_violations == []


def test_primitive_factors_have_exact_rank():
    for ls in (FIB, PELL):
        for n in range(2, 41):
            pf = primitive_prime_factors(ls, n)
            for p in pf.primes:
                assert z_prime(ls, p).z == n
                assert p % n in (1, n - 1)


def test_discriminant_power_fibonacci():
    certs = discriminant_power_members(FIB, 10**5)
    ns = [c.n for c in certs]
    assert {5, 25, 125, 625, 3125, 15625, 78125, 75025} == set(ns)
    assert ns == sorted(ns)
    assert all(c.verified for c in certs)
    product = next(c for c in certs if c.n == 75025)
    assert product.witness["primes"] == [3001] and product.witness["betas"] == [1]


def test_discriminant_power_pell():
    certs = discriminant_power_members(PELL, 100)
    ns = [c.n for c in certs]
    assert {2, 4, 8, 16, 32, 64} <= set(ns)
    assert {12, 36} <= set(ns)
    assert all(c.verified for c in certs)


def test_discriminant_power_small_x_only_powers():
    assert [c.n for c in discriminant_power_members(FIB, 20)] == [5]


def test_discriminant_power_rejects_delta_one():
    with pytest.raises(PreconditionError):
        discriminant_power_members(lucas_spec(3, -2), 100)


# ---- zero-term members ----

def test_zero_term_two_pow_gives_primes():
    certs = zero_term_members(TWO_POW, 1, 10**4)
    assert [c.n for c in certs] == list(primerange(2, 10**4 + 1))
    assert all(c.verified for c in certs)


def test_zero_term_three_pow():
    certs = zero_term_members(THREE_POW, 2, 50)
    assert [c.n for c in certs] == [22, 26, 34, 38, 46]
    for c in certs:
        assert c.witness["t_n0"] == 1
        assert term_mod(THREE_POW, c.n, 2) == 0 and term_mod(THREE_POW, c.n, c.witness["p"]) == 0


def test_zero_term_three_pow_larger_range_verifies():
    certs = zero_term_members(THREE_POW, 2, 10**4)
    assert certs and all(c.verified and c.witness["mod_n0"] and c.witness["mod_p"] for c in certs)


def test_zero_term_rejects_nonzero_term():
    with pytest.raises(PreconditionError):
        zero_term_members(FIB.recurrence(), 1, 100)


def test_zero_term_rejects_n0_sharing_factor_with_a_k():
    # u_n = 2^n - 4 vanishes at n0 = 2, a_k = -2
    spec = RecurrenceSpec(coeffs=[3, -2], init=[-3, -2])
    with pytest.raises(PreconditionError):
        zero_term_members(spec, 2, 100)


def test_zero_term_accepts_remark_sequence():
    assert zero_term_members(REMARK_SPEC, 2, 1000) == []


# ---- remark sequence ----

def test_remark_spec_coefficients():
    assert REMARK_SPEC.coeffs == [23, -177, 505, -350]
    assert REMARK_SPEC.init == [-3, -8, 0, 406]


def test_verify_remark_sequence():
    rep = verify_remark_sequence(300)
    assert rep.failures == []
    assert rep.checked == list(primerange(11, 301))
    assert sorted(rep.below_range) == [2, 3, 5, 7]
    assert divides_term(REMARK_SPEC, 22)


def test_remark_closed_form():
    for n in range(4, 30):
        u = 10**n - 7**n - 2 * 5**n - 1
        assert term_mod(REMARK_SPEC, n, 10**9 + 7) == u % (10**9 + 7)
