from __future__ import annotations
import math
import random

import pytest
from sympy import factorint, primerange

from recdiv.core import smoothness
from recdiv.core.errors import BudgetExceeded
from recdiv.core.smoothness import (
    SmoothSieve,
    big_l,
    factorize,
    factorize_partial,
    has_large_proper_prime_power,
    pi_smooth,
    pi_smooth_table,
    primes_in_range,
    psi,
    smooth_primes,
)

# ---- Test helpers ----


class DummyCfg:
    SIEVE_LIMIT = 100
    SEED = 0
    TRIAL_LIMIT = 1000
    RHO_MAX_STEPS = 10**5


def _largest(n: int) -> int:
    return max(factorint(n)) if n > 1 else 1


def _pi_smooth_oracle(x: int, y: int) -> int:
    return sum(1 for p in primerange(2, x + 1) if _largest(p * p - 1) <= y)


# ---- Tests ----

def test_factorize_examples():
    assert factorize(75025).factors == [(5, 2), (3001, 1)]
    one = factorize(1)
    assert one.factors == [] and one.largest == 1
    fl = factorize(120)
    assert fl.factors == [(2, 3), (3, 1), (5, 1)]
    assert (fl.omega, fl.tau, fl.largest) == (3, 16, 5)


def test_sieve_and_trial_paths_agree():
    sieve = SmoothSieve(10**5)
    for n in (1, 2, 97, 360, 65536, 99991, 10**5):
        assert sieve.factor(n) == factorize(n)


def test_factorize_round_trip_random():
    rng = random.Random(0)
    for _ in range(100):
        n = rng.randrange(1, 10**12)
        fl = factorize(n)
        assert math.prod(p**e for p, e in fl.factors) == n
        assert fl.factors == sorted(factorint(n).items())


def test_factorize_uses_rho_beyond_trial_limit(monkeypatch):
    monkeypatch.setattr(smoothness, "settings", DummyCfg)
    n = 1000003 * 1000033
    found, rest = factorize_partial(n)
    assert rest == 1
    assert found.factors == [(1000003, 1), (1000033, 1)]


def test_sieve_limit_is_enforced(monkeypatch):
    monkeypatch.setattr(smoothness, "settings", DummyCfg)
    with pytest.raises(BudgetExceeded):
        SmoothSieve(1000)


def test_largest_factor_multiplicative_on_coprime_pairs():
    sieve = SmoothSieve(10**4)
    for m in range(1, 200):
        for n in range(1, 50):
            if math.gcd(m, n) == 1:
                assert sieve.factor(m * n).largest == max(sieve.factor(m).largest, sieve.factor(n).largest)


@pytest.mark.parametrize("x, y, count", [(100, 5, 34), (10, 10, 10), (100, 1, 1), (1000, 1000, 1000)])
def test_psi_examples(x, y, count):
    assert psi(x, y).count == count


def test_psi_matches_brute_force_and_is_monotone():
    prev = 0
    for x in range(1, 400, 7):
        c = psi(x, 7).count
        assert c == sum(1 for n in range(1, x + 1) if _largest(n) <= 7)
        assert c >= prev
        prev = c


def test_psi_reference_column():
    rep = psi(10**4, 10)
    assert rep.v == pytest.approx(4.0)
    assert rep.reference == pytest.approx(10**4 * math.exp(-4 * math.log(4)))


@pytest.mark.parametrize("x, y, count", [(50, 5, 8), (2, 2, 0)])
def test_pi_smooth_examples(x, y, count):
    assert pi_smooth(x, y) == count


def test_pi_smooth_large_y_counts_every_prime():
    assert pi_smooth(100, 100 * 100) == 25


@pytest.mark.parametrize("x, y, count", [(50, 10**10, 15), (10**4, 10**12, 1229)])
def test_pi_smooth_huge_y_stays_within_x(x, y, count):
    # base primes above x + 1 are never needed
    assert pi_smooth(x, y) == count


@pytest.mark.parametrize("y", [10, 100])
def test_pi_smooth_matches_oracle(y):
    assert pi_smooth(10**4, y) == _pi_smooth_oracle(10**4, y)


def test_smooth_primes_listing():
    assert smooth_primes(50, 5) == [2, 3, 5, 7, 11, 17, 19, 31]


def test_pi_smooth_table_rows():
    rows = pi_smooth_table(30)
    assert [r.v for r in rows] == [1.1, 4 / 3]
    for r in rows:
        assert r.x == int(30**r.v)
        assert r.count == _pi_smooth_oracle(r.x, 30)
        assert r.ratio == pytest.approx(r.count / 30**r.v)


@pytest.mark.parametrize("n, y, expected", [(120, 7, True), (120, 8, False), (30, 2, False), (1, 1, False)])
def test_has_large_proper_prime_power(n, y, expected):
    assert has_large_proper_prime_power(n, y) is expected


def test_big_l_clamping():
    assert big_l(2) == pytest.approx(math.e)
    assert big_l(math.e**math.e) == pytest.approx(math.exp(math.sqrt(math.e)))
    assert big_l(10**6) < big_l(10**9)


def test_primes_in_range():
    assert primes_in_range(2, 30) == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
    assert primes_in_range(90, 110) == [97, 101, 103, 107, 109]
    assert len(primes_in_range(2, 10**5 + 1)) == 9592
