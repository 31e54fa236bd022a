from __future__ import annotations
from itertools import combinations, permutations, product

import numpy as np
import pytest
from sympy import primerange

from recdiv.core.errors import PreconditionError
from recdiv.core.finite_field import (
    FieldExtension,
    d_determinant,
    factor_mod_p,
    root_count_congruence,
    schur_quotient,
    small_t_census,
    splits_linearly,
    splitting_data,
    t_general,
)
from recdiv.core.lucas import lucas_spec, z_prime
from recdiv.core.recurrence import char_poly
from recdiv.schemas.recurrence import IntPolynomial, RecurrenceSpec

# ---- Test helpers ----

FIB = RecurrenceSpec(coeffs=[1, 1], init=[0, 1])
TWO_POW = RecurrenceSpec(coeffs=[3, -2], init=[-1, 0])
TRIB = RecurrenceSpec(coeffs=[1, 1, 1], init=[0, 0, 1])
PADOVAN = RecurrenceSpec(coeffs=[0, 1, 1], init=[1, 1, 1])  # disc -23
TETRA = RecurrenceSpec(coeffs=[1, 1, 1, 1], init=[0, 0, 0, 1])  # disc -563


def _poly(*high_first: int) -> IntPolynomial:
    return IntPolynomial.from_low_first(list(reversed(high_first)))


def _mul_mod(f, g, p):
    # low-first coefficient lists
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        for j, b in enumerate(g):
            out[i + j] = (out[i + j] + a * b) % p
    return out


def _linear_roots(factors, p):
    return {(-g.coefficients[0]) % p for g, _ in factors if g.degree == 1}


def _sign(perm) -> int:
    inv = sum(1 for i in range(len(perm)) for j in range(i + 1, len(perm)) if perm[i] > perm[j])
    return -1 if inv % 2 else 1


def _leibniz(F: FieldExtension, M):
    acc = ()
    for perm in permutations(range(len(M))):
        term = F.one()
        for i, j in enumerate(perm):
            term = F.mul(term, M[i][j])
        acc = F.add(acc, term) if _sign(perm) > 0 else F.sub(acc, term)
    return acc


def _complex_quotient(spec: RecurrenceSpec, xs) -> float:
    """D / V over C from numerically computed roots."""
    roots = np.roots([1] + [-a for a in spec.coeffs])
    k = spec.order
    D = np.linalg.det(np.array([[r**x for x in xs] for r in roots]))
    V = np.linalg.det(np.array([[r**x for x in range(k)] for r in roots]))
    return (D / V).real


def _naive_t_index(spec: RecurrenceSpec, p: int, cap: int) -> int:
    """
    Smallest T' with D(0, x_2..x_k) vanishing mod p but not over C, over all
    tuples of distinct entries in [1, T'].
    """
    sd = splitting_data(char_poly(spec), p, seed=0)
    F, k = sd.field, spec.order
    for top in range(1, cap + 1):
        for tup in product(range(1, top + 1), repeat=k - 1):
            if top not in tup or len(set(tup)) < k - 1:
                continue
            xs = (0,) + tup
            M = [[F.pow(r, x) for x in xs] for r in sd.roots]
            if not _leibniz(F, M) and abs(_complex_quotient(spec, xs)) > 0.5:
                return top - 1
    raise AssertionError("oracle cap reached")


# ---- factorization ----

def test_factor_golden_mod_11():
    fs = factor_mod_p(_poly(1, -1, -1), 11)
    assert [g.degree for g, _ in fs] == [1, 1]
    assert _linear_roots(fs, 11) == {4, 8}


def test_factor_golden_mod_13_irreducible():
    fs = factor_mod_p(_poly(1, -1, -1), 13)
    assert len(fs) == 1 and fs[0][0].degree == 2


def test_factor_rational_roots():
    assert _linear_roots(factor_mod_p(_poly(1, -3, 2), 7), 7) == {1, 2}


def test_factor_with_multiplicity():
    # (X - 1)^2 (X + 1) mod 5
    fs = factor_mod_p(_poly(1, -1, -1, 1), 5)
    assert sorted(m for _, m in fs) == [1, 2]


@pytest.mark.parametrize("p", [2, 3, 5, 7, 13, 31])
def test_factor_product_reproduces_input(p):
    f = _poly(1, 0, -3, 5, -1, 1, 2)
    prod = [1]
    for g, m in factor_mod_p(f, p, seed=1):
        for _ in range(m):
            prod = _mul_mod(prod, g.coefficients, p)
    assert prod == [c % p for c in f.coefficients]


def test_factor_ordering_is_seed_independent():
    f = _poly(1, 0, 0, 0, 0, 0, 0, 0, -1)  # X^8 - 1
    assert factor_mod_p(f, 17, seed=0) == factor_mod_p(f, 17, seed=99)


def test_factor_rejects_p_dividing_leading():
    with pytest.raises(PreconditionError):
        factor_mod_p(_poly(2, 1, 1), 2)


# ---- splitting field ----

def test_splitting_golden_mod_11():
    sd = splitting_data(_poly(1, -1, -1), 11)
    assert sd.field.d == 1
    assert set(sd.roots) == {(4,), (8,)}


def test_splitting_golden_mod_13_frobenius():
    f = _poly(1, -1, -1)
    sd = splitting_data(f, 13)
    F = sd.field
    assert F.d == 2
    r, s = sd.roots
    assert r != s
    assert F.pow(r, 13) == s
    assert not F.eval_int_poly(f, r) and not F.eval_int_poly(f, s)


def test_splitting_rational_roots():
    sd = splitting_data(_poly(1, -3, 2), 5)
    assert set(sd.roots) == {(1,), (2,)}


def test_splitting_tribonacci_closed_under_frobenius():
    for p in (3, 7, 13):
        sd = splitting_data(char_poly(TRIB), p)
        roots = set(sd.roots)
        assert len(roots) == 3
        assert {sd.field.pow(r, p) for r in roots} == roots


def test_splitting_reports_discriminant_and_leading_separately():
    with pytest.raises(PreconditionError, match="discriminant"):
        splitting_data(_poly(1, -1, -1), 5)
    with pytest.raises(PreconditionError, match="leading"):
        splitting_data(_poly(3, 1, -1), 3)


# ---- determinants and T_u(p) ----

def test_determinant_examples():
    sd = splitting_data(_poly(1, -1, -1), 11)
    F = sd.field
    assert d_determinant(sd, [0, 10]) == ()
    assert d_determinant(sd, [0, 3]) != ()
    assert d_determinant(sd, [4, 4]) == ()
    assert d_determinant(sd, [0, 3]) == F.neg(d_determinant(sd, [3, 0]))


@pytest.mark.parametrize("p, t", [(11, 9), (2, 2), (7, 7)])
def test_t_general_fibonacci(p, t):
    assert t_general(FIB, p).t == t


def test_t_general_p_dividing_delta():
    res = t_general(FIB, 5)
    assert res.t == 0 and res.divides_discriminant


def test_lucas_bridge():
    ls = lucas_spec(1, 1)
    for p in primerange(2, 201):
        if p == 5:
            continue
        res = t_general(FIB, p)
        assert not res.capped
        assert res.t == z_prime(ls, p).z - 1


def test_t_general_tribonacci_matches_brute_force():
    res = t_general(TRIB, 7, cap=10**4)
    assert not res.capped
    assert res.t == _naive_t_index(TRIB, 7, cap=10**4)
    assert res.t >= 1


@pytest.mark.parametrize(
    "spec, xs, value",
    [
        (PADOVAN, (0, 1, 3), 0),  # e1 = a1 = 0
        (TETRA, (0, 1, 4, 5), 0),
        (TRIB, (0, 1, 3), 1),
        (TRIB, (0, 2, 3), -1),
        (TRIB, (0, 1, 1), 0),
        (TRIB, (0, 1, 2), 1),  # the Vandermonde itself
    ],
)
def test_schur_quotient_examples(spec, xs, value):
    assert schur_quotient(spec, xs) == value


def test_schur_quotient_fibonacci_is_the_sequence():
    fib = [0, 1]
    for _ in range(30):
        fib.append(fib[-1] + fib[-2])
    for n in range(1, 31):
        assert schur_quotient(FIB, (0, n)) == fib[n]


@pytest.mark.parametrize("spec", [PADOVAN, TRIB, TETRA])
def test_schur_quotient_matches_complex_determinant(spec):
    k = spec.order
    for tup in combinations(range(1, 9), k - 1):
        xs = (0,) + tup
        assert abs(schur_quotient(spec, xs) - _complex_quotient(spec, xs)) < 1e-6


def test_schur_quotient_matches_field_determinant():
    sd = splitting_data(char_poly(TRIB), 7, seed=0)
    for tup in combinations(range(1, 10), 2):
        xs = (0,) + tup
        assert (d_determinant(sd, xs) == ()) == (schur_quotient(TRIB, xs) % 7 == 0)


@pytest.mark.parametrize("spec, p", [(PADOVAN, 5), (PADOVAN, 7), (PADOVAN, 13), (TETRA, 3), (TETRA, 7)])
def test_t_general_matches_brute_force_with_integer_zeros(spec, p):
    res = t_general(spec, p, cap=40)
    assert not res.capped
    assert res.t == _naive_t_index(spec, p, cap=40)


@pytest.mark.parametrize("spec, primes", [(PADOVAN, [p for p in primerange(2, 60) if p != 23]), (TETRA, list(primerange(2, 30)))])
def test_t_general_witness_is_nonzero_over_integers(spec, primes):
    ts = set()
    for p in primes:
        res = t_general(spec, p)
        if res.capped:
            continue
        s = schur_quotient(spec, [0] + res.witness)
        assert s != 0 and s % p == 0
        ts.add(res.t)
    assert len(ts) > 1


def test_t_general_capped():
    res = t_general(FIB, 11, cap=3)
    assert res.capped and res.t == 3


def test_t_general_higher_order_rejects_p_dividing_delta():
    # Tribonacci discriminant -44 = -4 * 11
    with pytest.raises(PreconditionError):
        t_general(TRIB, 11)


@pytest.mark.parametrize(
    "poly, p, expected",
    [(_poly(1, -1, -1), 11, True), (_poly(1, -1, -1), 13, False), (_poly(1, -3, 2), 101, True)],
)
def test_splits_linearly(poly, p, expected):
    assert splits_linearly(poly, p) is expected


# ---- R_u(x, p) ----

@pytest.mark.parametrize(
    "spec, p, x, count",
    [(FIB, 11, 100, 10), (FIB, 11, 9, 0), (TWO_POW, 5, 100, 25)],
)
def test_root_count_examples(spec, p, x, count):
    assert root_count_congruence(spec, p, x).count == count


def test_root_count_comparison_value():
    x = 10**4
    for p in primerange(2, 201):
        if p == 5:
            continue
        rep = root_count_congruence(FIB, p, x)
        assert rep.count <= 2 * (x / rep.t_index + 1)


def test_small_t_census_fibonacci():
    rep = small_t_census(FIB, 100, 10)
    assert rep.primes == [2, 3, 7, 11, 13, 17, 89]
    assert rep.count == 7
