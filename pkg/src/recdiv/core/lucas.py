from __future__ import annotations
import math
from math import gcd, lcm
from typing import Optional

from sympy import divisors, factorint, isprime, legendre_symbol, primerange

from ..schemas.recurrence import LucasSpec, RecurrenceSpec
from ..schemas.reports import ApparitionIndex, QGammaReport, TIndexResult
from .errors import PreconditionError, SpecError
from .logging import get_logger
from .modular import term_mod
from .recurrence import validate_spec

log = get_logger(__name__)


def lucas_spec(a1: int, a2: int) -> LucasSpec:
    if a2 == 0:
        raise SpecError("a2 must be nonzero")
    if gcd(a1, a2) != 1:
        raise SpecError(f"gcd(a1, a2) = {gcd(a1, a2)}, Lucas pairs need coprime parameters")
    delta = a1 * a1 + 4 * a2
    if delta == 0:
        raise SpecError("discriminant a1^2 + 4 a2 is 0 (double root)")
    vr = validate_spec(RecurrenceSpec(coeffs=[a1, a2], init=[0, 1]))
    if vr.degenerate:
        raise SpecError(
            f"degenerate pair: root ratio is a root of unity of order {vr.degenerate_order}"
        )
    return LucasSpec(a1=a1, a2=a2, delta=delta)


def as_lucas(spec: RecurrenceSpec) -> Optional[LucasSpec]:
    """The Lucas pair behind spec, or None when spec is not a Lucas sequence."""
    if spec.order != 2 or list(spec.init) != [0, 1]:
        return None
    a1, a2 = spec.coeffs
    try:
        return lucas_spec(a1, a2)
    except SpecError:
        return None


def _require_prime(p: int) -> None:
    if not isprime(p):
        raise PreconditionError(f"{p} is not prime")


def _scan_z(spec: RecurrenceSpec, m: int, limit: int) -> Optional[int]:
    # state walk mod m, first l >= 1 with m | u_l
    a1, a2 = spec.coeffs
    prev, cur = 0, 1 % m
    for ell in range(1, limit + 1):
        if cur == 0:
            return ell
        prev, cur = cur, (a1 * cur + a2 * prev) % m
    return None


def z_prime(ls: LucasSpec, p: int) -> ApparitionIndex:
    """
    Rank of apparition of the prime p.

    z(p) = p when p | delta; otherwise z(p) divides p - (delta | p), so the
    divisors of that bound are tried in increasing order.
    """
    _require_prime(p)
    if ls.a2 % p == 0:
        raise PreconditionError(f"p={p} divides a2; the rank of apparition is undefined")
    spec = ls.recurrence()

    if p == 2:
        z = _scan_z(spec, 2, 3)
    elif ls.delta % p == 0:
        z = p if term_mod(spec, p, p) == 0 else None
    else:
        bound = p - legendre_symbol(ls.delta % p, p)
        z = next((d for d in divisors(bound) if term_mod(spec, d, p) == 0), None)

    if z is None:
        log.warning("lucas.z_prime.fallback p=%d", p)
        z = _scan_z(spec, p, p + 1)
        if z is None:
            raise PreconditionError(f"no index of appearance found for p={p}")
    return ApparitionIndex(modulus=p, z=z)


def z_prime_power(ls: LucasSpec, p: int, e: int) -> ApparitionIndex:
    """z(p^e) = z(p) p^j for the least j in [0, e-1] with p^e | u_{z(p) p^j}."""
    if e < 1:
        raise PreconditionError("exponent must be >= 1")
    zp = z_prime(ls, p).z
    if e == 1:
        return ApparitionIndex(modulus=p, z=zp)
    q = p**e
    spec = ls.recurrence()
    for j in range(e):
        cand = zp * p**j
        # every candidate divides z(p) p^(e-1)
        if term_mod(spec, cand, q) == 0:
            return ApparitionIndex(modulus=q, z=cand)
    raise PreconditionError(f"no index of appearance found for {p}^{e}")


def z_composite(ls: LucasSpec, m: int) -> ApparitionIndex:
    if m < 1:
        raise PreconditionError("m must be >= 1")
    if m == 1:
        return ApparitionIndex(modulus=1, z=1)
    if gcd(m, ls.a2) != 1:
        raise PreconditionError(f"gcd(m, a2) = {gcd(m, ls.a2)} > 1")
    z = 1
    for p, e in factorint(m).items():
        z = lcm(z, z_prime_power(ls, int(p), int(e)).z)
    return ApparitionIndex(modulus=m, z=z)


def t_lucas(ls: LucasSpec, p: int) -> TIndexResult:
    """T(p) = z(p) - 1; p | delta gives t = 0 with the flag set."""
    _require_prime(p)
    if ls.a2 % p == 0:
        raise PreconditionError(f"p={p} divides a2")
    if ls.delta % p == 0:
        return TIndexResult(p=p, t=0, divides_discriminant=True)
    z = z_prime(ls, p).z
    return TIndexResult(p=p, t=z - 1, witness=[z])


def q_gamma_set(ls: LucasSpec, x: int, gamma: float) -> QGammaReport:
    """Primes p <= x (p not dividing a2) with z(p) <= p^gamma, plus the T(p) < p^gamma count."""
    if not 0 < gamma < 1:
        raise PreconditionError("gamma must lie in (0, 1)")
    primes = []
    p_gamma = 0
    for p in primerange(2, int(x) + 1):
        if ls.a2 % p == 0:
            continue
        z = z_prime(ls, p).z
        bound = p**gamma
        if z <= bound:
            primes.append(p)
        t = 0 if ls.delta % p == 0 else z - 1
        if t < bound:
            p_gamma += 1
    ratio = len(primes) * math.log(x) / x ** (2 * gamma) if x >= 2 else 0.0
    return QGammaReport(x=int(x), gamma=gamma, primes=primes, density_ratio=ratio, p_gamma_count=p_gamma)


def somer_check(ls: LucasSpec) -> bool:
    """True iff delta = 1, in which case N_u = {1}."""
    return ls.delta == 1
