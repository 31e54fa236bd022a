from __future__ import annotations
import math
from concurrent.futures import ProcessPoolExecutor
from typing import Dict, List, Literal, Optional, Sequence, Tuple

from sympy import Poly, symbols

from ..schemas.recurrence import LucasSpec, RecurrenceSpec
from ..schemas.reports import (
    ConstructionCertificate,
    PrimitiveFactors,
    RemarkReport,
    SpecialPrimeSet,
)
from .errors import PreconditionError, SpecError
from .finite_field import splits_linearly
from .logging import get_logger
from .lucas import as_lucas, z_prime
from .modular import divides_term, period_mod, term_exact, term_mod
from .recurrence import char_poly, discriminant
from .smoothness import factorize, factorize_partial, primes_in_range, shared_sieve

log = get_logger(__name__)

RMode = Literal["all", "exact"]


def _remark_spec() -> RecurrenceSpec:
    # u_n = 10^n - 7^n - 2*5^n - 1, roots 10, 7, 5, 1
    X = symbols("X")
    high = Poly((X - 10) * (X - 7) * (X - 5) * (X - 1), X).all_coeffs()
    coeffs = [-int(c) for c in high[1:]]
    init = [10**n - 7**n - 2 * 5**n - 1 for n in range(4)]
    return RecurrenceSpec(coeffs=coeffs, init=init)


REMARK_SPEC = _remark_spec()


def m_y(y: float) -> int:
    """lcm(1, 2, ..., floor(y))."""
    if y < 1:
        raise PreconditionError("M_y needs y >= 1")
    return math.lcm(*range(1, int(y) + 1))


def _is_special(p: int, y: float, sieve) -> bool:
    fl_minus = factorize(p - 1, sieve=sieve)
    fl_plus = factorize(p + 1, sieve=sieve)
    exps: Dict[int, int] = dict(fl_minus.factors)
    for q, e in fl_plus.factors:
        exps[q] = exps.get(q, 0) + e
    if max(exps) > y:
        return False
    return not any(e >= 2 and q**e > y for q, e in exps.items())


def special_primes(y: float, z: float) -> SpecialPrimeSet:
    """
    Primes p in [y+1, z] with p^2 - 1 y-smooth and free of proper prime
    powers q > y; equivalently (p^2 - 1) | M_y.
    """
    if not 3 <= y < z:
        raise PreconditionError("special primes need 3 <= y < z")
    lo, hi = math.ceil(y + 1), int(z)
    primes: List[int] = []
    if hi >= lo:
        sieve = shared_sieve(hi + 1)
        primes = [p for p in primes_in_range(lo, hi + 1) if _is_special(p, y, sieve)]
    return SpecialPrimeSet(y=y, z=z, primes=primes)


def _subset_products(primes: Sequence[int], bound: int, size: Optional[int]) -> List[List[int]]:
    # squarefree products <= bound, optionally of exactly `size` primes; s = 1 always kept
    out: List[List[int]] = [[]]

    def walk(start: int, prod: int, chosen: List[int]) -> None:
        for i in range(start, len(primes)):
            nxt = prod * primes[i]
            if nxt > bound:
                break
            pick = chosen + [primes[i]]
            if size is None or len(pick) == size:
                out.append(pick)
            if size is None or len(pick) < size:
                walk(i + 1, nxt, pick)

    if size != 0:
        walk(0, 1, [])
    return out


def _r_exact(x: int, y: float, z: float) -> int:
    return max(math.floor((math.log(x) - 2 * y) / math.log(z)), 0)


def default_y(x: int) -> float:
    """log x / log log x."""
    if x < 16:
        raise PreconditionError("default y needs x >= 16")
    return math.log(x) / math.log(math.log(x))


def lucas_special_members(
    x: int, y: Optional[float] = None, r_mode: RMode = "all", v: float = 4 / 3
) -> List[ConstructionCertificate]:
    """
    Numbers n = 2 s M_y <= x with s a squarefree product of special primes
    from (y, y^v]; y defaults to log x / log log x. Certificates come back
    unverified; see verify_membership.
    """
    if y is None:
        y = default_y(x)
    if y < 3:
        raise PreconditionError("lucas-special construction needs y >= 3")
    M = m_y(y)
    base = 2 * M
    if base > x:
        raise PreconditionError(f"x={x} is below 2 M_y = {base}")
    z = y**v
    P = special_primes(y, z).primes
    size = _r_exact(x, y, z) if r_mode == "exact" else None
    certs = []
    for s in _subset_products(P, x // base, size):
        n = base * math.prod(s)
        certs.append(
            ConstructionCertificate(
                n=n, kind="lucas-special", witness={"y": y, "M_y": M, "s": s, "z": z}
            )
        )
    certs.sort(key=lambda c: c.n)
    log.debug("constructions.lucas_special x=%d y=%s count=%d", x, y, len(certs))
    return certs


def lucas_special_count(
    x: int, y: Optional[float] = None, v: float = 4 / 3, r_mode: RMode = "exact"
) -> Tuple[int, int]:
    """(#L_v(x), r) for comparison with C(#P, r)."""
    if y is None:
        y = default_y(x)
    r = _r_exact(x, y, y**v)
    return len(lucas_special_members(x, y, r_mode=r_mode, v=v)), r


def _check(args: Tuple[RecurrenceSpec, int]) -> bool:
    spec, n = args
    return divides_term(spec, n)


def verify_membership(
    spec: RecurrenceSpec,
    certs: Sequence[ConstructionCertificate],
    *,
    workers: int = 1,
) -> List[ConstructionCertificate]:
    """Recompute n | u_n for every certificate; duplicates by n are dropped."""
    kinds = {c.kind for c in certs}
    ls = as_lucas(spec)
    if "lucas-special" in kinds and (ls is None or abs(ls.a2) != 1):
        raise SpecError("lucas-special members are only claimed for Lucas sequences with a2 = +-1")
    if "discriminant-power" in kinds and ls is None:
        raise SpecError("discriminant-power members need a Lucas sequence")

    uniq: Dict[int, ConstructionCertificate] = {}
    for c in certs:
        uniq.setdefault(c.n, c)
    ordered = sorted(uniq.values(), key=lambda c: c.n)
    jobs = [(spec, c.n) for c in ordered]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            flags = list(ex.map(_check, jobs))
    else:
        flags = [_check(j) for j in jobs]

    out = []
    for c, ok in zip(ordered, flags):
        if not ok:
            log.warning("constructions.counterexample kind=%s n=%d", c.kind, c.n)
        out.append(c.model_copy(update={"verified": ok}))
    return out


def primitive_prime_factors(ls: LucasSpec, n: int, *, seed: Optional[int] = None) -> PrimitiveFactors:
    """
    Primes of u_n that divide neither delta nor any earlier term.

    A prime p | u_n divides an earlier term iff z(p) < n. Survivors not
    congruent to +-1 mod n are listed separately.
    """
    if n < 1:
        raise PreconditionError("n must be >= 1")
    u = abs(term_exact(ls.recurrence(), n))
    if u == 0:
        raise PreconditionError(f"u_{n} = 0")
    found, rest = factorize_partial(u, seed=seed)
    primes = [
        p for p, _ in found.factors if ls.delta % p != 0 and ls.a2 % p != 0 and z_prime(ls, p).z == n
    ]
    bad = [p for p in primes if p % n not in (1 % n, n - 1)]
    if rest != 1:
        log.warning("constructions.primitive_incomplete n=%d", n)
    return PrimitiveFactors(n=n, primes=primes, complete=rest == 1, congruence_violations=bad)


def discriminant_power_members(
    ls: LucasSpec, x: int, e: int = 2, *, seed: Optional[int] = None
) -> List[ConstructionCertificate]:
    """
    r^j <= x for the least prime r | delta, plus r^e * prod p_i^b_i <= x over
    primitive primes p_i of u_{r^e}, with b_i <= log(x / r^e) / (k log p_i).
    """
    if ls.delta == 1:
        raise PreconditionError("delta = 1: N_u = {1}, nothing to construct")
    if e < 1:
        raise PreconditionError("e must be >= 1")
    r = factorize(abs(ls.delta)).factors[0][0]
    spec = ls.recurrence()
    certs: Dict[int, ConstructionCertificate] = {}

    j, q = 1, r
    while q <= x:
        certs[q] = ConstructionCertificate(n=q, kind="discriminant-power", witness={"r": r, "j": j})
        j, q = j + 1, q * r

    base = r**e
    if base <= x:
        pf = primitive_prime_factors(ls, base, seed=seed)
        k = len(pf.primes)
        caps = [math.floor(math.log(x / base) / (k * math.log(p))) for p in pf.primes]
        combos: List[Tuple[int, List[int]]] = [(base, [])]
        for p, cap in zip(pf.primes, caps):
            combos = [
                (n * p**b, betas + [b])
                for n, betas in combos
                for b in range(cap + 1)
                if n * p**b <= x
            ]
        for n, betas in combos:
            certs.setdefault(
                n,
                ConstructionCertificate(
                    n=n,
                    kind="discriminant-power",
                    witness={"r": r, "e": e, "primes": pf.primes, "betas": betas, "complete": pf.complete},
                ),
            )
    out = [
        c.model_copy(update={"verified": divides_term(spec, c.n)})
        for c in sorted(certs.values(), key=lambda c: c.n)
    ]
    return out


def zero_term_members(spec: RecurrenceSpec, n0: int, x: int) -> List[ConstructionCertificate]:
    """
    p * n0 <= x for primes p = 1 (mod t), t the period of u mod n0, with
    f_u split into linear factors mod p and p > n0 |delta|.
    """
    if n0 < 1:
        raise PreconditionError("n0 must be >= 1")
    if term_exact(spec, n0) != 0:
        raise PreconditionError(f"u_{n0} != 0")
    if math.gcd(n0, spec.a_k) != 1 and spec != REMARK_SPEC:
        raise PreconditionError(
            f"gcd(n0, a_k) = {math.gcd(n0, spec.a_k)} > 1; coprimality is not always "
            "necessary but only REMARK_SPEC is accepted without it"
        )
    rec = period_mod(spec, n0)
    t = rec.period
    f = char_poly(spec)
    bound = n0 * abs(discriminant(f))
    certs = []
    for p in primes_in_range(2, x // n0 + 1):
        if p <= bound or (p - 1) % t != 0 or not splits_linearly(f, p):
            continue
        n = p * n0
        mod_n0 = term_mod(spec, n, n0) == 0
        mod_p = term_mod(spec, n, p) == 0
        certs.append(
            ConstructionCertificate(
                n=n,
                kind="zero-term",
                witness={"p": p, "n0": n0, "t_n0": t, "preperiod": rec.preperiod, "mod_n0": mod_n0, "mod_p": mod_p},
                verified=mod_n0 and mod_p and divides_term(spec, n),
            )
        )
    return certs


def verify_remark_sequence(x: int) -> RemarkReport:
    """2p | u_{2p} for primes 11 <= p <= x; smaller primes recorded without a claim."""
    checked, failures = [], []
    below: Dict[int, bool] = {}
    for p in primes_in_range(2, x + 1):
        ok = divides_term(REMARK_SPEC, 2 * p)
        if p < 11:
            below[p] = ok
            continue
        checked.append(p)
        if not ok:
            failures.append(p)
    if failures:
        log.warning("constructions.remark_failures count=%d first=%d", len(failures), failures[0])
    return RemarkReport(
        x=x,
        coeffs=list(REMARK_SPEC.coeffs),
        init=list(REMARK_SPEC.init),
        checked=checked,
        failures=failures,
        below_range=below,
    )
