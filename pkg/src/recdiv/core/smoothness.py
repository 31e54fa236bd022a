from __future__ import annotations
import math
from functools import lru_cache
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np
from sympy import factorint, isprime, perfect_power, pollard_rho

from ..schemas.reports import FactorList, PiSmoothRow, PsiReport
from .config import settings
from .errors import BudgetExceeded, PreconditionError
from .logging import get_logger

log = get_logger(__name__)

SEGMENT = 1 << 20


def log1(t: float) -> float:
    """max(log t, 1); keeps iterated logs total."""
    if t <= 1:
        return 1.0
    return max(math.log(t), 1.0)


def big_l(x: float) -> float:
    """L(x) = exp(sqrt(log1 x * log1 log1 x))."""
    if x < 1:
        raise PreconditionError("L(x) needs x >= 1")
    lx = log1(x)
    return math.exp(math.sqrt(lx * log1(lx)))


def primes_up_to(limit: int) -> np.ndarray:
    if limit < 2:
        return np.array([], dtype=np.int64)
    is_prime = np.ones(limit + 1, dtype=bool)
    is_prime[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if is_prime[p]:
            is_prime[p * p :: p] = False
    return np.flatnonzero(is_prime).astype(np.int64)


class SmoothSieve:
    """
    Smallest-prime-factor table for 0..limit.

    spf[n] is the least prime dividing n (spf[1] = 1). Read-only once built,
    so one instance can serve any number of factorize calls.
    """

    def __init__(self, limit: int) -> None:
        if limit < 2:
            raise PreconditionError("sieve limit must be >= 2")
        if limit > settings.SIEVE_LIMIT:
            raise BudgetExceeded(f"sieve limit {limit} exceeds SIEVE_LIMIT={settings.SIEVE_LIMIT}")
        dtype = np.int32 if limit < 2**31 else np.int64
        spf = np.zeros(limit + 1, dtype=dtype)
        for p in range(2, math.isqrt(limit) + 1):
            if spf[p] == 0:
                seg = spf[p * p :: p]
                seg[seg == 0] = p
        rest = np.flatnonzero(spf == 0)
        spf[rest] = rest
        spf[0], spf[1] = 0, 1
        self.limit = limit
        self.spf = spf
        log.debug("sieve.built limit=%d", limit)

    def factor(self, n: int) -> FactorList:
        if not 1 <= n <= self.limit:
            raise PreconditionError(f"{n} outside sieve range [1, {self.limit}]")
        counts: Dict[int, int] = {}
        while n > 1:
            p = int(self.spf[n])
            counts[p] = counts.get(p, 0) + 1
            n //= p
        return _factor_list(counts)


@lru_cache(maxsize=4)
def shared_sieve(limit: int) -> SmoothSieve:
    return SmoothSieve(limit)


def _factor_list(counts: Dict[int, int]) -> FactorList:
    factors = sorted(counts.items())
    n = math.prod(p**e for p, e in factors)
    return FactorList(n=n, factors=factors)


def _split(m: int, seed: int, max_steps: int) -> Optional[Tuple[int, int]]:
    pp = perfect_power(m)
    if pp:
        b = int(pp[0])
        return b, m // b
    d = pollard_rho(m, seed=seed, max_steps=max_steps)
    if d is None or d in (1, m):
        return None
    return int(d), int(m // d)


def factorize_partial(
    n: int,
    *,
    seed: Optional[int] = None,
    trial_limit: Optional[int] = None,
    max_steps: Optional[int] = None,
) -> Tuple[FactorList, int]:
    """
    Trial division up to trial_limit, then seeded Pollard rho on composite cofactors.

    Returns (prime part found, unfactored cofactor); the cofactor is 1 on success.
    """
    if n < 1:
        raise PreconditionError("n must be >= 1")
    seed = settings.SEED if seed is None else seed
    trial_limit = settings.TRIAL_LIMIT if trial_limit is None else trial_limit
    max_steps = settings.RHO_MAX_STEPS if max_steps is None else max_steps

    counts: Dict[int, int] = {}
    stuck = 1
    pending: List[int] = []
    for q, e in factorint(n, limit=trial_limit, use_rho=False, use_pm1=False).items():
        pending.extend([int(q)] * int(e))
    while pending:
        m = pending.pop()
        if m == 1:
            continue
        if isprime(m):
            counts[m] = counts.get(m, 0) + 1
            continue
        parts = _split(m, seed, max_steps)
        if parts is None:
            log.warning("factorize.rho_gave_up digits=%d", len(str(m)))
            stuck *= m
            continue
        pending.extend(parts)
    return _factor_list(counts), stuck


def factorize(n: int, *, seed: Optional[int] = None, sieve: Optional[SmoothSieve] = None) -> FactorList:
    """Complete factorization; sieve lookup when n is inside the sieve range."""
    if n < 1:
        raise PreconditionError("n must be >= 1")
    if sieve is not None and n <= sieve.limit:
        return sieve.factor(n)
    found, rest = factorize_partial(n, seed=seed)
    if rest != 1:
        raise BudgetExceeded(f"could not factor a {len(str(rest))}-digit cofactor of n")
    return found


def _smooth_mask(lo: int, hi: int, primes: Sequence[int]) -> np.ndarray:
    # True at i iff lo + i (in [lo, hi)) has every prime factor in primes
    rem = np.arange(lo, hi, dtype=np.int64)
    for p in primes:
        q = p
        while q < hi:
            rem[(-lo) % q :: q] //= p
            q *= p
    return rem == 1


def psi(x: float, y: float) -> PsiReport:
    """Psi(x, y) = #{n <= x : P(n) <= y} by a segmented divide-out sieve."""
    if x < 1 or y < 1:
        raise PreconditionError("psi needs x >= 1 and y >= 1")
    xi, yi = int(x), int(y)
    if yi < 2:
        count = 1
    elif yi >= xi:
        count = xi
    else:
        primes = primes_up_to(yi).tolist()
        count = 0
        for lo in range(1, xi + 1, SEGMENT):
            hi = min(lo + SEGMENT, xi + 1)
            count += int(np.count_nonzero(_smooth_mask(lo, hi, primes)))

    v = ref = None
    if y > 1 and x > 1:
        v = math.log(x) / math.log(y)
        ref = x * math.exp(-v * math.log(v))
    log.debug("psi.done x=%d y=%d count=%d", xi, yi, count)
    return PsiReport(x=xi, y=yi, count=count, v=v, reference=ref)


def smooth_primes(x: int, y: int) -> List[int]:
    """Primes p <= x with p^2 - 1 = (p - 1)(p + 1) y-smooth."""
    if x < 2 or y < 2:
        raise PreconditionError("pi_smooth needs x >= 2 and y >= 2")
    x, y = int(x), int(y)
    # only primes <= x + 1 can divide p - 1 or p + 1
    base = primes_up_to(min(y, x + 1)).tolist()
    out: List[int] = []
    for lo in range(2, x + 1, SEGMENT):
        hi = min(lo + SEGMENT, x + 1)
        # mask covers lo - 1 .. hi
        mask = _smooth_mask(lo - 1, hi + 1, base)
        for p in primes_in_range(lo, hi):
            if mask[p - lo] and mask[p - lo + 2]:
                out.append(p)
    return out


def primes_in_range(lo: int, hi: int) -> List[int]:
    """Primes in [lo, hi) by a segmented sieve over base primes up to sqrt(hi)."""
    if hi <= 2:
        return []
    lo = max(lo, 2)
    mask = np.ones(hi - lo, dtype=bool)
    for p in primes_up_to(math.isqrt(hi - 1)).tolist():
        start = max(p * p, ((lo + p - 1) // p) * p)
        mask[start - lo :: p] = False
    return (np.flatnonzero(mask) + lo).tolist()


def pi_smooth(x: int, y: int) -> int:
    """Pi(x, y): primes p <= x with p^2 - 1 y-smooth."""
    return len(smooth_primes(x, y))


def pi_smooth_table(y: int, vs: Iterable[float] = (1.1, 4 / 3)) -> List[PiSmoothRow]:
    """Pi(y^v, y) and Pi(y^v, y) / y^v per v; tabulated only."""
    rows = []
    for v in vs:
        x = int(y**v)
        count = pi_smooth(x, y) if x >= 2 else 0
        rows.append(PiSmoothRow(y=y, v=v, x=x, count=count, ratio=count / y**v))
    return rows


def has_large_proper_prime_power(n: int, y: float, *, sieve: Optional[SmoothSieve] = None) -> bool:
    """True iff p^e | n for some prime p, e >= 2, p^e > y."""
    if n < 1:
        raise PreconditionError("n must be >= 1")
    return any(e >= 2 and p**e > y for p, e in factorize(n, sieve=sieve).factors)
