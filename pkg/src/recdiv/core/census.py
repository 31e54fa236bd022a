from __future__ import annotations
import math
import os
import time
from bisect import bisect_right
from concurrent.futures import ProcessPoolExecutor
from typing import List, Optional, Sequence, Tuple

from sympy import factorint, isprime

from ..schemas.recurrence import PolySpec, RecurrenceSpec
from ..schemas.reports import CensusReport, MPartition, RatioRow
from .config import settings
from .errors import PreconditionError
from .finite_field import t_general
from .logging import get_logger
from .modular import term_exact, term_mod
from .recurrence import char_poly, discriminant, zero_terms
from .smoothness import big_l, factorize, log1, shared_sieve

log = get_logger(__name__)

MIN_BLOCK = 2048


def default_checkpoints(x: int) -> List[int]:
    """Powers of ten up to x, then x itself."""
    out, c = [], 10
    while c < x:
        out.append(c)
        c *= 10
    out.append(x)
    return out


def _normalize_checkpoints(x: int, checkpoints: Optional[Sequence[int]]) -> List[int]:
    if checkpoints is None:
        return default_checkpoints(x)
    cps = sorted(set(int(c) for c in checkpoints))
    if not cps or cps[0] < 1 or cps[-1] > x:
        raise PreconditionError(f"checkpoints must lie in [1, {x}]")
    return cps


def _member(spec: RecurrenceSpec, n: int, g: Optional[Tuple[int, ...]]) -> bool:
    if g is None:
        return term_mod(spec, n, n) == 0
    gn = 0
    for c in reversed(g):
        gn = gn * n + c
    gn = abs(gn)
    if gn == 0:
        # only 0 is divisible by 0
        return term_exact(spec, n) == 0
    return term_mod(spec, n, gn) == 0


def _scan_block(args: Tuple[RecurrenceSpec, int, int, Optional[Tuple[int, ...]]]) -> List[int]:
    spec, lo, hi, g = args
    return [n for n in range(lo, hi) if _member(spec, n, g)]


def _blocks(x: int, workers: int) -> List[Tuple[int, int]]:
    size = max(MIN_BLOCK, -(-x // (workers * 4)))
    return [(lo, min(lo + size, x + 1)) for lo in range(1, x + 1, size)]


def resolve_workers(workers: Optional[int]) -> int:
    if workers is None:
        workers = settings.WORKERS
    if workers is None:
        workers = os.cpu_count() or 1
    return max(1, workers)


def scan_members(
    spec: RecurrenceSpec,
    x: int,
    *,
    g: Optional[PolySpec] = None,
    workers: Optional[int] = None,
) -> List[int]:
    """
    Sorted n in [1, x] with n | u_n (or |g(n)| | u_n when g is given).

    Contiguous blocks go to a process pool; results are concatenated in block
    order so the output does not depend on the worker count.
    """
    if x < 1:
        raise PreconditionError("x must be >= 1")
    workers = resolve_workers(workers)
    gt = tuple(g.coefficients) if g is not None else None
    jobs = [(spec, lo, hi, gt) for lo, hi in _blocks(x, workers)]
    if workers == 1 or len(jobs) == 1:
        parts = [_scan_block(j) for j in jobs]
    else:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            parts = list(ex.map(_scan_block, jobs))
    return [n for part in parts for n in part]


def _report(
    kind: str,
    spec: RecurrenceSpec,
    x: int,
    checkpoints: List[int],
    members: List[int],
    retention_cap: Optional[int],
    started: float,
    **extra,
) -> CensusReport:
    cap = settings.RETENTION_CAP if retention_cap is None else retention_cap
    counts = [bisect_right(members, c) for c in checkpoints]
    truncated = len(members) > cap
    if truncated:
        log.warning("census.counts_only kind=%s members=%d cap=%d", kind, len(members), cap)
    elapsed = time.perf_counter() - started
    log.info("census.done kind=%s x=%d count=%d elapsed=%.3f", kind, x, counts[-1], elapsed)
    return CensusReport(
        kind=kind,
        spec_echo=spec.model_dump(),
        x=x,
        checkpoints=checkpoints,
        counts=counts,
        members=None if truncated else members,
        truncated=truncated,
        extra=extra,
        elapsed_s=elapsed,
    )


def census(
    spec: RecurrenceSpec,
    x: int,
    checkpoints: Optional[Sequence[int]] = None,
    *,
    workers: Optional[int] = None,
    retention_cap: Optional[int] = None,
) -> CensusReport:
    """N_u(x) with counts at each checkpoint."""
    started = time.perf_counter()
    cps = _normalize_checkpoints(x, checkpoints)
    members = scan_members(spec, x, workers=workers)
    return _report("N", spec, x, cps, members, retention_cap, started)


def is_zero_multiple(n: int, zeros: Sequence[int]) -> bool:
    """n = p * n0 for a prime p and some n0 in zeros."""
    return any(n % n0 == 0 and isprime(n // n0) for n0 in zeros)


def census_excluding_zero_multiples(
    spec: RecurrenceSpec,
    x: int,
    zero_bound: Optional[int] = None,
    checkpoints: Optional[Sequence[int]] = None,
    *,
    workers: Optional[int] = None,
    retention_cap: Optional[int] = None,
) -> CensusReport:
    """M_u(x): members of N_u(x) not of the form p * n0 with u_{n0} = 0."""
    started = time.perf_counter()
    bound = settings.ZERO_BOUND if zero_bound is None else zero_bound
    zeros = [n0 for n0 in zero_terms(spec, bound) if n0 >= 1]
    cps = _normalize_checkpoints(x, checkpoints)
    members = [n for n in scan_members(spec, x, workers=workers) if not is_zero_multiple(n, zeros)]
    return _report("M", spec, x, cps, members, retention_cap, started, zero_terms=zeros)


def census_poly(
    spec: RecurrenceSpec,
    g: PolySpec,
    x: int,
    checkpoints: Optional[Sequence[int]] = None,
    *,
    workers: Optional[int] = None,
    retention_cap: Optional[int] = None,
) -> CensusReport:
    """N_{u,g}(x) = {n <= x : g(n) | u_n}, using |g(n)|; g(n) = 0 needs u_n = 0."""
    started = time.perf_counter()
    cps = _normalize_checkpoints(x, checkpoints)
    members = scan_members(spec, x, g=g, workers=workers)
    rep = _report("N_g", spec, x, cps, members, retention_cap, started, g=list(g.coefficients))
    extra = dict(rep.extra, poly_ratio=poly_ratio(rep.count, x))
    return rep.model_copy(update={"extra": extra})


def ratio_report(report: CensusReport) -> List[RatioRow]:
    """count, count log x / x, count L(x) / x and first differences per checkpoint."""
    if len(report.checkpoints) < 2:
        raise PreconditionError("ratio report needs at least 2 checkpoints")
    return ratio_rows(report)


def ratio_rows(report: CensusReport) -> List[RatioRow]:
    rows, prev = [], 0
    for c, n in zip(report.checkpoints, report.counts):
        rows.append(
            RatioRow(
                x=c,
                count=n,
                count_logx_over_x=n * math.log(c) / c,
                count_Lx_over_x=n * big_l(c) / c,
                delta=n - prev,
            )
        )
        prev = n
    return rows


def composite_members(report: CensusReport) -> List[int]:
    """Composite members; for u_n = 2^n - 2 these are the base-2 pseudoprimes."""
    if report.members is None:
        raise PreconditionError("member list was not retained")
    return [n for n in report.members if n > 1 and not isprime(n)]


def order_one_reference(spec: RecurrenceSpec, x: int) -> float:
    """(log x)^omega(|a1|), the growth of N_u(x) when k = 1."""
    if spec.order != 1:
        raise PreconditionError("order-one reference needs k = 1")
    omega = len(factorint(abs(spec.coeffs[0])))
    return log1(x) ** omega


def poly_ratio(count: int, x: int) -> float:
    """count * log x / (x * log log x) with clamped logs."""
    lx = log1(x)
    return count * lx / (x * log1(lx))


def partition_m(spec: RecurrenceSpec, report: CensusReport) -> MPartition:
    """
    Split M_u(x) members into M1 (P(n) <= y), M2 (some p | n with p > y and
    p * T_u(p) <= k x) and M3, with y = L(x).

    Primes dividing a_k * delta give no T_u(p) (except p | delta when k = 2,
    where T = 0); members that only have such large primes are undecided.
    """
    if report.members is None:
        raise PreconditionError("member list was not retained")
    x, k = report.x, spec.order
    if k < 2:
        raise PreconditionError("partition needs order k >= 2")
    y = big_l(x)
    disc = discriminant(char_poly(spec))
    sieve = shared_sieve(max(x, 2))
    m1 = m2 = m3 = undecided = 0
    for n in report.members:
        fl = factorize(n, sieve=sieve)
        if fl.largest <= y:
            m1 += 1
            continue
        hit = unknown = False
        for p, _ in fl.factors:
            if p <= y:
                continue
            if spec.a_k % p == 0 or (disc % p == 0 and k > 2):
                unknown = True
                continue
            res = t_general(spec, p, cap=k * x // p + 1)
            if not res.capped:
                hit = True
                break
        if hit:
            m2 += 1
        elif unknown:
            undecided += 1
        else:
            m3 += 1
    log.info("census.partition x=%d m1=%d m2=%d m3=%d undecided=%d", x, m1, m2, m3, undecided)
    return MPartition(x=x, y=y, m1=m1, m2=m2, m3=m3, undecided=undecided)
