from __future__ import annotations
from math import gcd
from typing import List, Optional, Sequence

from ..schemas.recurrence import RecurrenceSpec
from ..schemas.reports import PeriodRecord
from .config import settings
from .errors import BudgetExceeded, PreconditionError
from .logging import get_logger

log = get_logger(__name__)

Matrix = List[List[int]]


def _mat_mul(A: Matrix, B: Matrix, m: Optional[int]) -> Matrix:
    cols = list(zip(*B))
    if m is None:
        return [[sum(a * b for a, b in zip(row, col)) for col in cols] for row in A]
    return [[sum(a * b for a, b in zip(row, col)) % m for col in cols] for row in A]


def _identity(k: int) -> Matrix:
    return [[1 if i == j else 0 for j in range(k)] for i in range(k)]


class CompanionMatrix:
    """
    k x k companion matrix of the recurrence, optionally reduced mod m.

    Acts on state vectors (u_n, ..., u_{n+k-1}): superdiagonal identity block,
    last row [a_k, a_{k-1}, ..., a_1]. modulus=None keeps exact integers.
    """

    def __init__(self, spec: RecurrenceSpec, modulus: Optional[int] = None) -> None:
        if modulus is not None and modulus < 1:
            raise PreconditionError("modulus must be >= 1")
        k = spec.order
        self.size = k
        self.modulus = modulus
        rows = [[1 if j == i + 1 else 0 for j in range(k)] for i in range(k - 1)]
        rows.append(list(reversed(spec.coeffs)))
        self.entries: Matrix = [[self._red(v) for v in row] for row in rows]

    def _red(self, v: int) -> int:
        return v % self.modulus if self.modulus is not None else v

    def power(self, n: int) -> Matrix:
        result = _identity(self.size)
        if self.modulus == 1:
            return [[0] * self.size for _ in range(self.size)]
        base = self.entries
        while n:
            if n & 1:
                result = _mat_mul(result, base, self.modulus)
            n >>= 1
            if n:
                base = _mat_mul(base, base, self.modulus)
        return result

    def apply_power(self, n: int, state: Sequence[int]) -> List[int]:
        P = self.power(n)
        out = [sum(a * b for a, b in zip(row, state)) for row in P]
        return [self._red(v) for v in out]


def _step(coeffs: Sequence[int], state: List[int], m: Optional[int]) -> None:
    # state holds (u_n..u_{n+k-1}); advance in place by one index
    nxt = sum(c * s for c, s in zip(coeffs, reversed(state)))
    if m is not None:
        nxt %= m
    state.pop(0)
    state.append(nxt)


def _iterate_to(spec: RecurrenceSpec, n: int, m: Optional[int]) -> int:
    state = [v % m for v in spec.init] if m is not None else list(spec.init)
    for _ in range(n):
        _step(spec.coeffs, state, m)
    return state[0]


def _use_matrix(spec: RecurrenceSpec, n: int, crossover: Optional[int]) -> bool:
    crossover = settings.MATRIX_CROSSOVER if crossover is None else crossover
    return n > crossover * spec.order


def term_mod(spec: RecurrenceSpec, n: int, m: int, *, crossover: Optional[int] = None) -> int:
    """u_n mod m, residue in [0, m)."""
    if n < 0:
        raise PreconditionError("n must be >= 0")
    if m < 1:
        raise PreconditionError("modulus must be >= 1")
    if m == 1:
        return 0
    if n < spec.order:
        return spec.init[n] % m
    if not _use_matrix(spec, n, crossover):
        return _iterate_to(spec, n, m)
    return CompanionMatrix(spec, m).apply_power(n, spec.init)[0]


def term_exact(spec: RecurrenceSpec, n: int, *, crossover: Optional[int] = None) -> int:
    if n < 0:
        raise PreconditionError("n must be >= 0")
    if n < spec.order:
        return spec.init[n]
    if not _use_matrix(spec, n, crossover):
        return _iterate_to(spec, n, None)
    return CompanionMatrix(spec).apply_power(n, spec.init)[0]


def divides_term(spec: RecurrenceSpec, n: int) -> bool:
    """Membership predicate of N_u: n | u_n."""
    if n < 1:
        raise PreconditionError("n must be >= 1")
    return term_mod(spec, n, n) == 0


def period_mod(spec: RecurrenceSpec, m: int, *, state_cap: Optional[int] = None) -> PeriodRecord:
    """
    Eventual period of the state vector mod m.

    Visited states are kept in a dict keyed by the state tuple; the first repeat
    gives both preperiod (index of first visit) and period. preperiod is 0 when
    gcd(a_k, m) = 1.
    """
    if m < 1:
        raise PreconditionError("modulus must be >= 1")
    if m == 1:
        return PeriodRecord(modulus=1, period=1, preperiod=0)
    cap = settings.PERIOD_STATE_CAP if state_cap is None else state_cap

    state = [v % m for v in spec.init]
    seen: dict[tuple[int, ...], int] = {}
    idx = 0
    while True:
        key = tuple(state)
        first = seen.get(key)
        if first is not None:
            rec = PeriodRecord(modulus=m, period=idx - first, preperiod=first)
            if rec.preperiod and gcd(spec.a_k, m) == 1:
                # cannot happen for an invertible companion matrix
                log.warning("period.unexpected_preperiod m=%d preperiod=%d", m, first)
            return rec
        if idx >= cap:
            raise BudgetExceeded(f"period search mod {m} exceeded state cap {cap}")
        seen[key] = idx
        _step(spec.coeffs, state, m)
        idx += 1


def naive_residues(spec: RecurrenceSpec, m: int, count: int) -> List[int]:
    """u_0..u_{count-1} mod m by plain iteration."""
    state = [v % m for v in spec.init]
    out: List[int] = []
    for _ in range(count):
        out.append(state[0])
        _step(spec.coeffs, state, m)
    return out
