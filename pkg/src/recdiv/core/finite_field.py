from __future__ import annotations
import math
import random
from dataclasses import dataclass
from itertools import combinations
from typing import List, Optional, Sequence, Tuple

from sympy import Matrix, isprime, primerange
from sympy.polys.domains import ZZ
from sympy.polys.galoistools import (
    gf_add,
    gf_ddf_zassenhaus,
    gf_from_int_poly,
    gf_gcd,
    gf_gcdex,
    gf_irreducible_p,
    gf_monic,
    gf_mul,
    gf_pow_mod,
    gf_quo,
    gf_rem,
    gf_sqf_list,
    gf_sub,
    gf_sub_ground,
)

from ..schemas.recurrence import IntPolynomial, RecurrenceSpec
from ..schemas.reports import RootCountReport, SmallTReport, TIndexResult
from .config import settings
from .errors import PreconditionError
from .logging import get_logger
from .modular import naive_residues, period_mod
from .recurrence import char_poly, discriminant

log = get_logger(__name__)

GF = List[int]        # dense F_p[X] polynomial, highest degree first (galoistools layout)
Elem = Tuple[int, ...]  # field element: stripped coefficient tuple, highest degree first


def _rng(seed: Optional[int]) -> random.Random:
    return random.Random(settings.SEED if seed is None else seed)


def _as_int_list(f: Sequence) -> GF:
    return [int(c) for c in f]


def _to_gf(poly: IntPolynomial, p: int) -> GF:
    return _as_int_list(gf_from_int_poly(poly.high_first(), p))


def _from_gf(f: GF) -> IntPolynomial:
    return IntPolynomial.from_low_first(list(reversed(f)))


def _require_prime(p: int) -> None:
    if not isprime(p):
        raise PreconditionError(f"{p} is not prime")


# -----------------------
# Factorization over F_p
# -----------------------
def _edf(f: GF, n: int, p: int, rng: random.Random) -> List[GF]:
    """Seeded Cantor-Zassenhaus equal-degree split of a monic squarefree f."""
    deg = len(f) - 1
    if deg <= n:
        return [f]
    while True:
        r = [rng.randrange(p) for _ in range(deg)]
        r = _as_int_list(gf_from_int_poly(r, p))
        if len(r) < 2:
            continue
        if p == 2:
            # trace map r + r^2 + ... + r^(2^(n-1)) mod f
            h, t = r, r
            for _ in range(n - 1):
                t = _as_int_list(gf_pow_mod(t, 2, f, p, ZZ))
                h = _as_int_list(gf_add(h, t, p, ZZ))
            g = _as_int_list(gf_gcd(f, h, p, ZZ))
        else:
            h = _as_int_list(gf_pow_mod(r, (p**n - 1) // 2, f, p, ZZ))
            g = _as_int_list(gf_gcd(f, gf_sub_ground(h, 1, p, ZZ), p, ZZ))
        if 0 < len(g) - 1 < deg:
            q = _as_int_list(gf_quo(f, g, p, ZZ))
            return _edf(g, n, p, rng) + _edf(q, n, p, rng)


def factor_mod_p(
    poly: IntPolynomial, p: int, *, seed: Optional[int] = None
) -> List[Tuple[IntPolynomial, int]]:
    """
    Monic irreducible factors of poly over F_p with multiplicities.

    Squarefree decomposition, then distinct-degree, then seeded equal-degree
    splitting. Sorted by degree, then by coefficients (highest first).
    """
    _require_prime(p)
    if poly.leading % p == 0:
        raise PreconditionError(f"p={p} divides the leading coefficient")
    _, f = gf_monic(_to_gf(poly, p), p, ZZ)
    rng = _rng(seed)
    out: List[Tuple[GF, int]] = []
    for g, mult in gf_sqf_list(_as_int_list(f), p, ZZ)[1]:
        for h, d in gf_ddf_zassenhaus(_as_int_list(g), p, ZZ):
            for irr in _edf(_as_int_list(h), int(d), p, rng):
                out.append((irr, int(mult)))
    out.sort(key=lambda fm: (len(fm[0]), fm[0]))
    return [(_from_gf(g), m) for g, m in out]


def splits_linearly(poly: IntPolynomial, p: int) -> bool:
    """deg gcd(X^p - X mod f, f) == deg f over F_p."""
    _require_prime(p)
    if poly.leading % p == 0:
        raise PreconditionError(f"p={p} divides the leading coefficient")
    _, f = gf_monic(_to_gf(poly, p), p, ZZ)
    xp = gf_pow_mod([1, 0], p, f, p, ZZ)
    g = gf_gcd(f, gf_sub(xp, [1, 0], p, ZZ), p, ZZ)
    return len(g) == len(f)


# -----------------------
# F_{p^d}
# -----------------------
class FieldExtension:
    """F_p[X]/(modulus) with a monic irreducible modulus of degree d."""

    def __init__(self, p: int, modulus: GF) -> None:
        if not gf_irreducible_p(modulus, p, ZZ):
            raise PreconditionError("field modulus is not irreducible")
        self.p = p
        self.modulus = _as_int_list(modulus)
        self.d = len(modulus) - 1
        self.order = p**self.d

    @classmethod
    def of_degree(cls, p: int, d: int) -> "FieldExtension":
        """First monic irreducible of degree d in base-p enumeration order (deterministic)."""
        if d == 1:
            return cls(p, [1, 0])
        for idx in range(p**d):
            tail = []
            v = idx
            for _ in range(d):
                v, c = divmod(v, p)
                tail.append(c)
            cand = [1] + tail[::-1]
            if cand[-1] != 0 and gf_irreducible_p(cand, p, ZZ):
                return cls(p, cand)
        raise PreconditionError(f"no irreducible polynomial of degree {d} mod {p}")

    def _e(self, f: Sequence) -> Elem:
        return tuple(_as_int_list(gf_rem(list(f), self.modulus, self.p, ZZ)))

    # ---- element arithmetic ----
    def one(self) -> Elem:
        return (1,)

    def const(self, c: int) -> Elem:
        c %= self.p
        return (c,) if c else ()

    def add(self, a: Elem, b: Elem) -> Elem:
        return tuple(_as_int_list(gf_add(list(a), list(b), self.p, ZZ)))

    def sub(self, a: Elem, b: Elem) -> Elem:
        return tuple(_as_int_list(gf_sub(list(a), list(b), self.p, ZZ)))

    def neg(self, a: Elem) -> Elem:
        return self.sub((), a)

    def mul(self, a: Elem, b: Elem) -> Elem:
        return self._e(gf_mul(list(a), list(b), self.p, ZZ))

    def pow(self, a: Elem, n: int) -> Elem:
        if n == 0:
            return (1,)
        if not a:
            return ()
        return tuple(_as_int_list(gf_pow_mod(list(a), n, self.modulus, self.p, ZZ)))

    def inv(self, a: Elem) -> Elem:
        if not a:
            raise ZeroDivisionError("inverse of zero")
        s, _, h = gf_gcdex(list(a), self.modulus, self.p, ZZ)
        # h is the monic gcd, i.e. [1]
        return self._e(s)

    def random(self, rng: random.Random) -> Elem:
        return self._e([rng.randrange(self.p) for _ in range(self.d)])

    def eval_int_poly(self, poly: IntPolynomial, a: Elem) -> Elem:
        acc: Elem = ()
        for c in poly.high_first():
            acc = self.add(self.mul(acc, a), self.const(c))
        return acc


# ---- polynomials with coefficients in a FieldExtension (highest degree first) ----
EPoly = List[Elem]


def _ep_strip(f: EPoly) -> EPoly:
    i = 0
    while i < len(f) and not f[i]:
        i += 1
    return f[i:]


def _ep_rem(F: FieldExtension, f: EPoly, g: EPoly) -> EPoly:
    f = _ep_strip(list(f))
    inv_lc = F.inv(g[0])
    while len(f) >= len(g):
        c = F.mul(f[0], inv_lc)
        for i in range(len(g)):
            f[i] = F.sub(f[i], F.mul(c, g[i]))
        f = _ep_strip(f)
    return f


def _ep_mul(F: FieldExtension, f: EPoly, g: EPoly) -> EPoly:
    if not f or not g:
        return []
    out: EPoly = [() for _ in range(len(f) + len(g) - 1)]
    for i, a in enumerate(f):
        for j, b in enumerate(g):
            out[i + j] = F.add(out[i + j], F.mul(a, b))
    return _ep_strip(out)


def _ep_monic(F: FieldExtension, f: EPoly) -> EPoly:
    inv_lc = F.inv(f[0])
    return [F.mul(c, inv_lc) for c in f]


def _ep_gcd(F: FieldExtension, f: EPoly, g: EPoly) -> EPoly:
    f, g = _ep_strip(list(f)), _ep_strip(list(g))
    while g:
        f, g = g, _ep_rem(F, f, g)
    return _ep_monic(F, f) if f else []


def _ep_powmod(F: FieldExtension, f: EPoly, n: int, g: EPoly) -> EPoly:
    result: EPoly = [F.one()]
    base = _ep_rem(F, f, g)
    while n:
        if n & 1:
            result = _ep_rem(F, _ep_mul(F, result, base), g)
        n >>= 1
        if n:
            base = _ep_rem(F, _ep_mul(F, base, base), g)
    return result


def _ep_quo(F: FieldExtension, f: EPoly, g: EPoly) -> EPoly:
    f = _ep_strip(list(f))
    q: EPoly = [() for _ in range(max(len(f) - len(g) + 1, 0))]
    inv_lc = F.inv(g[0])
    while len(f) >= len(g):
        c = F.mul(f[0], inv_lc)
        q[len(q) - (len(f) - len(g)) - 1] = c
        for i in range(len(g)):
            f[i] = F.sub(f[i], F.mul(c, g[i]))
        f = f[1:]
    return _ep_strip(q)


def _one_root(F: FieldExtension, g: EPoly, rng: random.Random) -> Elem:
    """A root in F of a monic g that splits into distinct linear factors over F."""
    while len(g) > 2:
        delta = F.random(rng)
        if F.p == 2:
            t: EPoly = [delta, ()]  # delta * T
            h, acc = t, t
            for _ in range(F.d - 1):
                acc = _ep_rem(F, _ep_mul(F, acc, acc), g)
                h = _ep_add(F, h, acc)
            c = _ep_gcd(F, g, h)
        else:
            h = _ep_powmod(F, [F.one(), delta], (F.order - 1) // 2, g)
            c = _ep_gcd(F, g, _ep_add(F, h, [F.neg(F.one())]))
        if 1 < len(c) < len(g):
            other = _ep_quo(F, g, c)
            g = c if len(c) <= len(other) else _ep_monic(F, other)
    # g = T + c0
    return F.neg(F.mul(g[1], F.inv(g[0])))


def _ep_add(F: FieldExtension, f: EPoly, g: EPoly) -> EPoly:
    n = max(len(f), len(g))
    f = [()] * (n - len(f)) + list(f)
    g = [()] * (n - len(g)) + list(g)
    return _ep_strip([F.add(a, b) for a, b in zip(f, g)])


@dataclass(frozen=True)
class SplittingData:
    field: FieldExtension
    roots: List[Elem]
    source_poly: IntPolynomial
    factor_degrees: List[int]


def splitting_data(
    poly: IntPolynomial, p: int, *, seed: Optional[int] = None
) -> SplittingData:
    """
    All k roots of poly inside F_{p^d}, d = lcm of the factor degrees mod p.

    One root of each irreducible factor is found in the common field; its
    Frobenius orbit r, r^p, r^(p^2), ... gives the remaining roots of that factor.
    """
    _require_prime(p)
    if poly.leading % p == 0:
        raise PreconditionError(f"p={p} divides the leading coefficient")
    if discriminant(poly) % p == 0:
        raise PreconditionError(f"p={p} divides the discriminant; roots are not distinct mod p")

    factors = factor_mod_p(poly, p, seed=seed)
    degrees = [g.degree for g, _ in factors]
    d = math.lcm(*degrees)
    F = FieldExtension.of_degree(p, d)
    rng = _rng(seed)

    roots: List[Elem] = []
    for g, _ in factors:
        eg = [F.const(c) for c in g.high_first()]
        r = _one_root(F, eg, rng)
        for _ in range(g.degree):
            roots.append(r)
            r = F.pow(r, p)

    for r in roots:
        if F.eval_int_poly(poly, r):
            raise PreconditionError("root check failed in the splitting field")
    log.debug("splitting.built p=%d d=%d degrees=%s", p, d, degrees)
    return SplittingData(field=F, roots=roots, source_poly=poly, factor_degrees=degrees)


# -----------------------
# Determinants and T_u(p)
# -----------------------
def _det(F: FieldExtension, M: List[List[Elem]]) -> Elem:
    """Gaussian elimination over the field."""
    M = [list(row) for row in M]
    n = len(M)
    det: Elem = F.one()
    for c in range(n):
        piv = next((r for r in range(c, n) if M[r][c]), None)
        if piv is None:
            return ()
        if piv != c:
            M[c], M[piv] = M[piv], M[c]
            det = F.neg(det)
        det = F.mul(det, M[c][c])
        inv = F.inv(M[c][c])
        for r in range(c + 1, n):
            if not M[r][c]:
                continue
            f = F.mul(M[r][c], inv)
            M[r] = [F.sub(a, F.mul(f, b)) for a, b in zip(M[r], M[c])]
    return det


def d_determinant(sd: SplittingData, exponents: Sequence[int]) -> Elem:
    """det(alpha_i^{x_j}) in F_{p^d}."""
    if len(exponents) != len(sd.roots):
        raise PreconditionError("need one exponent per root")
    if any(x < 0 for x in exponents):
        raise PreconditionError("exponents must be nonnegative")
    F = sd.field
    M = [[F.pow(r, x) for x in exponents] for r in sd.roots]
    return _det(F, M)


def _extend_h(coeffs: Sequence[int], h: List[int], upto: int) -> None:
    # complete homogeneous h_n of the roots: h_0 = 1, then the recurrence itself
    while len(h) <= upto:
        n = len(h)
        h.append(sum(a * h[n - 1 - i] for i, a in enumerate(coeffs) if n - 1 - i >= 0))


def _schur(coeffs: Sequence[int], exponents: Sequence[int], h: List[int]) -> int:
    xs = sorted(exponents, reverse=True)
    if len(set(xs)) < len(xs):
        return 0
    k = len(xs)
    lam = [x - (k - 1 - i) for i, x in enumerate(xs)]
    _extend_h(coeffs, h, max(lam[0] + k - 1, 0))

    def hh(m: int) -> int:
        return h[m] if m >= 0 else 0

    return int(Matrix(k, k, lambda i, j: hh(lam[i] - i + j)).det(method="bareiss"))


def schur_quotient(spec: RecurrenceSpec, exponents: Sequence[int]) -> int:
    """
    D(x_1, ..., x_k) / V over Z, V the Vandermonde of the roots.

    The quotient is the Schur polynomial of the roots for the partition read
    off the exponents, computed by Jacobi-Trudi from h_n. It is 0 for repeated
    exponents and for tuples whose determinant vanishes identically.
    """
    if len(exponents) != spec.order:
        raise PreconditionError("need one exponent per root")
    if any(x < 0 for x in exponents):
        raise PreconditionError("exponents must be nonnegative")
    return _schur(spec.coeffs, exponents, [1])


def _shell(k: int, top: int):
    # strictly increasing (x_2 < ... < x_k) with x_k = top
    for head in combinations(range(1, top), k - 2):
        yield head + (top,)


def t_general(
    spec: RecurrenceSpec,
    p: int,
    cap: Optional[int] = None,
    *,
    seed: Optional[int] = None,
) -> TIndexResult:
    """
    T_u(p): the largest T such that no D(0, x_2, ..., x_k) with distinct
    exponents in [1, T] is divisible by p while nonzero over Z.

    Shells of increasing maximal coordinate T' are searched. A tuple witnesses p
    when D vanishes in the splitting field mod p and D / V (see schur_quotient)
    is nonzero; the first one gives t = T' - 1. Without one up to cap
    (default p^2), t = cap, capped.
    """
    _require_prime(p)
    k = spec.order
    if k < 2:
        raise PreconditionError("T_u(p) needs order k >= 2")
    if spec.a_k % p == 0:
        raise PreconditionError(f"p={p} divides a_k")
    f = char_poly(spec)
    if discriminant(f) % p == 0:
        if k == 2:
            return TIndexResult(p=p, t=0, divides_discriminant=True)
        raise PreconditionError(f"p={p} divides the discriminant")
    cap = p * p if cap is None else cap

    sd = splitting_data(f, p, seed=seed)
    F = sd.field
    # powers[i][x] = alpha_i^x
    powers: List[List[Elem]] = [[F.one()] for _ in sd.roots]
    h: List[int] = [1]
    for top in range(1, cap + 1):
        for i, r in enumerate(sd.roots):
            powers[i].append(F.mul(powers[i][-1], r))
        for tup in _shell(k, top):
            xs = (0,) + tup
            M = [[powers[i][x] for x in xs] for i in range(k)]
            if _det(F, M):
                continue
            if _schur(spec.coeffs, xs, h) == 0:
                log.debug("t_general.zero_over_z p=%d tuple=%s", p, xs)
                continue
            return TIndexResult(p=p, t=top - 1, witness=list(tup))
    log.info("t_general.capped p=%d cap=%d", p, cap)
    return TIndexResult(p=p, t=cap, capped=True)


def small_t_census(
    spec: RecurrenceSpec, x: int, y: int, *, seed: Optional[int] = None
) -> SmallTReport:
    """#{p <= x : p not dividing a_k * delta, T_u(p) <= y} with C = count log y / y^k."""
    f = char_poly(spec)
    disc = discriminant(f)
    primes = []
    for p in primerange(2, x + 1):
        if spec.a_k % p == 0 or disc % p == 0:
            continue
        res = t_general(spec, p, cap=y + 1, seed=seed)
        if not res.capped and res.t <= y:
            primes.append(p)
    k = spec.order
    const = len(primes) * math.log(max(y, 2)) / (y**k) if y >= 1 else 0.0
    return SmallTReport(x=x, y=y, primes=primes, fitted_constant=const)


def root_count_congruence(spec: RecurrenceSpec, p: int, x: int) -> RootCountReport:
    """#{1 <= n <= x : u_n = 0 mod p} from one full period plus the remainder."""
    _require_prime(p)
    if spec.a_k % p == 0:
        raise PreconditionError(f"p={p} divides a_k")
    rec = period_mod(spec, p)
    t = rec.period
    zeros = [i for i, r in enumerate(naive_residues(spec, p, t)) if r == 0]
    full, rem = divmod(x, t)
    count = full * len(zeros) + sum(1 for i in zeros if 1 <= i <= rem)

    t_index: Optional[int] = None
    comparison: Optional[float] = None
    if spec.order >= 2 and discriminant(char_poly(spec)) % p != 0:
        res = t_general(spec, p)
        if not res.capped and res.t > 0:
            t_index = res.t
            comparison = x / res.t + 1
    return RootCountReport(p=p, x=x, count=count, period=t, t_index=t_index, comparison=comparison)
