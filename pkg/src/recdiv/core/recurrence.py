from __future__ import annotations
from functools import lru_cache
from typing import Iterator, List, Optional, Tuple

from sympy import Poly, cyclotomic_poly, gcd as poly_gcd, resultant, symbols, totient

from ..schemas.recurrence import IntPolynomial, RecurrenceSpec, ValidatedRecurrence
from .errors import PreconditionError, SpecError
from .logging import get_logger
from .modular import _step, term_exact

log = get_logger(__name__)

_X, _Y = symbols("X Y")


def char_poly(spec: RecurrenceSpec) -> IntPolynomial:
    """f_u(X) = X^k - a1 X^{k-1} - ... - ak, lowest degree first."""
    return IntPolynomial(coefficients=[-a for a in reversed(spec.coeffs)] + [1])


def _to_sympy(poly: IntPolynomial, var=_X) -> Poly:
    return Poly(poly.high_first(), var)


def discriminant(poly: IntPolynomial) -> int:
    """Exact integer discriminant via the subresultant PRS; degree 1 gives 1."""
    if poly.degree < 1:
        raise PreconditionError("discriminant needs degree >= 1")
    if poly.degree == 1:
        return 1
    return int(_to_sympy(poly).discriminant())


def is_squarefree(poly: IntPolynomial) -> bool:
    f = _to_sympy(poly)
    return poly_gcd(f, f.diff(_X)).degree() == 0


@lru_cache(maxsize=None)
def _cyclotomic_orders(max_phi: int) -> Tuple[int, ...]:
    # phi(m) >= sqrt(m/2) for every m, so m <= 2 max_phi^2 covers all orders
    return tuple(m for m in range(2, 2 * max_phi * max_phi + 1) if totient(m) <= max_phi)


def _ratio_polynomial(poly: IntPolynomial) -> Poly:
    """Res_Y(f(Y), f(XY)) with the trivial (X-1)^k factor removed."""
    k = poly.degree
    fy = _to_sympy(poly, _Y)
    fxy = Poly(fy.as_expr().subs(_Y, _X * _Y), _Y)
    g = Poly(resultant(fy.as_expr(), fxy.as_expr(), _Y), _X)
    one = Poly(_X - 1, _X)
    for _ in range(k):
        q, r = g.div(one)
        if not r.is_zero:
            break
        g = q
    return g


def is_degenerate(poly: IntPolynomial) -> Tuple[bool, Optional[int]]:
    """
    Whether some ratio of distinct roots of f is a root of unity.

    Returns (degenerate, m) with m the smallest witnessing cyclotomic order.
    """
    if poly.degree <= 1:
        return False, None
    if not is_squarefree(poly):
        raise SpecError("degeneracy test needs a squarefree polynomial")
    k = poly.degree
    g = _ratio_polynomial(poly)
    for m in _cyclotomic_orders(k * k):
        if totient(m) > g.degree():
            continue
        phi_m = Poly(cyclotomic_poly(m, _X), _X)
        if poly_gcd(g, phi_m).degree() > 0:
            return True, m
    return False, None


def validate_spec(spec: RecurrenceSpec) -> ValidatedRecurrence:
    f = char_poly(spec)
    disc = discriminant(f)
    simple = disc != 0
    degenerate, order = (is_degenerate(f) if simple else (False, None))
    if spec.order == 1:
        log.debug("recurrence.order_one spec=%s", spec.label())
    return ValidatedRecurrence(
        spec=spec,
        char_poly=f,
        discriminant=disc,
        simple_roots=simple,
        degenerate=degenerate,
        degenerate_order=order,
    )


def require_simple(vr: ValidatedRecurrence) -> ValidatedRecurrence:
    """Reject multiple-root recurrences; warn (but accept) degenerate ones."""
    if not vr.simple_roots:
        raise SpecError("characteristic polynomial has a multiple root (discriminant 0)")
    if vr.degenerate:
        log.warning(
            "recurrence.degenerate order=%s spec=%s", vr.degenerate_order, vr.spec.label()
        )
    return vr


def exact_term(spec: RecurrenceSpec, n: int) -> int:
    """Exact u_n: iteration for small n, companion-matrix power otherwise."""
    return term_exact(spec, n)


def iterate_terms(spec: RecurrenceSpec) -> Iterator[int]:
    state = list(spec.init)
    while True:
        yield state[0]
        _step(spec.coeffs, state, None)


def zero_terms(spec: RecurrenceSpec, bound: int) -> List[int]:
    """All n0 <= bound with u_{n0} = 0, by a full exact scan."""
    if bound < 1:
        raise PreconditionError("bound must be >= 1")
    out: List[int] = []
    for n, u in enumerate(iterate_terms(spec)):
        if n > bound:
            break
        if u == 0:
            out.append(n)
    return out
