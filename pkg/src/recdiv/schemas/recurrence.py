from __future__ import annotations
from typing import List, Optional
from pydantic import BaseModel, ConfigDict, Field, model_validator


class RecurrenceSpec(BaseModel):
    """u_{n+k} = a1 u_{n+k-1} + ... + ak u_n with initial terms u_0..u_{k-1}."""

    model_config = ConfigDict(frozen=True)

    coeffs: List[int] = Field(..., min_length=1, description="a1..ak, a1 first")
    init: List[int] = Field(..., min_length=1, description="u0..u_{k-1}, u0 first")

    @model_validator(mode="after")
    def _check_shape(self) -> "RecurrenceSpec":
        if len(self.coeffs) != len(self.init):
            raise ValueError(
                f"coeffs and init lengths differ ({len(self.coeffs)} != {len(self.init)})"
            )
        if self.coeffs[-1] == 0:
            raise ValueError("a_k must be nonzero")
        return self

    @property
    def order(self) -> int:
        return len(self.coeffs)

    @property
    def a_k(self) -> int:
        return self.coeffs[-1]

    def label(self) -> str:
        return f"coeffs={','.join(map(str, self.coeffs))} init={','.join(map(str, self.init))}"


class IntPolynomial(BaseModel):
    """Integer polynomial, lowest degree first. The zero polynomial is []."""

    model_config = ConfigDict(frozen=True)

    coefficients: List[int] = Field(default_factory=list)

    @model_validator(mode="after")
    def _strip(self) -> "IntPolynomial":
        if self.coefficients and self.coefficients[-1] == 0:
            raise ValueError("leading coefficient must be nonzero")
        return self

    @classmethod
    def from_low_first(cls, coeffs: List[int]) -> "IntPolynomial":
        out = list(coeffs)
        while out and out[-1] == 0:
            out.pop()
        return cls(coefficients=out)

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    @property
    def leading(self) -> int:
        return self.coefficients[-1] if self.coefficients else 0

    def high_first(self) -> List[int]:
        return list(reversed(self.coefficients))

    def reciprocal(self) -> "IntPolynomial":
        # X^d f(1/X); constant term must be nonzero to keep the degree
        return IntPolynomial.from_low_first(list(reversed(self.coefficients)))

    def __call__(self, x: int) -> int:
        acc = 0
        for c in reversed(self.coefficients):
            acc = acc * x + c
        return acc


class ValidatedRecurrence(BaseModel):
    model_config = ConfigDict(frozen=True)

    spec: RecurrenceSpec
    char_poly: IntPolynomial
    discriminant: int
    simple_roots: bool
    degenerate: bool
    degenerate_order: Optional[int] = Field(
        None, description="cyclotomic order m witnessing a root-of-unity ratio"
    )

    @model_validator(mode="after")
    def _check(self) -> "ValidatedRecurrence":
        if self.simple_roots != (self.discriminant != 0):
            raise ValueError("simple_roots must agree with discriminant != 0")
        if self.degenerate and self.degenerate_order is None:
            raise ValueError("degenerate recurrence needs a witnessing order")
        return self


class LucasSpec(BaseModel):
    """Lucas pair (a1, a2): u0 = 0, u1 = 1, gcd(a1, a2) = 1."""

    model_config = ConfigDict(frozen=True)

    a1: int
    a2: int
    delta: int

    @model_validator(mode="after")
    def _check(self) -> "LucasSpec":
        if self.delta != self.a1 * self.a1 + 4 * self.a2:
            raise ValueError("delta must equal a1^2 + 4 a2")
        return self

    def recurrence(self) -> RecurrenceSpec:
        return RecurrenceSpec(coeffs=[self.a1, self.a2], init=[0, 1])


class PolySpec(BaseModel):
    """g(X) for N_{u,g}; coefficients lowest degree first."""

    model_config = ConfigDict(frozen=True)

    coefficients: List[int] = Field(..., min_length=2)

    @model_validator(mode="after")
    def _nonconstant(self) -> "PolySpec":
        if not any(self.coefficients[1:]):
            raise ValueError("g must be non-constant")
        return self

    def __call__(self, n: int) -> int:
        acc = 0
        for c in reversed(self.coefficients):
            acc = acc * n + c
        return acc
