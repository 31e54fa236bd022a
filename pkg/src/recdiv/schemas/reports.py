from __future__ import annotations
from math import prod
from typing import Any, Dict, List, Literal, Optional, Tuple
from pydantic import BaseModel, ConfigDict, Field, computed_field, model_validator


class _Frozen(BaseModel):
    model_config = ConfigDict(frozen=True)


# ---- modular engine / lucas ----

class PeriodRecord(_Frozen):
    modulus: int = Field(..., ge=1)
    period: int = Field(..., ge=1)
    preperiod: int = Field(0, ge=0)


class ApparitionIndex(_Frozen):
    modulus: int = Field(..., ge=1)
    z: int = Field(..., ge=1)


class TIndexResult(_Frozen):
    p: int
    t: int = Field(..., ge=0)
    witness: Optional[List[int]] = None
    capped: bool = False
    divides_discriminant: bool = False


class QGammaReport(_Frozen):
    x: int
    gamma: float
    primes: List[int]
    density_ratio: float = Field(..., description="#Q * log x / x^(2 gamma)")
    p_gamma_count: int = Field(..., description="#{p <= x : T(p) < p^gamma}")

    @computed_field  # type: ignore[prop-decorator]
    @property
    def count(self) -> int:
        return len(self.primes)


class RootCountReport(_Frozen):
    p: int
    x: int
    count: int
    period: int
    t_index: Optional[int] = None
    comparison: Optional[float] = Field(None, description="x / T(p) + 1")


class SmallTReport(_Frozen):
    x: int
    y: int
    primes: List[int]
    fitted_constant: float = Field(..., description="count * log y / y^k")
    capped: List[int] = Field(default_factory=list)

    @computed_field  # type: ignore[prop-decorator]
    @property
    def count(self) -> int:
        return len(self.primes)


# ---- smoothness ----

class FactorList(_Frozen):
    n: int = Field(..., ge=1)
    factors: List[Tuple[int, int]] = Field(default_factory=list)

    @model_validator(mode="after")
    def _check(self) -> "FactorList":
        ps = [p for p, _ in self.factors]
        if ps != sorted(set(ps)):
            raise ValueError("primes must be strictly increasing")
        if prod(p**e for p, e in self.factors) != self.n:
            raise ValueError("factorization does not multiply back to n")
        return self

    @computed_field  # type: ignore[prop-decorator]
    @property
    def omega(self) -> int:
        return len(self.factors)

    @computed_field  # type: ignore[prop-decorator]
    @property
    def tau(self) -> int:
        return prod(e + 1 for _, e in self.factors)

    @computed_field  # type: ignore[prop-decorator]
    @property
    def largest(self) -> int:
        # P(1) := 1
        return self.factors[-1][0] if self.factors else 1


class PsiReport(_Frozen):
    x: int
    y: int
    count: int
    v: Optional[float] = Field(None, description="log x / log y")
    reference: Optional[float] = Field(None, description="x * exp(-v log v)")


class PiSmoothRow(_Frozen):
    y: int
    v: float
    x: int
    count: int
    ratio: float


# ---- census ----

class RatioRow(_Frozen):
    x: int
    count: int
    count_logx_over_x: float
    count_Lx_over_x: float
    delta: int = 0


class CensusReport(_Frozen):
    kind: Literal["N", "M", "N_g"] = "N"
    spec_echo: Dict[str, Any]
    x: int
    checkpoints: List[int]
    counts: List[int]
    members: Optional[List[int]] = None
    truncated: bool = False
    extra: Dict[str, Any] = Field(default_factory=dict)
    elapsed_s: float = Field(0.0, exclude=True)

    @model_validator(mode="after")
    def _check(self) -> "CensusReport":
        if len(self.checkpoints) != len(self.counts):
            raise ValueError("one count per checkpoint")
        if any(b < a for a, b in zip(self.counts, self.counts[1:])):
            raise ValueError("counts must be nondecreasing along checkpoints")
        return self

    @property
    def count(self) -> int:
        return self.counts[-1] if self.counts else 0


class MPartition(_Frozen):
    x: int
    y: float
    m1: int
    m2: int
    m3: int
    undecided: int = 0


# ---- constructions ----

CertificateKind = Literal["lucas-special", "discriminant-power", "zero-term"]


class ConstructionCertificate(_Frozen):
    n: int = Field(..., ge=1)
    kind: CertificateKind
    witness: Dict[str, Any] = Field(default_factory=dict)
    verified: bool = False


class SpecialPrimeSet(_Frozen):
    y: float
    z: float
    primes: List[int]


class PrimitiveFactors(_Frozen):
    n: int
    primes: List[int]
    complete: bool = True
    congruence_violations: List[int] = Field(
        default_factory=list, description="primitive p with p not = +-1 (mod n)"
    )


class RemarkReport(_Frozen):
    x: int
    coeffs: List[int]
    init: List[int]
    checked: List[int]
    failures: List[int]
    below_range: Dict[int, bool] = Field(
        default_factory=dict, description="primes < 11: outcome recorded, no claim"
    )
