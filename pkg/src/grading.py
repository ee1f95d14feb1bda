"""
차수(grading) 모듈
- Bidegree (p, w): 코호몰로지 관례, τ ∈ M₂^(0,1)
- ExtDegree (s, t, w): stem = t − s 는 항상 계산값
- MayDegree (m, s, f, w)
- TauCoeff: F₂[τ]의 동차 원소 (0 또는 τ^k)
"""
from dataclasses import dataclass
from typing import Optional

from .errors import HomogeneityError, IntegrityError

INT32_MAX = 2**31 - 1
INT32_MIN = -(2**31)


def _checked(value: int) -> int:
    """32비트 범위 확인"""
    if value > INT32_MAX or value < INT32_MIN:
        raise IntegrityError(f"차수 오버플로우: {value}")
    return value


@dataclass(frozen=True, order=True)
class Bidegree:
    """(위상 차수 p, weight w)"""
    p: int = 0
    w: int = 0

    def __add__(self, other: "Bidegree") -> "Bidegree":
        return Bidegree(_checked(self.p + other.p), _checked(self.w + other.w))

    @property
    def chow(self) -> int:
        return chow_weight(self)

    def __str__(self) -> str:
        return f"({self.p},{self.w})"


ZERO_BIDEGREE = Bidegree(0, 0)


@dataclass(frozen=True, order=True)
class ExtDegree:
    """Ext^{s,(t,w)} 의 차수"""
    s: int
    t: int
    w: int

    def __post_init__(self):
        if self.s < 0:
            raise ValueError(f"Adams filtration은 음수일 수 없습니다: s={self.s}")
        _checked(self.t)
        _checked(self.w)

    @property
    def stem(self) -> int:
        return self.t - self.s

    @classmethod
    def from_stem(cls, s: int, stem: int, w: int) -> "ExtDegree":
        return cls(s, stem + s, w)


@dataclass(frozen=True, order=True)
class MayDegree:
    """May 차수 (m, stem, f, w)"""
    m: int
    s: int
    f: int
    w: int

    def __post_init__(self):
        if self.f < 0:
            raise ValueError(f"f는 음수일 수 없습니다: f={self.f}")
        if self.m < self.f:
            raise ValueError(f"May filtration m={self.m} < f={self.f}")

    def __add__(self, other: "MayDegree") -> "MayDegree":
        return MayDegree(
            _checked(self.m + other.m),
            _checked(self.s + other.s),
            _checked(self.f + other.f),
            _checked(self.w + other.w),
        )


@dataclass(frozen=True)
class TauCoeff:
    """
    F₂[τ]의 동차 스칼라

    exponent가 None이면 Zero, 아니면 τ^exponent.
    """
    exponent: Optional[int] = None

    def __post_init__(self):
        if self.exponent is not None and self.exponent < 0:
            raise ValueError(f"τ 지수는 음수일 수 없습니다: {self.exponent}")

    @property
    def is_zero(self) -> bool:
        return self.exponent is None

    def __mul__(self, other: "TauCoeff") -> "TauCoeff":
        return tau_mul(self, other)

    def __add__(self, other: "TauCoeff") -> "TauCoeff":
        if self.is_zero:
            return other
        if other.is_zero:
            return self
        if self.exponent != other.exponent:
            raise HomogeneityError(
                f"비동차 합: tau^{self.exponent} + tau^{other.exponent}"
            )
        return ZERO

    def __bool__(self) -> bool:
        return not self.is_zero

    def __str__(self) -> str:
        if self.is_zero:
            return "0"
        if self.exponent == 0:
            return "1"
        if self.exponent == 1:
            return "tau"
        return f"tau^{self.exponent}"


ZERO = TauCoeff(None)
ONE = TauCoeff(0)


def Tau(k: int) -> TauCoeff:
    return TauCoeff(k)


def chow_weight(d: Bidegree) -> int:
    """Chow weight 2w − p"""
    return 2 * d.w - d.p


def bidegree_add(a: Bidegree, b: Bidegree) -> Bidegree:
    return a + b


def tau_mul(a: TauCoeff, b: TauCoeff) -> TauCoeff:
    """τ 지수 덧셈, Zero 흡수"""
    if a.is_zero or b.is_zero:
        return ZERO
    return TauCoeff(_checked(a.exponent + b.exponent))
