"""
Milnor 기저 모듈
- MilnorElt: 끝의 0을 제거한 정수 튜플 R = (r₁, r₂, …)
- milnor_bidegree / may_filtration / enumerate_basis
- milnor_product: Milnor 행렬 열거 + 가중치 동차성으로 τ 지수 결정
- dual_pairing_product: 쌍대 여곱(coproduct) 전개로 검산하는 독립 오라클
"""
import logging
from functools import lru_cache
from typing import Dict, Iterable, Iterator, List, Optional, Tuple

from .errors import HomogeneityError, IntegrityError, OracleBoundError
from .grading import Bidegree, TauCoeff, Tau, ZERO, ZERO_BIDEGREE

logger = logging.getLogger(__name__)

MilnorElt = Tuple[int, ...]

UNIT: MilnorElt = ()

DEFAULT_ORACLE_MAX_DEGREE = 16


def milnor(*r: int) -> MilnorElt:
    """정규형 MilnorElt 생성 (끝의 0 제거)"""
    entries = list(r)
    if any(x < 0 for x in entries):
        raise ValueError(f"Milnor 지수는 음수일 수 없습니다: {r}")
    while entries and entries[-1] == 0:
        entries.pop()
    return tuple(entries)


def milnor_bidegree(R: MilnorElt) -> Bidegree:
    """P^R 의 bidegree: (Σ rᵢ(2^i−1), Σ ⌊rᵢ(2^i−1)/2⌋)"""
    p = 0
    w = 0
    for i, r in enumerate(R, start=1):
        d = r * ((1 << i) - 1)
        p += d
        w += d // 2
    return Bidegree(p, w)


def milnor_degree(R: MilnorElt) -> int:
    return sum(r * ((1 << i) - 1) for i, r in enumerate(R, start=1))


def milnor_weight(R: MilnorElt) -> int:
    return sum((r * ((1 << i) - 1)) // 2 for i, r in enumerate(R, start=1))


def may_filtration(R: MilnorElt) -> int:
    """v(R) = Σ i · (rᵢ 의 이진 자릿수 1의 개수)"""
    return sum(i * bin(r).count("1") for i, r in enumerate(R, start=1))


@lru_cache(maxsize=None)
def _basis_of_degree(p: int) -> Tuple[MilnorElt, ...]:
    top = 0
    while (1 << (top + 1)) - 1 <= p:
        top += 1

    found: List[MilnorElt] = []

    def fill(i: int, remaining: int, tail: Tuple[int, ...]) -> None:
        # i번째 자리부터 역순으로 채움
        if i == 0:
            if remaining == 0:
                found.append(milnor(*tail))
            return
        step = (1 << i) - 1
        for r in range(remaining // step, -1, -1):
            fill(i - 1, remaining - r * step, (r,) + tail)

    if p == 0:
        return (UNIT,)
    fill(top, p, ())
    width = max((len(R) for R in found), default=0)
    found.sort(key=lambda R: R + (0,) * (width - len(R)), reverse=True)
    return tuple(found)


def enumerate_basis(p: int, w: Optional[int] = None) -> List[MilnorElt]:
    """
    위상 차수 p 의 Milnor 기저 (사전식 내림차순)

    Args:
        p: 위상 차수 (≥ 0)
        w: 지정 시 해당 weight 만 남김
    """
    if p < 0:
        raise ValueError(f"위상 차수는 음수일 수 없습니다: {p}")
    basis = _basis_of_degree(p)
    if w is None:
        return list(basis)
    return [R for R in basis if milnor_weight(R) == w]


def _digits_disjoint(values: Iterable[int]) -> bool:
    seen = 0
    for v in values:
        if seen & v:
            return False
        seen |= v
    return True


def _milnor_matrices(R: MilnorElt, S: MilnorElt) -> Iterator[Dict[Tuple[int, int], int]]:
    """행 조건 Σ_j 2^j x_ij = rᵢ, 열 조건 Σ_i x_ij = s_j 를 만족하는 행렬 (행 우선 사전식)"""
    rows = len(R)
    cols = len(S)
    cells = [(i, j) for i in range(1, rows + 1) for j in range(1, cols + 1)]
    x: Dict[Tuple[int, int], int] = {}
    row_left = list(R)
    col_left = list(S)

    def walk(k: int) -> Iterator[Dict[Tuple[int, int], int]]:
        if k == len(cells):
            full = dict(x)
            for i in range(1, rows + 1):
                full[(i, 0)] = row_left[i - 1]
            for j in range(1, cols + 1):
                full[(0, j)] = col_left[j - 1]
            yield full
            return
        i, j = cells[k]
        weight = 1 << j
        top = min(row_left[i - 1] // weight, col_left[j - 1])
        for v in range(top + 1):
            x[(i, j)] = v
            row_left[i - 1] -= v * weight
            col_left[j - 1] -= v
            yield from walk(k + 1)
            row_left[i - 1] += v * weight
            col_left[j - 1] += v
        x.pop((i, j), None)

    yield from walk(0)


@lru_cache(maxsize=None)
def product_terms(R: MilnorElt, S: MilnorElt) -> Tuple[Tuple[MilnorElt, int], ...]:
    """
    P^R · P^S 의 (T, τ 지수) 목록

    b(X) 는 대각선별 이진 자릿수 서로소 판정(Lucas), τ 지수는
    weight(R) + weight(S) − weight(T) 로 결정.
    """
    rows = len(R)
    cols = len(S)
    parity: Dict[MilnorElt, int] = {}
    order: List[MilnorElt] = []
    for X in _milnor_matrices(R, S):
        T: List[int] = []
        ok = True
        for n in range(1, rows + cols + 1):
            diagonal = [X.get((i, n - i), 0) for i in range(max(0, n - cols), min(n, rows) + 1)]
            if not _digits_disjoint(diagonal):
                ok = False
                break
            T.append(sum(diagonal))
        if not ok:
            continue
        key = milnor(*T)
        if key not in parity:
            parity[key] = 0
            order.append(key)
        parity[key] ^= 1

    w_total = milnor_weight(R) + milnor_weight(S)
    terms = []
    for T in order:
        if not parity[T]:
            continue
        u = w_total - milnor_weight(T)
        if u < 0:
            raise IntegrityError(f"u(X) < 0: P{R} · P{S} → P{T}, u={u}")
        terms.append((T, u))
    return tuple(terms)


class SteenrodElt:
    """
    A 의 동차 원소: Milnor 기저 위의 F₂[τ] 계수 합

    terms 에는 Zero 계수를 저장하지 않는다.
    """

    def __init__(self, terms: Optional[Dict[MilnorElt, TauCoeff]] = None, bidegree: Optional[Bidegree] = None):
        self.terms: Dict[MilnorElt, TauCoeff] = {}
        for R, c in (terms or {}).items():
            if not c.is_zero:
                self.terms[milnor(*R)] = c
        if bidegree is None:
            if not self.terms:
                bidegree = ZERO_BIDEGREE
            else:
                R, c = next(iter(self.terms.items()))
                bidegree = milnor_bidegree(R) + Bidegree(0, c.exponent)
        self.bidegree = bidegree
        for R, c in self.terms.items():
            if milnor_bidegree(R) + Bidegree(0, c.exponent) != bidegree:
                raise HomogeneityError(f"비동차 원소: P{R} 계수 {c}, 기대 bidegree {bidegree}")

    @classmethod
    def basis(cls, R: MilnorElt, tau: int = 0) -> "SteenrodElt":
        return cls({milnor(*R): Tau(tau)})

    @classmethod
    def zero(cls, bidegree: Bidegree = ZERO_BIDEGREE) -> "SteenrodElt":
        return cls({}, bidegree)

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SteenrodElt):
            return NotImplemented
        if self.is_zero and other.is_zero:
            return True
        return self.terms == other.terms

    def __hash__(self) -> int:
        return hash(frozenset(self.terms.items()))

    def __add__(self, other: "SteenrodElt") -> "SteenrodElt":
        if self.is_zero:
            return other
        if other.is_zero:
            return self
        if self.bidegree != other.bidegree:
            raise HomogeneityError(f"bidegree 불일치: {self.bidegree} + {other.bidegree}")
        merged = dict(self.terms)
        for R, c in other.terms.items():
            merged[R] = merged.get(R, ZERO) + c
        return SteenrodElt(merged, self.bidegree)

    def __mul__(self, other: "SteenrodElt") -> "SteenrodElt":
        result = SteenrodElt.zero(self.bidegree + other.bidegree)
        acc: Dict[MilnorElt, int] = {}
        for R, a in self.terms.items():
            for S, b in other.terms.items():
                for T, u in product_terms(R, S):
                    acc[T] = acc.get(T, 0) ^ 1
        for T, bit in acc.items():
            if bit:
                k = result.bidegree.w - milnor_weight(T)
                result.terms[T] = Tau(k)
        return result

    def sorted_terms(self) -> List[Tuple[MilnorElt, TauCoeff]]:
        width = max((len(R) for R in self.terms), default=0)
        return sorted(self.terms.items(), key=lambda kv: kv[0] + (0,) * (width - len(kv[0])), reverse=True)

    def __str__(self) -> str:
        if self.is_zero:
            return "0"
        parts = []
        for R, c in self.sorted_terms():
            name = format_milnor(R)
            parts.append(name if c.exponent == 0 else f"{c} {name}")
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"SteenrodElt({self})"


def format_milnor(R: MilnorElt) -> str:
    return "P(" + ",".join(str(r) for r in R) + ")"


def milnor_product(R: MilnorElt, S: MilnorElt) -> SteenrodElt:
    """P^R · P^S (τ 보정 포함)"""
    R, S = milnor(*R), milnor(*S)
    target = milnor_bidegree(R) + milnor_bidegree(S)
    return SteenrodElt({T: Tau(u) for T, u in product_terms(R, S)}, target)


def _pad(R: MilnorElt, n: int) -> Tuple[int, ...]:
    return tuple(R) + (0,) * (n - len(R))


def _coproduct_coefficient(T: MilnorElt, R: MilnorElt, S: MilnorElt) -> int:
    """ψ(ζ^T) 전개에서 ζ^R ⊗ ζ^S 의 계수 (mod 2)"""
    n = max(len(R), len(S), len(T))
    target_left = _pad(R, n)
    target_right = _pad(S, n)
    zero = (0,) * n
    terms = {(zero, zero)}

    for k, t_k in enumerate(T, start=1):
        # ψ(ζ_k) = Σ_i ζ_{k−i}^{2^i} ⊗ ζ_i
        factors = []
        for i in range(k + 1):
            left = [0] * n
            right = [0] * n
            if k - i > 0:
                left[k - i - 1] = 1 << i
            if i > 0:
                right[i - 1] = 1
            factors.append((tuple(left), tuple(right)))
        for _ in range(t_k):
            nxt = set()
            for left, right in terms:
                for fl, fr in factors:
                    nl = tuple(a + b for a, b in zip(left, fl))
                    nr = tuple(a + b for a, b in zip(right, fr))
                    if any(a > b for a, b in zip(nl, target_left)):
                        continue
                    if any(a > b for a, b in zip(nr, target_right)):
                        continue
                    nxt ^= {(nl, nr)}
            terms = nxt
    return 1 if (target_left, target_right) in terms else 0


def dual_pairing_product(R: MilnorElt, S: MilnorElt, max_degree: int = DEFAULT_ORACLE_MAX_DEGREE) -> SteenrodElt:
    """
    여곱 쌍대성으로 계산한 P^R · P^S (검산용 오라클)

    Raises:
        OracleBoundError: 총 차수가 max_degree 를 넘을 때
    """
    R, S = milnor(*R), milnor(*S)
    target = milnor_bidegree(R) + milnor_bidegree(S)
    if target.p > max_degree:
        raise OracleBoundError(f"오라클 상한 초과: 차수 {target.p} > {max_degree}")
    terms: Dict[MilnorElt, TauCoeff] = {}
    for T in enumerate_basis(target.p):
        if _coproduct_coefficient(T, R, S):
            u = target.w - milnor_weight(T)
            if u < 0:
                raise IntegrityError(f"오라클 τ 지수 음수: P{T}, u={u}")
            terms[T] = Tau(u)
    return SteenrodElt(terms, target)


def all_products(max_degree: int) -> Iterator[Tuple[MilnorElt, MilnorElt, Tuple[Tuple[MilnorElt, int], ...]]]:
    """총 차수 오름차순으로 모든 기저 쌍의 곱을 순회"""
    for total in range(max_degree + 1):
        for p in range(total + 1):
            for R in enumerate_basis(p):
                for S in enumerate_basis(total - p):
                    yield R, S, product_terms(R, S)


def check_associativity(max_degree: int) -> Tuple[int, List[str]]:
    """
    양의 차수 기저 세 쌍 (R, S, T), |R| + |S| + |T| ≤ max_degree 전부에 대해
    (P^R P^S) P^T = P^R (P^S P^T) 확인

    Returns:
        (확인한 세 쌍 수, 실패한 세 쌍 목록)
    """
    checked = 0
    failures: List[str] = []
    for a in range(1, max_degree - 1):
        for b in range(1, max_degree - a):
            for c in range(1, max_degree - a - b + 1):
                for R in enumerate_basis(a):
                    x = SteenrodElt.basis(R)
                    for S in enumerate_basis(b):
                        y = SteenrodElt.basis(S)
                        xy = x * y
                        for T in enumerate_basis(c):
                            z = SteenrodElt.basis(T)
                            checked += 1
                            if xy * z != x * (y * z):
                                failures.append(f"P{R}·P{S}·P{T}")
    logger.debug(f"결합법칙 확인: 세 쌍 {checked}개, 실패 {len(failures)}개")
    return checked, failures


def first_tau_power_degree(power: int = 2, max_degree: int = 30) -> Optional[int]:
    """계수 τ^k (k ≥ power) 가 처음 나타나는 총 위상 차수"""
    for R, S, terms in all_products(max_degree):
        if any(u >= power for _, u in terms):
            degree = milnor_degree(R) + milnor_degree(S)
            logger.info(f"tau^{power} 첫 등장: P{R} · P{S} (차수 {degree})")
            return degree
    return None
