"""
허용(admissible) 단항식 모듈
- Adem 관계식 재작성 (motivic τ 보정 포함)
- Milnor 기저와의 상호 변환
- 텍스트 표기 파싱/출력: "tau Sq3 Sq1", "P(1,1)"
"""
import logging
import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, List, Optional, Tuple

from .errors import HomogeneityError, IntegrityError
from .grading import Bidegree, TauCoeff, Tau, ZERO, ZERO_BIDEGREE
from .milnor import (
    MilnorElt,
    SteenrodElt,
    enumerate_basis,
    milnor,
    milnor_bidegree,
    milnor_weight,
    product_terms,
)

logger = logging.getLogger(__name__)

Word = Tuple[int, ...]


def sq_bidegree(a: int) -> Bidegree:
    """Sq^{2k} → (2k, k), Sq^{2k−1} → (2k−1, k−1)"""
    return Bidegree(a, a // 2)


def word_bidegree(word: Word) -> Bidegree:
    total = ZERO_BIDEGREE
    for a in word:
        total = total + sq_bidegree(a)
    return total


def is_admissible(word: Word) -> bool:
    """aᵢ ≥ 2aᵢ₊₁"""
    return all(word[i] >= 2 * word[i + 1] for i in range(len(word) - 1))


@dataclass(frozen=True)
class SqWord:
    """Sq^{a₁}…Sq^{a_k} 에 τ 계수를 곱한 단항식"""
    word: Word
    coeff: TauCoeff = Tau(0)

    def __post_init__(self):
        if any(a < 1 for a in self.word):
            raise ValueError(f"Sq 지수는 1 이상이어야 합니다: {self.word}")

    @property
    def bidegree(self) -> Bidegree:
        shift = 0 if self.coeff.is_zero else self.coeff.exponent
        return word_bidegree(self.word) + Bidegree(0, shift)


class AdmissibleElt:
    """허용 단항식 위의 동차 원소"""

    def __init__(self, terms: Optional[Dict[Word, TauCoeff]] = None, bidegree: Optional[Bidegree] = None):
        self.terms: Dict[Word, TauCoeff] = {w: c for w, c in (terms or {}).items() if not c.is_zero}
        for w in self.terms:
            if not is_admissible(w):
                raise ValueError(f"허용 단항식이 아닙니다: {w}")
        if bidegree is None:
            if self.terms:
                w, c = next(iter(self.terms.items()))
                bidegree = word_bidegree(w) + Bidegree(0, c.exponent)
            else:
                bidegree = ZERO_BIDEGREE
        self.bidegree = bidegree
        for w, c in self.terms.items():
            if word_bidegree(w) + Bidegree(0, c.exponent) != bidegree:
                raise HomogeneityError(f"비동차 원소: {w} 계수 {c}")

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, AdmissibleElt):
            return NotImplemented
        if self.is_zero and other.is_zero:
            return True
        return self.terms == other.terms

    def __add__(self, other: "AdmissibleElt") -> "AdmissibleElt":
        if self.is_zero:
            return other
        if other.is_zero:
            return self
        merged = dict(self.terms)
        for w, c in other.terms.items():
            merged[w] = merged.get(w, ZERO) + c
        return AdmissibleElt(merged, self.bidegree)

    def __mul__(self, other: "AdmissibleElt") -> "AdmissibleElt":
        bidegree = self.bidegree + other.bidegree
        acc: Dict[Word, int] = {}
        for w1 in self.terms:
            for w2 in other.terms:
                for w in _reduce_word(w1 + w2):
                    acc[w] = acc.get(w, 0) ^ 1
        return _from_parity(acc, bidegree)

    def __str__(self) -> str:
        if self.is_zero:
            return "0"
        parts = []
        for w, c in sorted(self.terms.items(), reverse=True):
            name = format_word(w)
            parts.append(name if c.exponent == 0 else f"{c} {name}")
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"AdmissibleElt({self})"


def _from_parity(acc: Dict[Word, int], bidegree: Bidegree) -> AdmissibleElt:
    terms = {}
    for w, bit in acc.items():
        if bit:
            k = bidegree.w - word_bidegree(w).w
            if k < 0:
                raise IntegrityError(f"음의 τ 지수: {w} in {bidegree}")
            terms[w] = Tau(k)
    return AdmissibleElt(terms, bidegree)


def _binom_mod2(n: int, k: int) -> int:
    if k < 0 or n < 0 or k > n:
        return 0
    return 1 if (n & k) == k else 0


@lru_cache(maxsize=None)
def adem_relation(a: int, b: int) -> Tuple[Tuple[Word, int], ...]:
    """
    Sq^a Sq^b (a < 2b) 전개

    Returns:
        ((단어, τ 지수), …) - τ 지수는 a, b 짝수이고 c 홀수일 때 1
    """
    if a >= 2 * b:
        return (((a, b), 0),)
    source = sq_bidegree(a) + sq_bidegree(b)
    terms = []
    for c in range(a // 2 + 1):
        if not _binom_mod2(b - 1 - c, a - 2 * c):
            continue
        word: Word = (a + b - c, c) if c > 0 else (a + b,)
        parity_rule = 1 if (a % 2 == 0 and b % 2 == 0 and c % 2 == 1) else 0
        by_weight = source.w - word_bidegree(word).w
        if by_weight != parity_rule:
            raise IntegrityError(
                f"Adem τ 지수 불일치: Sq{a} Sq{b} → {word}, 규칙 {parity_rule}, weight {by_weight}"
            )
        terms.append((word, parity_rule))
    return tuple(terms)


@lru_cache(maxsize=None)
def _reduce_word(word: Word) -> Tuple[Word, ...]:
    """가장 왼쪽의 비허용 쌍부터 재작성하여 허용 단어들의 합(mod 2)으로"""
    for i in range(len(word) - 1):
        a, b = word[i], word[i + 1]
        if a < 2 * b:
            acc: Dict[Word, int] = {}
            for rel_word, _ in adem_relation(a, b):
                for w in _reduce_word(word[:i] + rel_word + word[i + 2:]):
                    acc[w] = acc.get(w, 0) ^ 1
            return tuple(sorted(w for w, bit in acc.items() if bit))
    return (word,)


def adem_reduce(x: SqWord) -> AdmissibleElt:
    """임의 단어를 허용 단항식의 합으로"""
    if x.coeff.is_zero:
        return AdmissibleElt({}, word_bidegree(x.word))
    bidegree = x.bidegree
    acc = {w: 1 for w in _reduce_word(x.word)}
    return _from_parity(acc, bidegree)


@lru_cache(maxsize=None)
def _word_to_milnor(word: Word) -> Tuple[MilnorElt, ...]:
    """Sq^a ↦ P^(a) 로 두고 Milnor 곱으로 전개 (τ 는 weight 로 복원)"""
    current: Dict[MilnorElt, int] = {(): 1}
    for a in word:
        nxt: Dict[MilnorElt, int] = {}
        for R, bit in current.items():
            if not bit:
                continue
            for T, _ in product_terms(R, milnor(a)):
                nxt[T] = nxt.get(T, 0) ^ 1
        current = nxt
    return tuple(sorted(R for R, bit in current.items() if bit))


def admissible_to_milnor(x: AdmissibleElt) -> SteenrodElt:
    acc: Dict[MilnorElt, int] = {}
    for w in x.terms:
        for R in _word_to_milnor(w):
            acc[R] = acc.get(R, 0) ^ 1
    terms = {R: Tau(x.bidegree.w - milnor_weight(R)) for R, bit in acc.items() if bit}
    return SteenrodElt(terms, x.bidegree)


@lru_cache(maxsize=None)
def admissible_basis(p: int) -> Tuple[Word, ...]:
    """위상 차수 p 의 허용 단어 (사전식 내림차순)"""
    found: List[Word] = []

    def extend(prefix: Word, remaining: int) -> None:
        if remaining == 0:
            found.append(prefix)
            return
        # 마지막 원소 이후에는 a ≤ 이전/2
        top = remaining if not prefix else min(remaining, prefix[-1] // 2)
        for a in range(top, 0, -1):
            extend(prefix + (a,), remaining - a)

    extend((), p)
    return tuple(sorted(found, reverse=True))


@lru_cache(maxsize=None)
def _conversion_solver(p: int):
    """차수 p 에서 허용 → Milnor 변환 행렬의 열 축약기"""
    from .tau_linalg import ColumnReducer, MonomialMatrix

    milnor_basis = enumerate_basis(p)
    words = admissible_basis(p)
    if len(milnor_basis) != len(words):
        raise IntegrityError(f"차수 {p} 기저 크기 불일치: Milnor {len(milnor_basis)}, 허용 {len(words)}")
    index = {R: i for i, R in enumerate(milnor_basis)}
    columns = []
    for w in words:
        bits = 0
        for R in _word_to_milnor(w):
            bits |= 1 << index[R]
        columns.append(bits)
    # A 측 weight 는 부호를 뒤집어 "τ 가 weight 를 낮추는" 행렬 관례에 맞춤
    row_weights = [-milnor_weight(R) for R in milnor_basis]
    col_weights = [-word_bidegree(w).w for w in words]
    matrix = MonomialMatrix.from_support(row_weights, col_weights, columns)
    return ColumnReducer(matrix), index, words


def milnor_to_admissible(x: SteenrodElt) -> AdmissibleElt:
    """Milnor 기저 원소를 허용 단항식으로 (차수별 삼각 풀이)"""
    if x.is_zero:
        return AdmissibleElt({}, x.bidegree)
    reducer, index, words = _conversion_solver(x.bidegree.p)
    bits = 0
    for R in x.terms:
        bits |= 1 << index[R]
    combo = reducer.solve(bits, -x.bidegree.w)
    if combo is None:
        raise IntegrityError(f"허용 기저로 표현 불가: {x}")
    acc = {words[j]: 1 for j in range(len(words)) if combo >> j & 1}
    return _from_parity(acc, x.bidegree)


def format_word(word: Word) -> str:
    if not word:
        return "1"
    return " ".join(f"Sq{a}" for a in word)


_TERM_RE = re.compile(r"^(?:(tau)(?:\^(\d+))?\s*)?(.*)$")
_MILNOR_RE = re.compile(r"^P\(([\d,\s]*)\)$")


def _parse_tau(term: str) -> Tuple[int, str]:
    term = term.strip()
    match = _TERM_RE.match(term)
    tau = 0
    if match and match.group(1):
        tau = int(match.group(2) or 1)
        term = match.group(3).strip()
    return tau, term


def parse_admissible(text: str) -> AdmissibleElt:
    """
    "tau Sq3 Sq1 + Sq4" 형식 파싱 (비허용 단어는 Adem 재작성)

    Raises:
        ValueError: 문법 오류
    """
    text = text.strip()
    if text in ("", "0"):
        return AdmissibleElt()
    total: Optional[AdmissibleElt] = None
    for raw in text.split("+"):
        tau, body = _parse_tau(raw)
        if body in ("", "1"):
            word: Word = ()
        else:
            tokens = body.split()
            if not all(re.fullmatch(r"Sq\d+", t) for t in tokens):
                raise ValueError(f"Sq 단어를 해석할 수 없습니다: '{raw.strip()}'")
            word = tuple(int(t[2:]) for t in tokens)
        term = adem_reduce(SqWord(word, Tau(tau)))
        total = term if total is None else total + term
    return total


def parse_milnor(text: str) -> SteenrodElt:
    """
    "tau P(1,1) + P(4)" 형식 파싱, '*' 는 Milnor 곱 ('+' 보다 먼저 결합)

    Raises:
        ValueError: 문법 오류
    """
    text = text.strip()
    if text in ("", "0"):
        return SteenrodElt.zero()
    total: Optional[SteenrodElt] = None
    for raw in text.split("+"):
        term: Optional[SteenrodElt] = None
        for factor in raw.split("*"):
            x = _parse_milnor_factor(factor)
            term = x if term is None else term * x
        total = term if total is None else total + term
    return total


def _parse_milnor_factor(raw: str) -> SteenrodElt:
    tau, body = _parse_tau(raw)
    match = _MILNOR_RE.match(body.replace(" ", ""))
    if not match:
        raise ValueError(f"Milnor 원소를 해석할 수 없습니다: '{raw.strip()}'")
    entries = [int(v) for v in match.group(1).split(",") if v.strip()]
    return SteenrodElt.basis(milnor(*entries), tau)
