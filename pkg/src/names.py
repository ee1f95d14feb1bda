"""
클래스 이름 식 파서
- "tau^2 x + h0^7 h5", "h1^{k+2} d0", "[tau g]", "h0(1)" 형식
- 단항식은 (이름, 지수) 의 정렬된 튜플, 항은 (τ 지수, 단항식)
- ClassResolver: 차트 라벨 + h₀/h₁/h₂ 곱 간선으로 이름을 ClassExpr 로 해석
"""
import logging
import re
from itertools import product
from typing import Dict, List, Optional, Sequence, Tuple

from .chart import Chart, ClassExpr
from .errors import HomogeneityError, InsufficientFrontierError

logger = logging.getLogger(__name__)

NameMonomial = Tuple[Tuple[str, int], ...]
NameTerm = Tuple[int, NameMonomial]

_TOKEN = re.compile(
    r"\s*(?:(?P<name>\[[^\]]+\]|[A-Za-z][A-Za-z0-9]*(?:\(\d+\))?)(?:\^\{?(?P<exp>\d+)\}?)?|(?P<star>\*))"
)

# P 는 곱이 아닌 주기 연산자 이름이지만 차수 계산에서는 인수처럼 취급
PERIODICITY_DEGREE = (4, 8, 4)
H_FACTORS = ("h0", "h1", "h2")


class NameSyntaxError(ValueError):
    pass


def normalize_name(name: str) -> str:
    if name.startswith("["):
        return "[" + "".join(name[1:-1].split()) + "]"
    return name


def parse_monomial(text: str) -> Tuple[int, NameMonomial]:
    """단항식 하나 → (τ 지수, 단항식). 지수 0 인 인수는 생략"""
    text = text.strip()
    if text == "1":
        return 0, ()
    pos = 0
    tau = 0
    factors: Dict[str, int] = {}
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            raise NameSyntaxError(f"해석할 수 없는 식: {text!r} (위치 {pos})")
        pos = m.end()
        if m.group("star"):
            continue
        name = normalize_name(m.group("name"))
        exp = int(m.group("exp")) if m.group("exp") is not None else 1
        if name == "tau":
            tau += exp
        elif exp:
            factors[name] = factors.get(name, 0) + exp
    return tau, tuple(sorted(factors.items()))


def parse_expression(text: str) -> List[NameTerm]:
    """
    합 식 파싱, "0" 은 빈 목록

    Raises:
        NameSyntaxError: 문법 오류
    """
    text = str(text).strip()
    if text in ("", "0"):
        return []
    terms: Dict[NameTerm, int] = {}
    for part in text.split("+"):
        if not part.strip():
            raise NameSyntaxError(f"빈 항: {text!r}")
        term = parse_monomial(part)
        terms[term] = terms.get(term, 0) ^ 1
    return sorted(t for t, c in terms.items() if c)


def format_monomial(mono: NameMonomial, tau: int = 0) -> str:
    parts = []
    if tau:
        parts.append("tau" if tau == 1 else f"tau^{tau}")
    for name, exp in mono:
        parts.append(name if exp == 1 else f"{name}^{exp}")
    return " ".join(parts) if parts else "1"


def format_expression(terms: Sequence[NameTerm]) -> str:
    if not terms:
        return "0"
    return " + ".join(format_monomial(m, tau) for tau, m in terms)


def canonical_key(text: str) -> NameMonomial:
    """라벨 문자열 → 비교용 단항식 (τ 없는 라벨만)"""
    tau, mono = parse_monomial(text)
    if tau:
        raise NameSyntaxError(f"라벨에 tau 가 포함될 수 없습니다: {text!r}")
    return mono


def substitute_family(template: str, var: str, value: int) -> str:
    """'{k}', '{k+2}' 치환"""
    pattern = re.compile(r"\{" + re.escape(var) + r"(?:\s*\+\s*(\d+))?\}")
    return pattern.sub(lambda m: str(value + int(m.group(1) or 0)), template)


Degree = Tuple[int, int, int]


class ClassResolver:
    """
    이름 식을 차트 원소로 해석

    해석 순서:
      1. 단항식 전체가 차트 라벨과 일치
      2. h0/h1/h2 인수를 떼어낸 나머지가 라벨이면 곱 간선으로 곱함
      3. 계산된 위치에 그 weight 의 성분이 하나뿐이면 그 성분

    Args:
        chart: 라벨이 붙은 차트
        degrees: 라벨 표에 없는 추가 이름의 (s, stem, weight)
        labels: 차트 범위 밖 이름의 차수를 알기 위한 라벨 표 [(s, stem, weight, 이름)]
    """

    def __init__(self, chart: Chart, degrees: Optional[Dict[str, Degree]] = None,
                 labels: Optional[Sequence[Tuple[int, int, int, str]]] = None):
        self.chart = chart
        self.labels: Dict[NameMonomial, Tuple[int, int, int]] = {}
        self.degrees: Dict[str, Degree] = {"P": PERIODICITY_DEGREE}
        self._label_degrees: Dict[NameMonomial, Degree] = {}
        known = [(x.s, x.stem, x.weight, x.label, x.ref) for x in chart.summands if x.label]
        known += [(s, stem, w, name, None) for s, stem, w, name in labels or []]
        for s, stem, w, label, ref in known:
            try:
                key = canonical_key(label)
            except NameSyntaxError:
                logger.warning(f"라벨 해석 실패, 건너뜀: {label!r}")
                continue
            if ref is not None:
                self.labels[key] = ref
            self._label_degrees.setdefault(key, (s, stem, w))
            if len(key) == 1 and key[0][1] == 1:
                self.degrees.setdefault(key[0][0], (s, stem, w))
        for name, deg in (degrees or {}).items():
            self.degrees[normalize_name(name)] = tuple(deg)

    def monomial_degree(self, mono: NameMonomial, tau: int = 0) -> Degree:
        """
        Raises:
            KeyError: 차수를 모르는 이름
        """
        motivic = self.chart.mode == "motivic"
        known = self._label_degrees.get(mono)
        if known is not None:
            s, stem, w = known
            return (s, stem, (w if motivic else 0) - tau)
        s = stem = w = 0
        for name, exp in mono:
            if name not in self.degrees:
                raise KeyError(f"알 수 없는 이름: {name}")
            ds, dstem, dw = self.degrees[name]
            s += exp * ds
            stem += exp * dstem
            w += exp * dw
        if not motivic:
            w = 0
        return (s, stem, w - tau)

    def degree(self, terms: Sequence[NameTerm]) -> Optional[Degree]:
        """식의 차수, 빈 식이면 None. 항마다 다르면 HomogeneityError"""
        result = None
        for tau, mono in terms:
            d = self.monomial_degree(mono, tau if self.chart.mode == "motivic" else 0)
            if result is not None and d != result:
                raise HomogeneityError(f"비동차 식: {format_expression(terms)} ({result} ≠ {d})")
            result = d
        return result

    def _from_label(self, mono: NameMonomial) -> Optional[ClassExpr]:
        ref = self.labels.get(mono)
        return self.chart.basis_class(ref) if ref is not None else None

    def resolve_monomial(self, mono: NameMonomial) -> ClassExpr:
        """
        Raises:
            KeyError: 해석 불가
            InsufficientFrontierError: 곱 결과가 차트 범위 밖
        """
        direct = self._from_label(mono)
        if direct is not None:
            return direct
        factors = dict(mono)
        h_exps = [factors.get(h, 0) for h in H_FACTORS]
        rest = {k: v for k, v in factors.items() if k not in H_FACTORS}
        removals = sorted(
            product(*(range(e + 1) for e in h_exps)),
            key=lambda r: (sum(r), r),
        )
        for removal in removals:
            if not any(removal):
                continue
            base = dict(rest)
            for h, e, r in zip(H_FACTORS, h_exps, removal):
                if e - r:
                    base[h] = e - r
            if not base:
                continue
            cls = self._from_label(tuple(sorted(base.items())))
            if cls is None:
                continue
            for h, r in zip(H_FACTORS, removal):
                for _ in range(r):
                    cls = self.chart.multiply(cls, h)
            return cls
        s, stem, w = self.monomial_degree(mono)
        hits = [x for x in self.chart.at(s, stem) if x.weight == w]
        if len(hits) == 1:
            return self.chart.basis_class(hits[0].ref)
        raise KeyError(f"차트에서 찾을 수 없는 클래스: {format_monomial(mono)} (s={s}, stem={stem}, w={w})")

    def resolve(self, text: str) -> ClassExpr:
        """
        식 전체를 해석 (τ 곱과 합 포함)

        Raises:
            NameSyntaxError, KeyError, HomogeneityError, InsufficientFrontierError
        """
        terms = parse_expression(text)
        degree = self.degree(terms)
        if degree is None:
            raise KeyError(f"0 은 클래스로 해석할 수 없습니다: {text!r}")
        s, stem, w = degree
        total = ClassExpr(s, stem, w)
        for tau, mono in terms:
            cls = self.resolve_monomial(mono)
            if tau and self.chart.mode == "motivic":
                cls = cls.tau(tau)
            if cls.is_zero:
                cls = ClassExpr(s, stem, w)
            total = total + cls
        if total.terms:
            orders = {x.index: x.order for x in self.chart.at(s, stem)}
            kept = {i: e for i, e in total.terms if orders.get(i) is None or e < orders[i]}
            total = ClassExpr.of(s, stem, w, kept)
        return total

    def in_frontier(self, degree: Degree) -> bool:
        s, stem, _ = degree
        return self.chart.in_range(s, stem)


__all__ = [
    "NameSyntaxError", "parse_expression", "parse_monomial", "format_expression", "format_monomial",
    "canonical_key", "substitute_family", "ClassResolver",
]
