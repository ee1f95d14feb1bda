"""
차트(Chart) 데이터 모델
- ExtSummand: (s, stem, weight) 위치의 Free 또는 M̃₂/τ^k 성분
- ProductEdge: h₀/h₁/h₂ 곱 간선 (τ_shift 포함)
- ClassExpr: 한 위치의 F₂[τ]-결합 {성분 번호: τ 지수}
"""
from collections import Counter
from dataclasses import dataclass, field, replace
from typing import Dict, Iterable, List, Optional, Tuple

from .errors import HomogeneityError, InsufficientFrontierError

# 곱셈 원소의 (Δs, Δstem, Δweight)
MULTIPLIERS: Dict[str, Tuple[int, int, int]] = {
    "h0": (1, 0, 0),
    "h1": (1, 1, 1),
    "h2": (1, 3, 2),
}

FREE = "free"
TORSION = "torsion"

Position = Tuple[int, int]
ClassRef = Tuple[int, int, int]


@dataclass(frozen=True)
class ExtSummand:
    """차트의 직합 성분 하나"""
    s: int
    stem: int
    weight: int
    order: Optional[int] = None
    label: Optional[str] = None
    index: int = 0
    exotic: bool = False

    @property
    def kind(self) -> str:
        return FREE if self.order is None else TORSION

    @property
    def t(self) -> int:
        return self.stem + self.s

    @property
    def ref(self) -> ClassRef:
        return (self.s, self.stem, self.index)


@dataclass(frozen=True)
class ProductEdge:
    source: ClassRef
    multiplier: str
    target: ClassRef
    tau_shift: int


@dataclass(frozen=True)
class ClassExpr:
    """
    (s, stem) 위치의 동차 원소

    terms: 성분 번호 → τ 지수, 모든 항이 같은 weight 를 가져야 한다.
    """
    s: int
    stem: int
    weight: int
    terms: Tuple[Tuple[int, int], ...] = ()

    @classmethod
    def of(cls, s: int, stem: int, weight: int, terms: Dict[int, int]) -> "ClassExpr":
        return cls(s, stem, weight, tuple(sorted(terms.items())))

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def as_dict(self) -> Dict[int, int]:
        return dict(self.terms)

    def __add__(self, other: "ClassExpr") -> "ClassExpr":
        if (self.s, self.stem) != (other.s, other.stem):
            raise HomogeneityError(f"다른 위치의 합: ({self.s},{self.stem}) + ({other.s},{other.stem})")
        if self.is_zero:
            return other
        if other.is_zero:
            return self
        if self.weight != other.weight:
            raise HomogeneityError(f"weight 불일치: {self.weight} + {other.weight}")
        merged = dict(self.terms)
        for k, e in other.terms:
            if k in merged:
                del merged[k]
            else:
                merged[k] = e
        return ClassExpr.of(self.s, self.stem, self.weight, merged)

    def tau(self, k: int = 1) -> "ClassExpr":
        return ClassExpr.of(self.s, self.stem, self.weight - k, {i: e + k for i, e in self.terms})


@dataclass
class Chart:
    """
    위치별 직합 성분 목록과 곱 간선

    kind: "ext", "may-e2", "may-e4", "may-einf", "adams-einf" 등
    """
    mode: str = "motivic"
    kind: str = "ext"
    max_s: int = 0
    max_stem: int = 0
    summands: List[ExtSummand] = field(default_factory=list)
    edges: List[ProductEdge] = field(default_factory=list)
    provenance: List[str] = field(default_factory=list)

    def positions(self) -> List[Position]:
        return sorted({(x.s, x.stem) for x in self.summands}, key=lambda p: (p[1], p[0]))

    def at(self, s: int, stem: int) -> List[ExtSummand]:
        return sorted((x for x in self.summands if x.s == s and x.stem == stem), key=lambda x: x.index)

    def get(self, ref: ClassRef) -> ExtSummand:
        s, stem, index = ref
        for x in self.summands:
            if (x.s, x.stem, x.index) == (s, stem, index):
                return x
        raise KeyError(f"성분 없음: {ref}")

    def find(self, label: str) -> Optional[ExtSummand]:
        for x in self.summands:
            if x.label == label:
                return x
        return None

    def in_range(self, s: int, stem: int) -> bool:
        return 0 <= s <= self.max_s and 0 <= stem <= self.max_stem

    def multiset(self, max_stem: Optional[int] = None, max_s: Optional[int] = None) -> Counter:
        """{(s, stem, weight, kind): 개수}"""
        return Counter(
            (x.s, x.stem, x.weight, x.kind)
            for x in self.summands
            if (max_stem is None or x.stem <= max_stem) and (max_s is None or x.s <= max_s)
        )

    def kinds(self, max_stem: Optional[int] = None, max_s: Optional[int] = None) -> Counter:
        """{(s, stem, kind): 개수}"""
        return Counter(
            (x.s, x.stem, x.kind)
            for x in self.summands
            if (max_stem is None or x.stem <= max_stem) and (max_s is None or x.s <= max_s)
        )

    def free_count(self, s: int, stem: int) -> int:
        return sum(1 for x in self.at(s, stem) if x.order is None)

    def edges_from(self, ref: ClassRef, multiplier: Optional[str] = None) -> List[ProductEdge]:
        return [e for e in self.edges if e.source == ref and (multiplier is None or e.multiplier == multiplier)]

    def basis_class(self, ref: ClassRef) -> ClassExpr:
        x = self.get(ref)
        return ClassExpr.of(x.s, x.stem, x.weight, {x.index: 0})

    def multiply(self, cls: ClassExpr, h: str) -> ClassExpr:
        """
        곱 간선으로 h·x 계산 (파일에서 읽은 차트에도 사용 가능)

        Raises:
            InsufficientFrontierError: 결과 위치가 차트 범위 밖일 때
        """
        ds, dstem, dw = MULTIPLIERS[h]
        if self.mode != "motivic":
            dw = 0
        s2, stem2 = cls.s + ds, cls.stem + dstem
        if not self.in_range(s2, stem2):
            raise InsufficientFrontierError(f"{h}·x 위치 (s={s2}, stem={stem2}) 가 차트 범위 밖입니다")
        orders = {x.index: x.order for x in self.at(s2, stem2)}
        result: Dict[int, int] = {}
        for index, exponent in cls.terms:
            for edge in self.edges_from((cls.s, cls.stem, index), h):
                j = edge.target[2]
                e = exponent + edge.tau_shift
                order = orders.get(j)
                if order is not None and e >= order:
                    continue
                if j in result:
                    del result[j]
                else:
                    result[j] = e
        return ClassExpr.of(s2, stem2, cls.weight + dw, result)

    def sorted_summands(self) -> List[ExtSummand]:
        return sorted(self.summands, key=lambda x: (x.stem, x.s, x.weight, x.index))

    def sorted_edges(self) -> List[ProductEdge]:
        return sorted(self.edges, key=lambda e: (e.source[1], e.source[0], e.source[2], e.multiplier,
                                                 e.target[1], e.target[0], e.target[2]))

    def with_labels(self, labels: Iterable[Tuple[int, int, int, str]]) -> "Chart":
        """(s, stem, weight, 이름) 이 정확히 한 성분에 맞을 때만 라벨 부착"""
        named = {x.ref: x for x in self.summands}
        for s, stem, weight, name in labels:
            hits = [x for x in self.summands if (x.s, x.stem, x.weight) == (s, stem, weight)]
            if len(hits) == 1 and hits[0].label is None:
                named[hits[0].ref] = replace(hits[0], label=name)
        return replace(self, summands=list(named.values()))


def weight_zero_slice(chart: Chart) -> Dict[Position, int]:
    """
    weight 0 조각의 F₂ 차원

    Free 성분은 항상 1, torsion 성분은 weight < 차수일 때만 기여.
    """
    dims: Dict[Position, int] = {}
    for x in chart.summands:
        if x.weight < 0:
            continue
        if x.order is None or x.weight < x.order:
            dims[(x.s, x.stem)] = dims.get((x.s, x.stem), 0) + 1
    return dims
