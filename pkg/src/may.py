"""
모티빅 May 스펙트럴 시퀀스
- DGA F₂[τ, h_ij]: d(h_ij) = Σ_{0<k<i} h_kj h_{i−k,k+j}, d(τ) = 0
- E₂: 다중차수 (m, stem, f, w) 별 코호몰로지, 생성원 표의 단항식으로 기저 선택
- d₂ (생성원 값 + Leibniz), d₄/d₈ (원자 단항식 값) ledger 로 E₄, E∞ 계산
"""
import logging
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import yaml

from .batch_processor import BatchProcessor
from .chart import Chart, ExtSummand
from .errors import HomogeneityError, IntegrityError, LedgerError, LedgerRejection, TruncationError
from .grading import MayDegree, TauCoeff
from .names import NameSyntaxError, parse_expression, parse_monomial
from .ss_ledger import Outgoing, PagePosition, turn_positions
from .tau_linalg import ColumnReducer, MonomialMatrix, Subquotient

logger = logging.getLogger(__name__)

HIndex = Tuple[int, int]
DGAMonomial = Tuple[Tuple[HIndex, int], ...]
Key = Tuple[int, int, int, int]          # (m, stem, f, w)
PosKey = Tuple[int, int, int]            # (m, stem, f)
GenMonomial = Tuple[int, ...]            # MAY_GENERATORS 순서의 지수


@dataclass(frozen=True, order=True)
class MayGen:
    """h_ij (i ≥ 1, j ≥ 0)"""
    i: int
    j: int

    def __post_init__(self):
        if self.i < 1 or self.j < 0:
            raise ValueError(f"h_ij 첨자 오류: i={self.i}, j={self.j}")

    @property
    def degree(self) -> MayDegree:
        return h_degree(self.i, self.j)

    @property
    def name(self) -> str:
        return h_name((self.i, self.j))


def h_degree(i: int, j: int) -> MayDegree:
    if j == 0:
        return MayDegree(i, 2 ** i - 2, 1, 2 ** (i - 1) - 1)
    return MayDegree(i, 2 ** j * (2 ** i - 1) - 1, 1, 2 ** (j - 1) * (2 ** i - 1))


TAU_DEGREE = MayDegree(0, 0, 0, -1)


def h_name(ij: HIndex) -> str:
    i, j = ij
    return f"h{i}{j}" if i < 10 and j < 10 else f"h{i},{j}"


def _parse_h(name: str) -> HIndex:
    body = name[1:]
    if not name.startswith("h"):
        raise NameSyntaxError(f"h_ij 이름이 아닙니다: {name}")
    if "," in body:
        i, j = body.split(",")
        return int(i), int(j)
    if len(body) != 2 or not body.isdigit():
        raise NameSyntaxError(f"h_ij 이름이 아닙니다: {name}")
    return int(body[0]), int(body[1])


def monomial_degree(mono: DGAMonomial) -> MayDegree:
    m = s = f = w = 0
    for (i, j), e in mono:
        d = h_degree(i, j)
        m += e * d.m
        s += e * d.s
        f += e * d.f
        w += e * d.w
    return MayDegree(m, s, f, w)


def _mono_mul(a: DGAMonomial, b: DGAMonomial) -> DGAMonomial:
    exps = dict(a)
    for g, e in b:
        exps[g] = exps.get(g, 0) + e
    return tuple(sorted(exps.items()))


def _mono_div(a: DGAMonomial, g: HIndex) -> DGAMonomial:
    exps = dict(a)
    exps[g] -= 1
    if not exps[g]:
        del exps[g]
    return tuple(sorted(exps.items()))


def _h(i: int, j: int) -> DGAMonomial:
    return (((i, j), 1),)


@lru_cache(maxsize=None)
def _d_generator(i: int, j: int) -> frozenset:
    out = set()
    for k in range(1, i):
        out ^= {_mono_mul(_h(k, j), _h(i - k, k + j))}
    return frozenset(out)


@lru_cache(maxsize=None)
def _d_monomial(mono: DGAMonomial) -> frozenset:
    """Leibniz, 지수가 짝수인 인수는 기여 없음"""
    out = set()
    for g, e in mono:
        if e % 2 == 0:
            continue
        rest = _mono_div(mono, g)
        for term in _d_generator(*g):
            out ^= {_mono_mul(rest, term)}
    return frozenset(out)


@dataclass(frozen=True)
class MayPoly:
    """DGA 원소: h_ij 단항식 → τ 지수 (동차)"""
    terms: Tuple[Tuple[DGAMonomial, int], ...] = ()

    @classmethod
    def of(cls, terms: Dict[DGAMonomial, TauCoeff]) -> "MayPoly":
        kept = {mono: c.exponent for mono, c in terms.items() if not c.is_zero}
        poly = cls(tuple(sorted(kept.items())))
        poly.degree
        return poly

    @classmethod
    def generator(cls, i: int, j: int) -> "MayPoly":
        return cls(((_h(i, j), 0),))

    @classmethod
    def parse(cls, text: str) -> "MayPoly":
        """'tau h20 h21 + h11 h30'"""
        out = cls()
        for tau, mono in parse_expression(text):
            exps: Dict[HIndex, int] = {}
            for name, e in mono:
                g = _parse_h(name)
                exps[g] = exps.get(g, 0) + e
            out = out + cls(((tuple(sorted(exps.items())), tau),))
        return out

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def degree(self) -> Optional[MayDegree]:
        result = None
        for mono, tau in self.terms:
            d = monomial_degree(mono)
            d = MayDegree(d.m, d.s, d.f, d.w - tau)
            if result is not None and d != result:
                raise HomogeneityError(f"비동차 May 다항식: {self}")
            result = d
        return result

    def __add__(self, other: "MayPoly") -> "MayPoly":
        merged = dict(self.terms)
        for mono, tau in other.terms:
            if mono in merged:
                if merged[mono] != tau:
                    raise HomogeneityError(f"비동차 합: {self} + {other}")
                del merged[mono]
            else:
                merged[mono] = tau
        out = MayPoly(tuple(sorted(merged.items())))
        out.degree
        return out

    def __mul__(self, other: "MayPoly") -> "MayPoly":
        merged: Dict[DGAMonomial, int] = {}
        for a, ta in self.terms:
            for b, tb in other.terms:
                mono = _mono_mul(a, b)
                if mono in merged:
                    del merged[mono]
                else:
                    merged[mono] = ta + tb
        return MayPoly(tuple(sorted(merged.items())))

    def monomials(self) -> List[DGAMonomial]:
        return [mono for mono, _ in self.terms]

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for mono, tau in self.terms:
            factors = [] if not tau else ["tau" if tau == 1 else f"tau^{tau}"]
            factors += [h_name(g) if e == 1 else f"{h_name(g)}^{e}" for g, e in mono]
            parts.append(" ".join(factors) or "1")
        return " + ".join(parts)


def dga_differential(x: MayPoly) -> MayPoly:
    """(m, s, f, w) → (m, s−1, f+1, w)"""
    merged: Dict[DGAMonomial, int] = {}
    for mono, tau in x.terms:
        for term in _d_monomial(mono):
            if term in merged:
                del merged[term]
            else:
                merged[term] = tau
    return MayPoly(tuple(sorted(merged.items())))


# E₂ 의 이름 붙은 생성원: (이름, DGA 대표, 기대 차수 (m, stem, f, w))
MAY_GENERATORS: List[Tuple[str, str, Tuple[int, int, int, int]]] = [
    ("h0", "h10", (1, 0, 1, 0)),
    ("h1", "h11", (1, 1, 1, 1)),
    ("h2", "h12", (1, 3, 1, 2)),
    ("h3", "h13", (1, 7, 1, 4)),
    ("h4", "h14", (1, 15, 1, 8)),
    ("h5", "h15", (1, 31, 1, 16)),
    ("b20", "h20^2", (4, 4, 2, 2)),
    ("b21", "h21^2", (4, 10, 2, 6)),
    ("b22", "h22^2", (4, 22, 2, 12)),
    ("b30", "h30^2", (6, 12, 2, 6)),
    ("b31", "h31^2", (6, 26, 2, 14)),
    ("b40", "h40^2", (8, 28, 2, 14)),
    ("h0(1)", "h20 h21 + h11 h30", (4, 7, 2, 4)),
    ("h1(1)", "h21 h22 + h12 h31", (4, 16, 2, 9)),
    ("h2(1)", "h22 h23 + h13 h32", (4, 34, 2, 18)),
]
GENERATOR_NAMES = [name for name, _, _ in MAY_GENERATORS]
_GEN_INDEX = {name: k for k, name in enumerate(GENERATOR_NAMES)}
_GEN_REPS = [MayPoly.parse(rep) for _, rep, _ in MAY_GENERATORS]
_GEN_DEGREES = [rep.degree for rep in _GEN_REPS]

# E₂ 곱 관계식 (좌변, 우변)
MAY_RELATIONS: List[Tuple[str, str]] = [
    ("h0 h1", "0"), ("h1 h2", "0"), ("h2 h3", "0"), ("h3 h4", "0"),
    ("h2 b20", "h0 h0(1)"), ("h3 b21", "h1 h1(1)"), ("h2 h0(1)", "h0 b21"), ("h3 h0(1)", "0"),
    ("h0 h1(1)", "0"), ("h3 h1(1)", "h1 b22"), ("h4 h1(1)", "0"), ("h1 h2(1)", "0"),
    ("b20 b22", "h0^2 b31 + h3^2 b30"), ("b20 h1(1)", "h1 h3 b30"), ("b22 h0(1)", "h0 h2 b31"),
    ("h0(1)^2", "b20 b21 + h1^2 b30"), ("h1(1)^2", "b21 b22 + h2^2 b31"), ("h0(1) h1(1)", "0"),
]


def gen_monomial_degree(exps: GenMonomial) -> MayDegree:
    m = s = f = w = 0
    for e, d in zip(exps, _GEN_DEGREES):
        if e:
            m += e * d.m
            s += e * d.s
            f += e * d.f
            w += e * d.w
    return MayDegree(m, s, f, w)


def gen_monomial_name(exps: GenMonomial) -> str:
    parts = [n if e == 1 else f"{n}^{e}" for n, e in zip(GENERATOR_NAMES, exps) if e]
    return " ".join(parts) if parts else "1"


def parse_gen_monomial(text: str) -> Tuple[int, GenMonomial]:
    """'tau h1^3' → (τ 지수, 지수 튜플)"""
    tau, mono = parse_monomial(text)
    return tau, _to_exps(mono)


def _to_exps(mono) -> GenMonomial:
    exps = [0] * len(GENERATOR_NAMES)
    for name, e in mono:
        if name not in _GEN_INDEX:
            raise KeyError(f"May 생성원이 아닙니다: {name}")
        exps[_GEN_INDEX[name]] += e
    return tuple(exps)


def _exps_add(a: GenMonomial, b: GenMonomial) -> GenMonomial:
    return tuple(x + y for x, y in zip(a, b))


def dga_generators(max_stem: int, max_m: int) -> List[HIndex]:
    """stem ≤ max_stem + 2, i ≤ max_m 인 h_ij"""
    out = []
    i = 1
    while i <= max_m and h_degree(i, 0).s <= max_stem + 2:
        j = 0
        while h_degree(i, j).s <= max_stem + 2:
            out.append((i, j))
            j += 1
        i += 1
    return out


def _enumerate(degrees: Sequence[Tuple[int, int, int]], max_stem: int, max_m: int, max_f: int):
    """지수 튜플 전체 (stem, m, f 상한)"""
    n = len(degrees)
    exps = [0] * n

    def rec(k: int, m: int, s: int, f: int):
        if k == n:
            yield tuple(exps)
            return
        dm, ds, df = degrees[k]
        e = 0
        while m + e * dm <= max_m and s + e * ds <= max_stem and f + e * df <= max_f:
            exps[k] = e
            yield from rec(k + 1, m + e * dm, s + e * ds, f + e * df)
            e += 1
        exps[k] = 0

    yield from rec(0, 0, 0, 0)


def required_max_m(max_stem: int, max_f: int) -> int:
    """h_ij 의 m − 1 ≤ stem/2 이므로 이 값이면 열거 범위의 m 은 잘리지 않는다"""
    return max_f + 2 + (max_stem + 2) // 2


class MayE2:
    """
    May E₂ (= DGA 코호몰로지) 를 범위 안에서 계산

    범위: stem ≤ max_stem + 1, f ≤ max_f + 1 의 다중차수. DGA 단항식은
    stem ≤ max_stem + 2, f ≤ max_f + 2 까지 열거한다.

    Args:
        motivic: False 이면 모든 weight 0 (τ = 1)
    """

    def __init__(self, max_stem: int, max_f: int, max_m: Optional[int] = None,
                 motivic: bool = True, workers: int = 1):
        if max_stem < 0 or max_f < 0:
            raise ValueError(f"범위는 음수일 수 없습니다: stem={max_stem}, f={max_f}")
        self.max_stem = max_stem
        self.max_f = max_f
        self.max_m = max_m if max_m is not None else required_max_m(max_stem, max_f)
        self.motivic = motivic
        self.h_gens = dga_generators(max_stem, self.max_m)

        self.monomials: Dict[Key, List[DGAMonomial]] = {}
        self._index: Dict[Key, Dict[DGAMonomial, int]] = {}
        degrees = [h_degree(i, j) for i, j in self.h_gens]
        for exps in _enumerate([(d.m, d.s, d.f) for d in degrees], max_stem + 2, self.max_m, max_f + 2):
            mono = tuple((g, e) for g, e in zip(self.h_gens, exps) if e)
            self.monomials.setdefault(self.key_of(monomial_degree(mono)), []).append(mono)
        for key, monos in self.monomials.items():
            monos.sort()
            self._index[key] = {mono: k for k, mono in enumerate(monos)}
        logger.info(f"May DGA: h_ij {len(self.h_gens)}개, 단항식 {sum(map(len, self.monomials.values()))}개")

        keys = sorted(k for k in self.monomials if k[1] <= max_stem + 1 and k[2] <= max_f + 1)
        processor = BatchProcessor(max_workers=workers, label="may-e2")
        self.homology: Dict[Key, Subquotient] = dict(zip(keys, processor.map_ordered(self._homology, keys)))

        self._reps: Dict[GenMonomial, frozenset] = {}
        self.basis: Dict[Key, List[GenMonomial]] = {}
        self._solvers: Dict[Key, ColumnReducer] = {}
        self._coords: Dict[GenMonomial, int] = {}
        self._select_bases()

        self.covers: Dict[PosKey, List[Tuple[GenMonomial, int]]] = {}
        self._offsets: Dict[Key, int] = {}
        for key in sorted(self.basis, key=lambda k: (k[0], k[1], k[2], k[3])):
            pos = key[:3]
            cover = self.covers.setdefault(pos, [])
            self._offsets[key] = len(cover)
            cover.extend((g, key[3]) for g in self.basis[key])

    @property
    def mode(self) -> str:
        return "motivic" if self.motivic else "classical"

    def key_of(self, d: MayDegree) -> Key:
        return (d.m, d.s, d.f, d.w if self.motivic else 0)

    def in_range(self, m: int, stem: int, f: int) -> bool:
        return stem <= self.max_stem + 1 and f <= self.max_f + 1 and m <= self.max_m

    def _bits(self, key: Key, monos: Iterable[DGAMonomial]) -> int:
        index = self._index.get(key, {})
        out = 0
        for mono in monos:
            k = index.get(mono)
            if k is None:
                raise TruncationError(f"DGA 단항식이 절단 범위 밖: {mono} @ {key}")
            out ^= 1 << k
        return out

    def _homology(self, key: Key) -> Subquotient:
        m, stem, f, w = key
        monos = self.monomials[key]
        target = (m, stem - 1, f + 1, w)
        rows = self.monomials.get(target, [])
        columns = [self._bits(target, _d_monomial(mono)) if rows else 0 for mono in monos]
        for mono, col in zip(monos, columns):
            if not rows and _d_monomial(mono):
                raise TruncationError(f"d({mono}) 의 대상이 절단 범위 밖")
        d = MonomialMatrix.from_support([0] * len(rows), [0] * len(monos), columns)
        cycles = ColumnReducer(d).kernel_vectors
        source = (m, stem + 1, f - 1, w)
        boundaries = []
        for mono in self.monomials.get(source, []):
            image = self._bits(key, _d_monomial(mono))
            if image:
                boundaries.append((image, 0))
        return Subquotient([0] * len(monos), cycles, boundaries)

    def representative(self, exps: GenMonomial) -> frozenset:
        """생성원 단항식의 DGA 대표 (단항식 집합)"""
        cached = self._reps.get(exps)
        if cached is not None:
            return cached
        k = next((i for i, e in enumerate(exps) if e), None)
        if k is None:
            rep = frozenset({()})
        else:
            rest = list(exps)
            rest[k] -= 1
            inner = self.representative(tuple(rest))
            out = set()
            for a in inner:
                for b, _ in _GEN_REPS[k].terms:
                    out ^= {_mono_mul(a, b)}
            rep = frozenset(out)
        self._reps[exps] = rep
        return rep

    def _homology_coords(self, exps: GenMonomial) -> Tuple[Key, int]:
        key = self.key_of(gen_monomial_degree(exps))
        h = self.homology.get(key)
        if h is None:
            if not self.in_range(key[0], key[1], key[2]):
                raise TruncationError(f"{gen_monomial_name(exps)} 의 차수 {key} 가 절단 범위 밖입니다")
            return key, 0
        bits = self._bits(key, self.representative(exps))
        if not h.is_cycle(bits, 0):
            raise IntegrityError(f"{gen_monomial_name(exps)} 의 대표가 cocycle 이 아닙니다")
        coords = 0
        for k in h.project(bits, 0):
            coords |= 1 << k
        return key, coords

    def _select_bases(self) -> None:
        candidates: Dict[Key, List[GenMonomial]] = {}
        degrees = [(d.m, d.s, d.f) for d in _GEN_DEGREES]
        for exps in _enumerate(degrees, self.max_stem + 1, self.max_m, self.max_f + 1):
            key = self.key_of(gen_monomial_degree(exps))
            if key in self.homology:
                candidates.setdefault(key, []).append(exps)

        for key, h in self.homology.items():
            dim = len(h.summands)
            if not dim:
                continue
            chosen: List[GenMonomial] = []
            columns: List[int] = []
            pivots: Dict[int, int] = {}
            for exps in sorted(candidates.get(key, []), reverse=True):
                _, v = self._homology_coords(exps)
                while v:
                    low = (v & -v).bit_length() - 1
                    if low not in pivots:
                        break
                    v ^= pivots[low]
                if v:
                    pivots[(v & -v).bit_length() - 1] = v
                    chosen.append(exps)
                    columns.append(self._homology_coords(exps)[1])
                    if len(chosen) == dim:
                        break
            if len(chosen) < dim:
                raise IntegrityError(
                    f"E₂ {key}: 이름 붙은 생성원의 곱이 {len(chosen)}/{dim} 차원만 생성합니다"
                )
            self.basis[key] = chosen
            self._solvers[key] = ColumnReducer(MonomialMatrix.from_support([0] * dim, [0] * dim, columns))

    def coordinates(self, exps: GenMonomial) -> Tuple[Key, int]:
        """생성원 단항식의 E₂ 좌표 (선택된 기저 비트셋)"""
        cached = self._coords.get(exps)
        if cached is not None:
            return self.key_of(gen_monomial_degree(exps)), cached
        key, v = self._homology_coords(exps)
        if not v:
            bits = 0
        else:
            bits = self._solvers[key].solve(v, 0)
            if bits is None:
                raise IntegrityError(f"E₂ 좌표 계산 실패: {gen_monomial_name(exps)}")
        self._coords[exps] = bits
        return key, bits

    def position_vector(self, exps: GenMonomial) -> Tuple[PosKey, int]:
        """위치 (m, stem, f) 덮개 기저 위의 비트셋"""
        key, bits = self.coordinates(exps)
        return key[:3], bits << self._offsets[key] if bits else 0

    def expression_vector(self, terms: Sequence[Tuple[int, GenMonomial]]) -> Tuple[Optional[PosKey], int, Optional[int]]:
        """τ^c N 합의 (위치, 비트셋, weight)"""
        pos = None
        weight = None
        out = 0
        for tau, exps in terms:
            d = gen_monomial_degree(exps)
            w = (d.w - tau) if self.motivic else 0
            p, bits = self.position_vector(exps)
            if pos is not None and (p != pos or w != weight):
                raise HomogeneityError(f"비동차 E₂ 식: {p}/{w} ≠ {pos}/{weight}")
            pos, weight = p, w
            out ^= bits
        return pos, out, weight

    def class_of(self, text: str) -> Tuple[MayDegree, int]:
        """이름 식 → (차수, 덮개 비트셋). 0 이면 비트셋 0"""
        terms = [(tau, _to_exps(mono)) for tau, mono in parse_expression(text)]
        if not terms:
            raise ValueError(f"0 은 차수가 없습니다: {text!r}")
        pos, bits, weight = self.expression_vector(terms)
        return MayDegree(pos[0], pos[1], pos[2], weight), bits

    def relation_holds(self, lhs: str, rhs: str) -> bool:
        left = [(tau, _to_exps(mono)) for tau, mono in parse_expression(lhs)]
        right = [(tau, _to_exps(mono)) for tau, mono in parse_expression(rhs)]
        _, lv, _ = self.expression_vector(left)
        if not right:
            return lv == 0
        _, rv, _ = self.expression_vector(right)
        return lv == rv

    def ranks(self) -> Dict[PosKey, int]:
        """(m, stem, f) 별 E₂ 랭크 (weight 합산)"""
        return {pos: len(cover) for pos, cover in self.covers.items()}


@dataclass(frozen=True)
class MayDifferential:
    """ledger 원자: d_r(source) = Σ τ^c value"""
    page: int
    source: GenMonomial
    value: Tuple[Tuple[int, GenMonomial], ...]
    text: str = ""


def load_may_ledger(data, max_page: Optional[int] = None) -> List[MayDifferential]:
    """
    May ledger 검증

    항목: {page, source, value}. source 는 τ 없는 생성원 단항식.
    값의 모든 항은 (m − r + 1, stem − 1, f + 1, w) 차수여야 한다.

    Raises:
        LedgerError: 거부 항목 목록 포함
    """
    entries = data.get("entries", []) if isinstance(data, dict) else data
    out: List[MayDifferential] = []
    rejections: List[LedgerRejection] = []
    for raw in entries or []:
        try:
            page = int(raw["page"])
            if page < 2:
                raise ValueError(f"페이지는 2 이상이어야 합니다: {page}")
            if max_page is not None and page > max_page:
                continue
            source_text = str(raw["source"])
            value_text = str(raw.get("value", raw.get("target", "0")))
            tau, source = parse_gen_monomial(source_text)
            if tau or not any(source):
                raise ValueError(f"원천은 τ 없는 생성원 단항식이어야 합니다: {source_text}")
            d = gen_monomial_degree(source)
            expected = (d.m - page + 1, d.s - 1, d.f + 1, d.w)
            value = []
            for c, mono in parse_expression(value_text):
                exps = _to_exps(mono)
                v = gen_monomial_degree(exps)
                got = (v.m, v.s, v.f, v.w - c)
                if got != expected:
                    raise HomogeneityError(f"값 {gen_monomial_name(exps)} 의 차수 {got} ≠ 기대 {expected}")
                value.append((c, exps))
            out.append(MayDifferential(page, source, tuple(value), f"d{page}({source_text}) = {value_text}"))
        except (KeyError, ValueError, TypeError, NameSyntaxError) as e:
            rejections.append(LedgerRejection(raw, str(e)))
    if rejections:
        raise LedgerError(f"May ledger 항목 {len(rejections)}개 거부", rejections)
    return out


def load_may_ledger_file(path: Path, max_page: Optional[int] = None) -> List[MayDifferential]:
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"ledger 파일을 찾을 수 없습니다: {path}")
    with open(path, "r", encoding="utf-8") as f:
        data = yaml.safe_load(f) or {}
    return load_may_ledger(data, max_page)


def _multiplicity(exps: GenMonomial, atom: GenMonomial) -> int:
    q = None
    for a, s in zip(exps, atom):
        if s:
            k = a // s
            q = k if q is None else min(q, k)
    return q or 0


@dataclass
class MayPage:
    """
    E_r 페이지

    positions: (m, stem, f) → PagePosition (덮개 = 그 위치의 E₂ 기저)
    """
    r: int
    e2: MayE2
    positions: Dict[PosKey, PagePosition]
    applied: List[str] = field(default_factory=list)

    def summands(self, m: int, stem: int, f: int):
        pos = self.positions.get((m, stem, f))
        return pos.subquotient().summands if pos is not None else []

    def _label(self, pos: PosKey, vector: int, weight: int) -> Optional[str]:
        if not vector or vector & (vector - 1):
            return None
        exps, w = self.e2.covers[pos][vector.bit_length() - 1]
        name = gen_monomial_name(exps)
        k = w - weight
        if k == 0:
            return name
        return f"tau {name}" if k == 1 else f"tau^{k} {name}"

    def representative(self, pos: PosKey, index: int) -> MayPoly:
        """성분 index 의 DGA 대표 cocycle"""
        x = self.summands(*pos)[index]
        out = MayPoly()
        cover = self.e2.covers[pos]
        for b, (exps, w) in enumerate(cover):
            if x.vector >> b & 1:
                tau = w - x.weight
                out = out + MayPoly(tuple(sorted((mono, tau) for mono in self.e2.representative(exps))))
        return out

    def chart(self, kind: Optional[str] = None) -> Chart:
        """(stem, f) 별 성분, Chart 의 s 는 f"""
        e2 = self.e2
        summands: List[ExtSummand] = []
        counters: Dict[Tuple[int, int], int] = {}
        for pos in sorted(self.positions, key=lambda p: (p[1], p[2], p[0])):
            m, stem, f = pos
            if stem > e2.max_stem or f > e2.max_f:
                continue
            for x in self.summands(*pos):
                i = counters.get((f, stem), 0)
                counters[(f, stem)] = i + 1
                summands.append(ExtSummand(f, stem, x.weight, x.order, self._label(pos, x.vector, x.weight), i))
        return Chart(
            mode=e2.mode,
            kind=kind or f"may-e{self.r}",
            max_s=e2.max_f,
            max_stem=e2.max_stem,
            summands=summands,
            provenance=[f"may:stem<={e2.max_stem},f<={e2.max_f},m<={e2.max_m}"] + list(self.applied),
        )


def e2_page(max_stem: int, max_m: Optional[int] = None, max_f: Optional[int] = None,
            motivic: bool = True, workers: int = 1) -> MayPage:
    """
    May E₂ 페이지

    max_f 미지정 시 max_m (f ≤ m), max_m 미지정 시 required_max_m.
    """
    if max_f is None:
        if max_m is None:
            raise ValueError("max_m 또는 max_f 중 하나는 필요합니다")
        max_f = max_m
    e2 = MayE2(max_stem, max_f, max_m, motivic=motivic, workers=workers)
    positions = {pos: PagePosition.initial([w for _, w in cover]) for pos, cover in e2.covers.items()}
    return MayPage(2, e2, positions)


def _page_image(e2: MayE2, exps: GenMonomial, atoms: Sequence[MayDifferential]) -> int:
    out = 0
    for atom in atoms:
        q = _multiplicity(exps, atom.source)
        if q % 2 == 0:
            continue
        quotient = tuple(a - s for a, s in zip(exps, atom.source))
        for _, value in atom.value:
            _, bits = e2.position_vector(_exps_add(value, quotient))
            out ^= bits
    return out


def apply_may_ledger(page: MayPage, ledger: Sequence[MayDifferential]) -> MayPage:
    """
    d_r 적용 후 다음 짝수 페이지 (홀수 페이지의 미분은 0)

    원천 단항식 S 의 값을 단항식 N 에 확장할 때 q = min ⌊a_g / s_g⌋ 가
    홀수이면 d(S)·N/S 가 기여한다 (S 가 생성원 하나면 Leibniz 규칙과 같다).

    Raises:
        LedgerError: 값이 현재 페이지의 cycle 이 아닐 때
        TruncationError: 상이 절단 범위 밖일 때
    """
    r = page.r
    atoms = [a for a in ledger if a.page == r]
    e2 = page.e2
    outgoing: Dict[PosKey, Outgoing] = {}
    if atoms:
        for pos, state in page.positions.items():
            m, stem, f = pos
            if f > e2.max_f or stem == 0:
                continue
            cover = e2.covers[pos]
            images = [_page_image(e2, exps, atoms) for exps, _ in cover]
            if not any(images):
                continue
            cycle_images = []
            for v, w in state.cycles:
                img = 0
                b = 0
                while v:
                    if v & 1:
                        img ^= images[b]
                    v >>= 1
                    b += 1
                cycle_images.append((img, w))
            outgoing[pos] = Outgoing((m - r + 1, stem - 1, f + 1), cycle_images)
    try:
        positions = turn_positions(page.positions, outgoing)
        for state in positions.values():
            state.subquotient()
    except IntegrityError as e:
        raise LedgerError(f"May E_{r} 페이지 계산 실패: {e}") from e
    logger.info(f"May E_{r} → E_{r + 2}: d{r} 원자 {len(atoms)}개, 원천 위치 {len(outgoing)}개")
    return MayPage(r + 2, e2, positions, page.applied + [f"may-ledger:d{r}x{len(atoms)}"])


def run_may_pages(page: MayPage, ledger: Sequence[MayDifferential], until: int) -> MayPage:
    while page.r < until:
        page = apply_may_ledger(page, ledger)
    return page


def e4_chart(max_stem: int, ledger: Sequence[MayDifferential], max_f: Optional[int] = None,
             motivic: bool = True, workers: int = 1) -> Chart:
    """d₂ ledger 만 적용한 E₄ (= E₃)"""
    max_f = max_f if max_f is not None else default_max_f(max_stem)
    page = e2_page(max_stem, max_f=max_f, max_m=required_max_m(max_stem, max_f), motivic=motivic, workers=workers)
    return run_may_pages(page, ledger, 4).chart()


def may_einf_chart(max_stem: int, ledger: Sequence[MayDifferential], max_f: Optional[int] = None,
                   motivic: bool = True, workers: int = 1, last_page: int = 8) -> Chart:
    """d₂, d₄, …, d_{last_page} 적용 후 E∞ 차트"""
    max_f = max_f if max_f is not None else default_max_f(max_stem)
    page = e2_page(max_stem, max_f=max_f, max_m=required_max_m(max_stem, max_f), motivic=motivic, workers=workers)
    return run_may_pages(page, ledger, last_page + 2).chart(kind="may-einf")


def default_max_f(max_stem: int) -> int:
    return max_stem // 2 + 4


def check_d_squared(max_stem: int, max_f: int) -> List[str]:
    """범위 안 모든 단항식의 d∘d = 0, weight 동차성 검사 (실패 목록)"""
    failures = []
    max_m = required_max_m(max_stem, max_f)
    gens = dga_generators(max_stem, max_m)
    degrees = [h_degree(i, j) for i, j in gens]
    for exps in _enumerate([(d.m, d.s, d.f) for d in degrees], max_stem, max_m, max_f):
        mono = tuple((g, e) for g, e in zip(gens, exps) if e)
        src = monomial_degree(mono)
        dd = set()
        for term in _d_monomial(mono):
            t = monomial_degree(term)
            if (t.m, t.s, t.f, t.w) != (src.m, src.s - 1, src.f + 1, src.w):
                failures.append(f"d({mono}) 항 {term} 차수 {t}")
            dd ^= set(_d_monomial(term))
        if dd:
            failures.append(f"d∘d({mono}) ≠ 0")
    return failures


__all__ = [
    "MayGen", "MayPoly", "MayE2", "MayPage", "MayDifferential", "MAY_GENERATORS", "MAY_RELATIONS",
    "dga_differential", "e2_page", "apply_may_ledger", "run_may_pages", "e4_chart", "may_einf_chart",
    "load_may_ledger", "load_may_ledger_file", "check_d_squared", "required_max_m", "default_max_f",
    "gen_monomial_degree", "gen_monomial_name", "parse_gen_monomial", "h_degree",
]
