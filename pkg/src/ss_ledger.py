"""
스펙트럴 시퀀스 페이지 계산과 Adams 미분 ledger
- PagePosition: 한 위치의 Z_r (자유 기저) 와 B_r (생성원), 덮개 기저 weight
- turn_positions: d_r 상을 받아 E_{r+1} 로 넘김 (May, Adams 공용)
- load_ledger: YAML 항목 검증 (차수, 이름, 범위), 거부 사유를 모아 LedgerError 로
- PagedChart / turn_page / einf_survivors: Adams E₂ 차트 위에서 ledger 적용
"""
import logging
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Dict, Hashable, List, Optional, Sequence, Tuple

import yaml

from .chart import Chart, ClassExpr, ExtSummand
from .errors import (
    HomogeneityError,
    InsufficientFrontierError,
    IntegrityError,
    LedgerError,
    LedgerRejection,
)
from .fixtures import Label, read_labels
from .names import ClassResolver, NameSyntaxError, parse_expression, substitute_family
from .tau_linalg import ColumnReducer, MonomialMatrix, Subquotient, column_space_basis, kernel_of_vectors

logger = logging.getLogger(__name__)

Vector = Tuple[int, int]

# family 전개 상한 (범위를 벗어나면 그 전에 멈춘다)
MAX_FAMILY_LENGTH = 64


def _combine(vectors: Sequence[Vector], bits: int) -> int:
    out = 0
    k = 0
    while bits:
        if bits & 1:
            out ^= vectors[k][0]
        bits >>= 1
        k += 1
    return out


@dataclass
class PagePosition:
    """
    E_r 의 한 위치

    weights: 덮개(E₂ 기저) weight
    cycles: Z_r 자유 기저 [(비트셋, weight)]
    boundaries: B_r 기저 [(비트셋, weight)]
    """
    weights: Tuple[int, ...]
    cycles: List[Vector]
    boundaries: List[Vector] = field(default_factory=list)
    _sub: Optional[Subquotient] = field(default=None, repr=False, compare=False)

    @classmethod
    def initial(cls, weights: Sequence[int], relations: Sequence[Vector] = ()) -> "PagePosition":
        weights = tuple(weights)
        return cls(weights, [(1 << i, w) for i, w in enumerate(weights)], list(relations))

    def subquotient(self) -> Subquotient:
        if self._sub is None:
            self._sub = Subquotient(self.weights, self.cycles, self.boundaries)
        return self._sub

    def cycle_solver(self) -> ColumnReducer:
        m = MonomialMatrix.from_support(self.weights, [w for _, w in self.cycles], [v for v, _ in self.cycles])
        return ColumnReducer(m)

    def boundary_solver(self) -> ColumnReducer:
        m = MonomialMatrix.from_support(self.weights, [w for _, w in self.boundaries],
                                        [v for v, _ in self.boundaries])
        return ColumnReducer(m)


@dataclass
class Outgoing:
    """한 위치에서 나가는 d_r: 대상 위치와 cycles 순서에 맞춘 상"""
    target: Hashable
    images: List[Vector]
    cycles: Optional[List[Vector]] = None


def turn_positions(positions: Dict[Hashable, PagePosition], outgoing: Dict[Hashable, Outgoing],
                   strict: bool = False) -> Dict[Hashable, PagePosition]:
    """
    E_r → E_{r+1}

    Z_{r+1}(P) = {z ∈ Z_r : d_r z ∈ B_r(P')}, B_{r+1}(P') = B_r(P') + d_r(Z_r(P)).

    Args:
        outgoing: 위치별 d_r (cycles 가 주어지면 그 기저로 Z_r 을 교체)
        strict: B_r(P) 의 상이 B_r(P') 안에 있는지 검사

    Raises:
        LedgerError: 상이 대상 페이지의 cycle 이 아니거나 (strict) d_r 이 잘 정의되지 않을 때
    """
    new: Dict[Hashable, PagePosition] = {}
    extra: Dict[Hashable, List[Vector]] = {}
    for key, pos in positions.items():
        move = outgoing.get(key)
        if move is None or not any(v for v, _ in move.images):
            new[key] = PagePosition(pos.weights, list(pos.cycles), list(pos.boundaries))
            continue
        cycles = move.cycles if move.cycles is not None else pos.cycles
        target = positions.get(move.target)
        if target is None:
            raise LedgerError(f"d_r 대상 위치가 없습니다: {key} → {move.target}")
        target_sub = target.subquotient()
        for (img, w), (_, cw) in zip(move.images, cycles):
            if w != cw:
                raise HomogeneityError(f"상 weight 불일치: {w} ≠ {cw}")
            if img and not target_sub.is_cycle(img, w):
                raise LedgerError(f"{key} 의 d_r 상이 {move.target} 에서 cycle 이 아닙니다")

        if strict and pos.boundaries:
            own = PagePosition(pos.weights, list(cycles))
            solver = own.cycle_solver()
            b_solver = target.boundary_solver()
            for b, w in pos.boundaries:
                zc = solver.solve(b, w)
                if zc is None:
                    raise IntegrityError(f"{key} 의 경계가 Z_r 에 없습니다")
                image = _combine(move.images, zc)
                if image and b_solver.solve(image, w) is None:
                    raise LedgerError(f"{key} 의 관계식이 d_r 과 맞지 않습니다 (τ-선형성 위반)")

        n = len(cycles)
        mask = (1 << n) - 1
        kernel = kernel_of_vectors(target.weights, list(move.images) + list(target.boundaries))
        gens = [(_combine(cycles, combo & mask), w) for combo, w in kernel if combo & mask]
        gens.extend(pos.boundaries)
        new_cycles = column_space_basis(pos.weights, [g for g in gens if g[0]]) if gens else []
        new[key] = PagePosition(pos.weights, new_cycles, list(pos.boundaries))
        extra.setdefault(move.target, []).extend((v, w) for v, w in move.images if v)

    for key, images in extra.items():
        pos = new[key]
        pos.boundaries = column_space_basis(pos.weights, list(pos.boundaries) + images)
    return new


# ---------------------------------------------------------------- Adams ledger


@dataclass(frozen=True)
class DifferentialEntry:
    """YAML 항목 하나 (family 는 전개된 뒤의 항목)"""
    page: int
    source: str
    target: str
    note: str = ""

    def __str__(self) -> str:
        return f"d{self.page}({self.source}) = {self.target}"


@dataclass
class ResolvedEntry:
    entry: DifferentialEntry
    source: ClassExpr
    target: ClassExpr


@dataclass
class Ledger:
    entries: List[ResolvedEntry]
    skipped: List[DifferentialEntry] = field(default_factory=list)

    def for_page(self, r: int) -> List[ResolvedEntry]:
        return [e for e in self.entries if e.entry.page == r]

    @property
    def pages(self) -> List[int]:
        return sorted({e.entry.page for e in self.entries})


def read_ledger_file(path: Path) -> dict:
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"ledger 파일을 찾을 수 없습니다: {path}")
    with open(path, "r", encoding="utf-8") as f:
        data = yaml.safe_load(f) or {}
    if not isinstance(data, dict):
        raise LedgerError(f"ledger 형식 오류: {path}")
    return data


def _expand(raw: dict, resolver: ClassResolver) -> List[DifferentialEntry]:
    page = int(raw["page"])
    target = str(raw.get("target", raw.get("value", "0")))
    source = str(raw["source"])
    note = str(raw.get("note", ""))
    family = raw.get("family")
    if not family:
        return [DifferentialEntry(page, source, target, note)]
    var = str(family.get("var", "k"))
    start = int(family.get("start", 0))
    out = []
    for k in range(start, start + MAX_FAMILY_LENGTH):
        src = substitute_family(source, var, k)
        tgt = substitute_family(target, var, k)
        degree = resolver.degree(parse_expression(src))
        if degree is None or not resolver.in_frontier(degree):
            break
        tdeg = resolver.degree(parse_expression(tgt))
        if tdeg is not None and not resolver.in_frontier(tdeg):
            break
        out.append(DifferentialEntry(page, src, tgt, note))
    return out


def load_ledger(data: dict, chart: Chart, labels: Optional[Sequence[Label]] = None) -> Ledger:
    """
    ledger 검증 및 해석

    - 차수 검사: 대상 = (s + r, stem − 1, w)
    - 차트 범위 밖 항목은 거부하지 않고 skipped 로
    - family 는 범위를 벗어날 때까지 전개
    - labels 미지정 시 기본 라벨 표로 차트 밖 이름의 차수를 얻는다

    Raises:
        LedgerError: 거부된 항목 목록 포함
    """
    classes = {name: tuple(deg) for name, deg in (data.get("classes") or {}).items()}
    if labels is None:
        labels = read_labels()
    resolver = ClassResolver(chart, classes, labels)
    rejections: List[LedgerRejection] = []
    resolved: List[ResolvedEntry] = []
    skipped: List[DifferentialEntry] = []

    for raw in data.get("entries") or []:
        try:
            expanded = _expand(raw, resolver)
        except (KeyError, ValueError, TypeError, NameSyntaxError) as e:
            rejections.append(LedgerRejection(raw, f"항목 해석 실패: {e}"))
            continue
        for entry in expanded:
            try:
                if entry.page < 2:
                    raise ValueError(f"페이지는 2 이상이어야 합니다: {entry.page}")
                sdeg = resolver.degree(parse_expression(entry.source))
                tdeg = resolver.degree(parse_expression(entry.target))
                if sdeg is None:
                    raise ValueError("원천이 0 입니다")
                s, stem, w = sdeg
                expected = (s + entry.page, stem - 1, w)
                if tdeg is not None and tdeg != expected:
                    raise HomogeneityError(f"대상 차수 {tdeg} ≠ 기대 차수 {expected}")
                if not resolver.in_frontier(sdeg) or not resolver.in_frontier(expected):
                    skipped.append(entry)
                    continue
                source = resolver.resolve(entry.source)
                if tdeg is None:
                    target = ClassExpr(*expected)
                else:
                    target = resolver.resolve(entry.target)
                if source.is_zero:
                    raise ValueError("원천이 차트에서 0 입니다")
                resolved.append(ResolvedEntry(entry, source, target))
            except InsufficientFrontierError:
                skipped.append(entry)
            except (KeyError, ValueError, NameSyntaxError) as e:
                rejections.append(LedgerRejection(entry, str(e)))

    if rejections:
        raise LedgerError(f"ledger 항목 {len(rejections)}개 거부", rejections)
    if skipped:
        logger.info(f"차트 범위 밖 ledger 항목 {len(skipped)}개 건너뜀")
    return Ledger(resolved, skipped)


def load_ledger_file(path: Path, chart: Chart, labels: Optional[Sequence[Label]] = None) -> Ledger:
    return load_ledger(read_ledger_file(path), chart, labels)


@dataclass
class PagedChart:
    """
    Adams E_r 페이지

    base: E₂ (= Ext) 차트, positions: (s, stem) → PagePosition
    """
    base: Chart
    page: int
    positions: Dict[Tuple[int, int], PagePosition]

    @classmethod
    def from_chart(cls, chart: Chart) -> "PagedChart":
        positions = {}
        for s, stem in chart.positions():
            summands = chart.at(s, stem)
            weights = [x.weight for x in summands]
            relations = [(1 << i, x.weight - x.order) for i, x in enumerate(summands) if x.order is not None]
            positions[(s, stem)] = PagePosition.initial(weights, relations)
        return cls(chart, 2, positions)

    def vector(self, cls: ClassExpr) -> Vector:
        bits = 0
        for i, _ in cls.terms:
            bits |= 1 << i
        return bits, cls.weight

    def summands(self, s: int, stem: int) -> List[ExtSummand]:
        pos = self.positions.get((s, stem))
        if pos is None:
            return []
        base = self.base.at(s, stem)
        out = []
        for i, x in enumerate(pos.subquotient().summands):
            label = None
            if x.vector and x.vector & (x.vector - 1) == 0:
                b = base[x.vector.bit_length() - 1]
                if b.label:
                    k = b.weight - x.weight
                    label = b.label if k == 0 else (f"tau {b.label}" if k == 1 else f"tau^{k} {b.label}")
            out.append(ExtSummand(s, stem, x.weight, x.order, label, i, exotic=x.order is not None))
        return out


def _adapt_sources(pos: PagePosition, entries: List[ResolvedEntry]) -> Tuple[List[Vector], List[Tuple[int, ResolvedEntry, int]]]:
    """
    원천들이 Z_r 기저 원소가 되도록 기저 교환

    Returns:
        (새 기저, [(교체된 기저 번호, 항목, 대상 비트셋)])

    Raises:
        LedgerError: 원천이 cycle 이 아니거나 원시적(primitive)이 아닐 때
    """
    cycles = list(pos.cycles)
    solver = pos.cycle_solver()
    done: List[Tuple[int, int, int, ResolvedEntry]] = []
    for item in entries:
        w = item.source.weight
        bits = 0
        for i, _ in item.source.terms:
            bits |= 1 << i
        coords = solver.solve(bits, w)
        if coords is None:
            raise LedgerError(f"원천이 E_{item.entry.page} 의 cycle 이 아닙니다: {item.entry}",
                              [LedgerRejection(item.entry, "not a cycle on this page")])
        value = 0
        for i, _ in item.target.terms:
            value |= 1 << i
        for p, c, val, _ in done:
            if coords >> p & 1:
                coords ^= c
                value ^= val
        if not coords:
            if value:
                raise LedgerError(f"일차종속 원천에 서로 다른 값: {item.entry}",
                                  [LedgerRejection(item.entry, "inconsistent with earlier entries")])
            continue
        unit = [k for k in range(len(cycles)) if coords >> k & 1 and cycles[k][1] == w]
        if not unit:
            raise LedgerError(f"원천이 E_{item.entry.page} 기저의 원시 원소가 아닙니다: {item.entry}",
                              [LedgerRejection(item.entry, "source is not primitive")])
        p = unit[-1]
        done.append((p, coords, value, item))
    original = list(cycles)
    picked = []
    for p, coords, value, item in done:
        cycles[p] = (_combine(original, coords), item.source.weight)
        picked.append((p, item, value))
    return cycles, picked


def turn_page(pc: PagedChart, ledger: Ledger) -> PagedChart:
    """
    ledger 의 d_{page} 를 적용해 다음 페이지로

    ledger 에 없는 기저 원소의 d_r 은 0.

    Raises:
        LedgerError
    """
    r = pc.page
    by_source: Dict[Tuple[int, int], List[ResolvedEntry]] = {}
    for item in ledger.for_page(r):
        by_source.setdefault((item.source.s, item.source.stem), []).append(item)

    outgoing: Dict[Hashable, Outgoing] = {}
    for key, items in sorted(by_source.items()):
        pos = pc.positions.get(key)
        if pos is None:
            raise LedgerError(f"빈 위치의 원천: {key}", [LedgerRejection(i.entry, "empty position") for i in items])
        cycles, picked = _adapt_sources(pos, items)
        s, stem = key
        target = (s + r, stem - 1)
        images = [(0, w) for _, w in cycles]
        for p, item, value in picked:
            images[p] = (value, cycles[p][1])
            logger.debug(f"d{r}: {item.entry}")
        outgoing[key] = Outgoing(target, images, cycles)

    try:
        positions = turn_positions(pc.positions, outgoing, strict=True)
        for pos in positions.values():
            pos.subquotient()
    except IntegrityError as e:
        raise LedgerError(f"E_{r + 1} 계산 실패: {e}") from e
    logger.info(f"E_{r} → E_{r + 1}: d{r} {sum(len(v) for v in by_source.values())}개 적용")
    return PagedChart(pc.base, r + 1, positions)


def einf_survivors(pc: PagedChart, ledger: Ledger, last_page: Optional[int] = None) -> Chart:
    """
    ledger 의 모든 페이지를 적용한 E∞ 차트

    τ-torsion 으로 남은 성분은 exotic 표시.
    """
    last = last_page if last_page is not None else max(ledger.pages, default=pc.page)
    while pc.page <= last:
        pc = turn_page(pc, ledger)
    summands: List[ExtSummand] = []
    for s, stem in sorted(pc.positions, key=lambda p: (p[1], p[0])):
        summands.extend(pc.summands(s, stem))
    base = pc.base
    return replace(
        base,
        kind="adams-einf",
        summands=summands,
        edges=[],
        provenance=list(base.provenance) + [f"ledger:pages<={last}"],
    )


__all__ = [
    "PagePosition", "Outgoing", "turn_positions", "DifferentialEntry", "ResolvedEntry", "Ledger",
    "load_ledger", "load_ledger_file", "read_ledger_file", "PagedChart", "turn_page", "einf_survivors",
]
