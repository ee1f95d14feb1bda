"""
최소 자유 분해(minimal free resolution) 모듈
- M₂ 의 A-가군 최소 자유 분해를 (s, t) 셀 단위로 확장
- F_s^t 의 M₂-기저: (생성원, Milnor 원소 R) 쌍, A-weight = w_g + weight(R)
- 행렬에는 A-weight 의 부호를 뒤집어 넣어 "τ 가 weight 를 낮추는" 관례에 맞춤
- 단계 s 안에서 D_{s−1}^t 의 열 축약은 t 별로 병렬, 생성원 추가는 순차
"""
import logging
import threading
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from .batch_processor import BatchProcessor
from .errors import IntegrityError, InsufficientFrontierError
from .grading import TauCoeff, Tau
from .milnor import MilnorElt, enumerate_basis, milnor_degree, milnor_weight, product_terms
from .tau_linalg import ColumnReducer, MonomialMatrix

logger = logging.getLogger(__name__)

# 미분 항: (F_{s−1} 생성원 번호, R), τ 지수는 weight 로 결정
DiffTerm = Tuple[int, MilnorElt]


@dataclass(frozen=True)
class ResGenerator:
    """F_s 의 생성원"""
    s: int
    t: int
    w: int
    id: int
    index: int

    @property
    def stem(self) -> int:
        return self.t - self.s


@dataclass
class Cells:
    """F_s^t 의 M₂-기저"""
    cells: List[Tuple[int, MilnorElt]]
    index: Dict[Tuple[int, MilnorElt], int]
    weights: List[int]

    @property
    def matrix_weights(self) -> List[int]:
        return [-w for w in self.weights]


class Resolution:
    """
    M₂ 의 최소 자유 분해

    generators[s]: F_s 생성원 목록 (t, weight, id 순)
    differentials[s][k]: generators[s][k] 의 미분
    frontier[s]: 단계 s 가 완료된 최대 t
    """

    def __init__(self, motivic: bool = True):
        self.motivic = motivic
        self.generators: List[List[ResGenerator]] = [[ResGenerator(0, 0, 0, 0, 0)]]
        self.differentials: List[List[Tuple[DiffTerm, ...]]] = [[()]]
        self.frontier: Dict[int, int] = {0: 0}
        self._cells: Dict[Tuple[int, int], Cells] = {}
        self._reducers: Dict[Tuple[int, int], ColumnReducer] = {}
        self._image_columns: Dict[Tuple[int, int], List[Tuple[int, int]]] = {}
        self._lock = threading.Lock()

    @property
    def mode(self) -> str:
        return "motivic" if self.motivic else "classical"

    @property
    def max_s(self) -> int:
        return max((s for s, t in self.frontier.items() if t >= 0), default=0)

    def weight_of(self, R: MilnorElt) -> int:
        return milnor_weight(R) if self.motivic else 0

    def certified(self, s: int, t: int) -> bool:
        return self.frontier.get(s, -1) >= t

    def require(self, s: int, t: int) -> None:
        if not self.certified(s, t):
            raise InsufficientFrontierError(
                f"분해가 (s={s}, t={t}) 까지 계산되지 않았습니다 (frontier {self.frontier.get(s, -1)})"
            )

    def generators_at(self, s: int, t: int) -> List[ResGenerator]:
        if s >= len(self.generators):
            return []
        return [g for g in self.generators[s] if g.t == t]

    def differential(self, g: ResGenerator) -> Dict[Tuple[ResGenerator, MilnorElt], TauCoeff]:
        """d(g) = Σ τ^k P^R g'"""
        result = {}
        for k, R in self.differentials[g.s][g.index]:
            target = self.generators[g.s - 1][k]
            result[(target, R)] = Tau(g.w - target.w - self.weight_of(R))
        return result

    def cells(self, s: int, t: int) -> Cells:
        """F_s^t 기저 (생성원 순서 × Milnor 기저 순서)"""
        key = (s, t)
        cached = self._cells.get(key)
        if cached is not None:
            return cached
        cells: List[Tuple[int, MilnorElt]] = []
        weights: List[int] = []
        for g in (self.generators[s] if s < len(self.generators) else []):
            if g.t > t:
                continue
            for R in enumerate_basis(t - g.t):
                cells.append((g.index, R))
                weights.append(g.w + self.weight_of(R))
        built = Cells(cells, {c: i for i, c in enumerate(cells)}, weights)
        if self.certified(s, t):
            with self._lock:
                self._cells[key] = built
        return built

    def act(self, R: MilnorElt, s: int, t: int, vector: int) -> int:
        """P^R · (F_s^t 벡터) → F_s^{t+|R|} 벡터"""
        if not vector:
            return 0
        source = self.cells(s, t)
        target = self.cells(s, t + milnor_degree(R))
        out = 0
        v = vector
        while v:
            low = v & -v
            g, S = source.cells[low.bit_length() - 1]
            for T, _ in product_terms(R, S):
                out ^= 1 << target.index[(g, T)]
            v ^= low
        return out

    def differential_vector(self, s: int, k: int, R: MilnorElt = ()) -> int:
        """P^R · d(generators[s][k]) 를 F_{s−1} 의 기저 벡터로"""
        g = self.generators[s][k]
        t = g.t + milnor_degree(R)
        target = self.cells(s - 1, t)
        out = 0
        for gk, S in self.differentials[s][k]:
            for T, _ in product_terms(R, S):
                out ^= 1 << target.index[(gk, T)]
        return out

    def differential_matrix(self, s: int, t: int) -> MonomialMatrix:
        """D_s^t : F_s^t → F_{s−1}^t"""
        self.require(s, t)
        source = self.cells(s, t)
        target = self.cells(s - 1, t)
        columns = [self.differential_vector(s, gk, R) for gk, R in source.cells]
        return MonomialMatrix.from_support(target.matrix_weights, source.matrix_weights, columns)

    def reducer(self, s: int, t: int) -> ColumnReducer:
        """D_s^t 의 열 축약기 (캐시)"""
        key = (s, t)
        cached = self._reducers.get(key)
        if cached is not None:
            return cached
        built = ColumnReducer(self.differential_matrix(s, t))
        with self._lock:
            self._reducers[key] = built
        return built

    def _kernel(self, s: int, t: int) -> Tuple[List[Tuple[int, int]], List[int]]:
        """ker D_s^t 의 (기저 벡터, weight) 와 커널 인덱스"""
        if s == 0:
            if t == 0:
                return [], []
            cells = self.cells(0, t)
            mw = cells.matrix_weights
            return [(1 << i, mw[i]) for i in range(len(cells.cells))], list(range(len(cells.cells)))
        red = self.reducer(s, t)
        return red.kernel_vectors, red.kernel_indices

    def _adjoin(self, s: int, t: int, kernel_vectors: List[Tuple[int, int]], kernel_indices: List[int]) -> int:
        """(s, t) 셀에 새 생성원 추가, 추가 개수 반환"""
        if s >= len(self.generators):
            self.generators.append([])
            self.differentials.append([])
        cell_weights = self.cells(s - 1, t).matrix_weights
        kset = set(kernel_indices)

        # 기존 생성원 상(image)의 단위 부분을 weight 별로 소거
        echelon: Dict[int, Dict[int, int]] = {}
        for k, g in enumerate(self.generators[s]):
            if g.t >= t:
                continue
            for R in enumerate_basis(t - g.t):
                v = self.differential_vector(s, k, R)
                if not v:
                    continue
                W = -(g.w + self.weight_of(R))
                unit = 0
                x = v
                while x:
                    low = x & -x
                    b = low.bit_length() - 1
                    if b in kset and cell_weights[b] == W:
                        unit |= low
                    x ^= low
                rows = echelon.setdefault(W, {})
                while unit:
                    lead = (unit & -unit).bit_length() - 1
                    if lead not in rows:
                        rows[lead] = unit
                        break
                    unit ^= rows[lead]

        leading = set()
        for rows in echelon.values():
            leading.update(rows)

        fresh = [(kb, vec) for kb, (vec, _) in zip(kernel_indices, kernel_vectors) if kb not in leading]
        fresh.sort(key=lambda item: (-cell_weights[item[0]], item[0]))

        cells = self.cells(s - 1, t).cells
        for kb, vec in fresh:
            w = -cell_weights[kb]
            ordinal = sum(1 for g in self.generators[s] if g.t == t and g.w == w)
            terms = []
            x = vec
            while x:
                low = x & -x
                terms.append(cells[low.bit_length() - 1])
                x ^= low
            gen = ResGenerator(s, t, w, ordinal, len(self.generators[s]))
            self.generators[s].append(gen)
            self.differentials[s].append(tuple(terms))
        return len(fresh)

    def extend(self, max_s: int, max_t: int, workers: int = 1,
               on_cell: Optional[Callable[["Resolution", int, int], None]] = None) -> "Resolution":
        return extend_resolution(self, max_s, max_t, workers=workers, on_cell=on_cell)

    def check_frontier(self) -> None:
        """단계 s 의 frontier 가 단계 s−1 을 넘지 않는지 확인"""
        for s in sorted(self.frontier):
            if s == 0:
                continue
            prev = self.frontier.get(s - 1, -1)
            if self.frontier[s] > prev:
                raise IntegrityError(
                    f"frontier 역전: 단계 {s} 는 t={self.frontier[s]}, 단계 {s - 1} 은 t={prev}"
                )


def extend_resolution(res: Resolution, max_s: int, max_t: int, workers: int = 1,
                      on_cell: Optional[Callable[[Resolution, int, int], None]] = None) -> Resolution:
    """
    단계 s = 1..max_s, 차수 t = 0..max_t 까지 분해 확장

    Args:
        res: 기존 분해 (더 작은 frontier 까지 유효)
        max_s, max_t: 목표 frontier
        workers: t 별 커널 계산 병렬도 (결과는 worker 수와 무관)
        on_cell: 셀 (s, t) 완료마다 호출 (체크포인트 저장 등)
    """
    res.check_frontier()
    res.frontier[0] = max(res.frontier.get(0, 0), max_t)
    pool = BatchProcessor(max_workers=workers, label="kernel")

    for s in range(1, max_s + 1):
        start = res.frontier.get(s, -1) + 1
        if start > max_t:
            continue
        if res.frontier.get(s - 1, -1) < max_t:
            raise IntegrityError(f"단계 {s - 1} 이 t={max_t} 까지 완료되지 않았습니다")

        degrees = list(range(start, max_t + 1))
        kernels = pool.map_ordered(lambda t: res._kernel(s - 1, t), degrees)
        added = 0
        for t, (vectors, indices) in zip(degrees, kernels):
            added += res._adjoin(s, t, vectors, indices)
            res.frontier[s] = t
            if on_cell is not None:
                on_cell(res, s, t)
        logger.info(f"단계 s={s}: t ≤ {max_t}, 새 생성원 {added}개 (누적 {len(res.generators[s])}개)")
    return res


def make_resolution(max_s: int, max_t: int, motivic: bool = True, workers: int = 1) -> Resolution:
    return extend_resolution(Resolution(motivic=motivic), max_s, max_t, workers=workers)


@dataclass
class ResolutionReport:
    """분해 검증 결과"""
    checked: int
    failures: List[str]

    @property
    def ok(self) -> bool:
        return not self.failures


def verify_resolution(res: Resolution) -> ResolutionReport:
    """d∘d = 0, 동차성, 최소성(단위 원소 없음) 검사"""
    failures: List[str] = []
    checked = 0
    for s in range(1, len(res.generators)):
        for k, g in enumerate(res.generators[s]):
            if not res.certified(s, g.t):
                continue
            checked += 1
            for gk, R in res.differentials[s][k]:
                if gk >= len(res.generators[s - 1]):
                    failures.append(f"{_name(g)}: 존재하지 않는 대상 생성원 {gk}")
                    continue
                target = res.generators[s - 1][gk]
                if target.t + milnor_degree(R) != g.t:
                    failures.append(f"{_name(g)}: 위상 차수 불일치 ({gk}, {R})")
                    continue
                exponent = g.w - target.w - res.weight_of(R)
                if exponent < 0:
                    failures.append(f"{_name(g)}: 비동차 항 ({gk}, {R}), τ 지수 {exponent}")
                elif exponent == 0 and R == ():
                    failures.append(f"{_name(g)}: 최소성 위반 - 단위 원소 항 ({gk}, P())")
            if any(f.startswith(_name(g)) for f in failures):
                continue
            if s == 1:
                if any(R == () for _, R in res.differentials[s][k]):
                    failures.append(f"{_name(g)}: 증강(augmentation) 후 0 이 아님")
                continue
            total = 0
            for gk, R in res.differentials[s][k]:
                total ^= res.differential_vector(s - 1, gk, R)
            if total:
                failures.append(f"{_name(g)}: d∘d ≠ 0")
    return ResolutionReport(checked, failures)


def _name(g: ResGenerator) -> str:
    return f"g[s={g.s},t={g.t},w={g.w},#{g.index}]"
