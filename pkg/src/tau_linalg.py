"""
F₂[τ] 선형대수 모듈
- 모든 행렬 원소는 0 또는 τ 단항식, 지수는 (행 weight − 열 weight) 로 결정
- 열은 행 인덱스 비트셋(int)으로 저장
- ColumnReducer: weight 내림차순 열 소거 (커널 기저, 상(image) 풀이)
- reduce: 최소 지수 피벗 우선의 graded Smith 축약
- cokernel_min_gens: 여핵의 최소 생성원과 τ-torsion 차수
- Subquotient: Z/B 부분몫과 좌표 사영
"""
import logging
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .errors import HomogeneityError, IntegrityError
from .grading import TauCoeff, Tau, ZERO

logger = logging.getLogger(__name__)


def _bits(value: int) -> Iterable[int]:
    """설정된 비트 인덱스 (오름차순)"""
    while value:
        low = value & -value
        yield low.bit_length() - 1
        value ^= low


def _parity(value: int) -> int:
    return bin(value).count("1") & 1


@dataclass(frozen=True)
class WeightedBasis:
    """자유 F₂[τ]-가군의 기저 weight 목록"""
    weights: Tuple[int, ...] = ()

    def __len__(self) -> int:
        return len(self.weights)

    def __getitem__(self, i: int) -> int:
        return self.weights[i]


@dataclass(frozen=True)
class MonomialMatrix:
    """
    weight 가 붙은 자유가군 사이의 행렬

    columns[j] 의 비트 i 가 켜져 있으면 (i, j) 원소는 τ^(row_weights[i] − col_weights[j]).
    """
    row_weights: Tuple[int, ...]
    col_weights: Tuple[int, ...]
    columns: Tuple[int, ...]

    @classmethod
    def from_support(cls, row_weights: Sequence[int], col_weights: Sequence[int], columns: Sequence[int]) -> "MonomialMatrix":
        """비트셋 열로 생성 (동차성 검사)"""
        rw = tuple(row_weights)
        cw = tuple(col_weights)
        cols = tuple(columns)
        if len(cols) != len(cw):
            raise ValueError(f"열 개수 불일치: {len(cols)} != {len(cw)}")
        for j, col in enumerate(cols):
            if col >> len(rw):
                raise ValueError(f"열 {j} 가 행 범위를 벗어났습니다")
            for i in _bits(col):
                if rw[i] < cw[j]:
                    raise HomogeneityError(f"음의 τ 지수: ({i},{j}) 행 weight {rw[i]} < 열 weight {cw[j]}")
        return cls(rw, cw, cols)

    @classmethod
    def from_entries(cls, row_weights: Sequence[int], col_weights: Sequence[int],
                     entries: Dict[Tuple[int, int], TauCoeff]) -> "MonomialMatrix":
        """(i, j) → TauCoeff 사전으로 생성"""
        columns = [0] * len(col_weights)
        for (i, j), c in entries.items():
            if c.is_zero:
                continue
            expected = row_weights[i] - col_weights[j]
            if c.exponent != expected:
                raise HomogeneityError(f"비동차 원소 ({i},{j}): {c}, 기대 지수 {expected}")
            columns[j] |= 1 << i
        return cls.from_support(row_weights, col_weights, columns)

    @classmethod
    def zero(cls, row_weights: Sequence[int], col_weights: Sequence[int]) -> "MonomialMatrix":
        return cls(tuple(row_weights), tuple(col_weights), (0,) * len(col_weights))

    @property
    def n_rows(self) -> int:
        return len(self.row_weights)

    @property
    def n_cols(self) -> int:
        return len(self.col_weights)

    def entry(self, i: int, j: int) -> TauCoeff:
        if self.columns[j] >> i & 1:
            return Tau(self.row_weights[i] - self.col_weights[j])
        return ZERO

    def entries(self) -> Dict[Tuple[int, int], TauCoeff]:
        return {(i, j): self.entry(i, j) for j, col in enumerate(self.columns) for i in _bits(col)}

    def __str__(self) -> str:
        lines = []
        for i in range(self.n_rows):
            lines.append("[" + ", ".join(str(self.entry(i, j)) for j in range(self.n_cols)) + "]")
        return "\n".join(lines)


class ColumnReducer:
    """
    열 축약기

    열을 (−weight, index) 순서로 처리하므로 먼저 처리된 피벗 열의 weight 는
    항상 현재 열 이상이고, 피벗 열의 τ 배수를 더하는 연산이 동차가 된다.
    """

    def __init__(self, matrix: MonomialMatrix):
        self.matrix = matrix
        cw = matrix.col_weights
        self.pivots: Dict[int, Tuple[int, int, int]] = {}
        self.kernel_vectors: List[Tuple[int, int]] = []
        self.kernel_indices: List[int] = []

        for j in sorted(range(matrix.n_cols), key=lambda k: (-cw[k], k)):
            v = matrix.columns[j]
            combo = 1 << j
            while v:
                low = (v & -v).bit_length() - 1
                hit = self.pivots.get(low)
                if hit is None:
                    break
                v ^= hit[0]
                combo ^= hit[1]
            if v:
                self.pivots[(v & -v).bit_length() - 1] = (v, combo, j)
            else:
                self.kernel_vectors.append((combo, cw[j]))
                self.kernel_indices.append(j)

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def image_basis(self) -> List[Tuple[int, int]]:
        """(축약된 열, weight) 목록"""
        cw = self.matrix.col_weights
        return [(v, cw[j]) for _, (v, _, j) in sorted(self.pivots.items())]

    def solve(self, target: int, weight: int) -> Optional[int]:
        """
        matrix · x = target (weight 고정) 의 해 x (열 비트셋), 상에 없으면 None

        해의 비트 k 가 나타내는 계수는 τ^(col_weights[k] − weight).
        """
        cw = self.matrix.col_weights
        v = target
        combo = 0
        while v:
            low = (v & -v).bit_length() - 1
            hit = self.pivots.get(low)
            if hit is None or cw[hit[2]] < weight:
                return None
            v ^= hit[0]
            combo ^= hit[1]
        return combo


def kernel(m: MonomialMatrix) -> Tuple[WeightedBasis, MonomialMatrix]:
    """
    커널의 자유 기저와 포함 사상

    Returns:
        (커널 기저 weight, 열=커널 벡터인 포함 행렬)
    """
    reducer = ColumnReducer(m)
    weights = tuple(w for _, w in reducer.kernel_vectors)
    inclusion = MonomialMatrix.from_support(m.col_weights, weights, [v for v, _ in reducer.kernel_vectors])
    return WeightedBasis(weights), inclusion


@dataclass
class Reduction:
    """graded Smith 축약 결과 및 변환 기록"""
    matrix: MonomialMatrix
    pivots: List[Tuple[int, int, int]]
    row_transform: List[int]
    row_inverse_columns: List[int]
    col_transform: List[int]

    @property
    def pivot_exponents(self) -> List[int]:
        return [e for _, _, e in self.pivots]


def reduce(m: MonomialMatrix) -> Reduction:
    """
    최소 τ 지수 피벗 우선 축약 (동점은 최저 (행, 열))

    row_transform[i]: P 의 i 번째 행 (원래 행 인덱스 비트셋)
    row_inverse_columns[k]: P⁻¹ 의 k 번째 열
    col_transform[j]: Q 의 j 번째 열 (원래 열 인덱스 비트셋)
    """
    rw = m.row_weights
    cw = m.col_weights
    cols = list(m.columns)
    p_rows = [1 << i for i in range(m.n_rows)]
    pinv_cols = [1 << i for i in range(m.n_rows)]
    q_cols = [1 << j for j in range(m.n_cols)]
    active_rows = (1 << m.n_rows) - 1
    active_cols = set(range(m.n_cols))
    pivots: List[Tuple[int, int, int]] = []

    while True:
        best = None
        for j in active_cols:
            col = cols[j] & active_rows
            for i in _bits(col):
                key = (rw[i] - cw[j], i, j)
                if best is None or key < best:
                    best = key
        if best is None:
            break
        e, r, c = best

        # 열 c 의 다른 행 소거: row_i += τ^(rw[i]−rw[r]) row_r
        others = cols[c] & ~(1 << r)
        if others:
            for j in range(m.n_cols):
                if cols[j] >> r & 1:
                    cols[j] ^= others
            for i in _bits(others):
                p_rows[i] ^= p_rows[r]
                pinv_cols[r] ^= pinv_cols[i]

        # 행 r 의 다른 열 소거: col_j += τ^(cw[c]−cw[j]) col_c
        for j in range(m.n_cols):
            if j != c and cols[j] >> r & 1:
                cols[j] ^= 1 << r
                q_cols[j] ^= q_cols[c]

        pivots.append((r, c, e))
        active_rows &= ~(1 << r)
        active_cols.discard(c)

    reduced = MonomialMatrix(rw, cw, tuple(cols))
    return Reduction(reduced, pivots, p_rows, pinv_cols, q_cols)


@dataclass
class CokernelGenerator:
    """여핵 생성원: 행 좌표 벡터, weight, torsion 차수 (None 이면 Free)"""
    vector: int
    weight: int
    order: Optional[int]
    row: int

    @property
    def is_free(self) -> bool:
        return self.order is None


@dataclass
class CokernelDescription:
    generators: List[CokernelGenerator]
    row_transform: List[int] = field(default_factory=list)
    row_weights: Tuple[int, ...] = ()

    def coordinates(self, vector: int, weight: int) -> Dict[int, int]:
        """
        행 공간 벡터의 생성원 좌표 {생성원 번호: τ 지수}

        torsion 생성원에서 지수가 차수 이상인 성분은 0 으로 버린다.
        """
        result: Dict[int, int] = {}
        for k, gen in enumerate(self.generators):
            if _parity(self.row_transform[gen.row] & vector):
                exponent = self.row_weights[gen.row] - weight
                if exponent < 0:
                    raise HomogeneityError(f"음의 τ 지수: 생성원 {k}, weight {weight}")
                if gen.order is not None and exponent >= gen.order:
                    continue
                result[k] = exponent
        return result


def cokernel_min_gens(m: MonomialMatrix) -> CokernelDescription:
    """
    여핵의 최소 생성원 (Free 또는 M̃₂/τ^k)

    정렬: weight 오름차순, 같은 weight 안에서 Free 먼저, torsion 차수 내림차순.
    """
    red = reduce(m)
    pivot_exp = {r: e for r, _, e in red.pivots}
    gens = []
    for r in range(m.n_rows):
        e = pivot_exp.get(r)
        if e == 0:
            continue
        gens.append(CokernelGenerator(red.row_inverse_columns[r], m.row_weights[r], e, r))
    gens.sort(key=lambda g: (g.weight, 0 if g.order is None else 1, -(g.order or 0), g.row))
    return CokernelDescription(gens, red.row_transform, m.row_weights)


@dataclass
class SubquotientSummand:
    """Z/B 의 직합 성분"""
    vector: int
    weight: int
    order: Optional[int]


class Subquotient:
    """
    자유가군 안의 부분몫 Z/B

    Args:
        ambient_weights: 주변 자유가군 기저 weight
        cycles: Z 의 자유 기저 [(비트셋, weight)]
        boundaries: B 의 생성원 [(비트셋, weight)], 모두 Z 안에 있어야 함
    """

    def __init__(self, ambient_weights: Sequence[int], cycles: Sequence[Tuple[int, int]],
                 boundaries: Sequence[Tuple[int, int]]):
        self.ambient_weights = tuple(ambient_weights)
        self.cycles = list(cycles)
        cycle_matrix = MonomialMatrix.from_support(
            self.ambient_weights, [w for _, w in self.cycles], [v for v, _ in self.cycles]
        )
        self._cycle_solver = ColumnReducer(cycle_matrix)
        if self._cycle_solver.rank != len(self.cycles):
            raise IntegrityError("Z 기저가 일차독립이 아닙니다")

        columns = []
        weights = []
        for v, w in boundaries:
            zc = self._cycle_solver.solve(v, w)
            if zc is None:
                raise IntegrityError("경계(boundary)가 cycle 이 아닙니다")
            if zc:
                columns.append(zc)
                weights.append(w)
        relation = MonomialMatrix.from_support([w for _, w in self.cycles], weights, columns)
        self.description = cokernel_min_gens(relation)
        self.summands: List[SubquotientSummand] = []
        for gen in self.description.generators:
            vec = 0
            for k in _bits(gen.vector):
                vec ^= self.cycles[k][0]
            self.summands.append(SubquotientSummand(vec, gen.weight, gen.order))

    def cycle_coordinates(self, vector: int, weight: int) -> Optional[int]:
        return self._cycle_solver.solve(vector, weight)

    def is_cycle(self, vector: int, weight: int) -> bool:
        return self.cycle_coordinates(vector, weight) is not None

    def project(self, vector: int, weight: int) -> Dict[int, int]:
        """
        cycle 을 직합 성분 좌표로 {성분 번호: τ 지수}

        Raises:
            IntegrityError: vector 가 Z 에 없을 때
        """
        zc = self.cycle_coordinates(vector, weight)
        if zc is None:
            raise IntegrityError("cycle 이 아닌 벡터를 사영하려 했습니다")
        return self.description.coordinates(zc, weight)

    def lift(self, coords: Dict[int, int]) -> int:
        """성분 좌표의 대표 벡터 (지수는 weight 로 암묵 결정)"""
        vec = 0
        for k in coords:
            vec ^= self.summands[k].vector
        return vec


def column_space_basis(ambient_weights: Sequence[int], vectors: Sequence[Tuple[int, int]]) -> List[Tuple[int, int]]:
    """벡터들이 생성하는 부분가군의 자유 기저"""
    m = MonomialMatrix.from_support(ambient_weights, [w for _, w in vectors], [v for v, _ in vectors])
    return ColumnReducer(m).image_basis()


def kernel_of_vectors(ambient_weights: Sequence[int], vectors: Sequence[Tuple[int, int]]) -> List[Tuple[int, int]]:
    """Σ aᵢ vᵢ = 0 인 계수 벡터들의 자유 기저 [(비트셋, weight)]"""
    m = MonomialMatrix.from_support(ambient_weights, [w for _, w in vectors], [v for v, _ in vectors])
    return ColumnReducer(m).kernel_vectors
