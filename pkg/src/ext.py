"""
Ext 차트 모듈
- Hom_A(F_s, M₂) 복합체: 생성원의 쌍대 ĝ, 미분 원소는 P() 계수의 τ 거듭제곱
- (s, t) 별 Ext = Z/B 를 직합 성분으로 분해
- h₀, h₁, h₂ 곱: h 의 cocycle 을 연쇄사상 Λ 로 들어올려 계산 (지연 계산 + 캐시)
"""
import logging
import threading
from typing import Dict, Iterable, List, Optional, Tuple

from .chart import MULTIPLIERS, Chart, ClassExpr, ExtSummand, ProductEdge
from .errors import IntegrityError, InsufficientFrontierError
from .milnor import milnor_degree
from .resolution import Resolution
from .tau_linalg import ColumnReducer, MonomialMatrix, Subquotient

logger = logging.getLogger(__name__)

# h_i 의 (t, weight)
HOPF: Dict[str, Tuple[int, int]] = {"h0": (1, 0), "h1": (2, 1), "h2": (4, 2)}


class ChainMap:
    """h 를 들어올린 연쇄사상 Λ_n : F_{n+1} → F_n (t_h, w_h 만큼 낮춤)"""

    def __init__(self, res: Resolution, h: str):
        self.res = res
        self.h = h
        t_h, w_h = HOPF[h]
        self.t_h = t_h
        self.w_h = w_h if res.motivic else 0
        hits = res.generators_at(1, t_h)
        if len(hits) != 1:
            raise InsufficientFrontierError(f"{h} 생성원을 찾을 수 없습니다 (t={t_h})")
        self.h_index = hits[0].index
        self._memo: Dict[Tuple[int, int], int] = {}
        self._lock = threading.Lock()

    def image(self, n: int, k: int) -> int:
        """Λ_n(generators[n+1][k]) 를 F_n^{t_g − t_h} 벡터로"""
        key = (n, k)
        cached = self._memo.get(key)
        if cached is not None:
            return cached
        res = self.res
        g = res.generators[n + 1][k]
        degree = g.t - self.t_h
        if degree < 0:
            value = 0
        elif n == 0:
            value = 1 << res.cells(0, 0).index[(0, ())] if k == self.h_index else 0
        else:
            res.require(n, degree)
            y = 0
            for gk, S in res.differentials[n + 1][k]:
                inner = self.image(n - 1, gk)
                if inner:
                    source_t = res.generators[n][gk].t - self.t_h
                    y ^= res.act(S, n - 1, source_t, inner)
            if not y:
                value = 0
            else:
                weight = -(g.w - self.w_h)
                z = res.reducer(n, degree).solve(y, weight)
                if z is None:
                    raise IntegrityError(f"연쇄사상 들어올림 실패: {self.h}, n={n}, g={g}")
                value = z
        with self._lock:
            self._memo[key] = value
        return value


class ExtComputer:
    """
    분해로부터 Ext 군, 대표 cocycle, h 곱 계산

    Args:
        res: 계산된 분해 (s ≤ max_s + 1)
        max_s, max_stem: 차트 범위
    """

    def __init__(self, res: Resolution, max_s: int, max_stem: int):
        self.res = res
        self.max_s = max_s
        self.max_stem = max_stem
        self._groups: Dict[Tuple[int, int], Subquotient] = {}
        self._chain_maps: Dict[str, ChainMap] = {}

    def _cochain_weights(self, s: int, t: int) -> List[int]:
        return [g.w for g in self.res.generators_at(s, t)]

    def coboundary(self, s: int, t: int) -> MonomialMatrix:
        """δ : Hom(F_s, M₂)_t → Hom(F_{s+1}, M₂)_t"""
        res = self.res
        res.require(s + 1, t)
        cols_gens = res.generators_at(s, t)
        rows_gens = res.generators_at(s + 1, t)
        col_pos = {g.index: j for j, g in enumerate(cols_gens)}
        columns = [0] * len(cols_gens)
        for i, g in enumerate(rows_gens):
            for gk, R in res.differentials[s + 1][g.index]:
                if R == () and gk in col_pos:
                    columns[col_pos[gk]] ^= 1 << i
        return MonomialMatrix.from_support([g.w for g in rows_gens], [g.w for g in cols_gens], columns)

    def group(self, s: int, t: int) -> Subquotient:
        """Ext^{s,t} = ker δ_s / im δ_{s−1}"""
        key = (s, t)
        cached = self._groups.get(key)
        if cached is not None:
            return cached
        weights = self._cochain_weights(s, t)
        cycles = ColumnReducer(self.coboundary(s, t)).kernel_vectors
        boundaries: List[Tuple[int, int]] = []
        if s > 0:
            incoming = self.coboundary(s - 1, t)
            boundaries = [(col, w) for col, w in zip(incoming.columns, incoming.col_weights) if col]
        group = Subquotient(weights, cycles, boundaries)
        self._groups[key] = group
        return group

    def summands(self, s: int, stem: int) -> List[ExtSummand]:
        group = self.group(s, stem + s)
        return [
            ExtSummand(s, stem, x.weight, x.order, None, i)
            for i, x in enumerate(group.summands)
        ]

    def chain_map(self, h: str) -> ChainMap:
        if h not in self._chain_maps:
            self._chain_maps[h] = ChainMap(self.res, h)
        return self._chain_maps[h]

    def representative(self, cls: ClassExpr) -> int:
        return self.group(cls.s, cls.stem + cls.s).lift(cls.as_dict())

    def multiply_cochain(self, h: str, s: int, t: int, cochain: int) -> int:
        """(h·x)(g') = x(Λ_s(g')) 를 F_{s+1} 생성원 비트셋으로"""
        res = self.res
        lam = self.chain_map(h)
        target_t = t + lam.t_h
        res.require(s + 1, target_t)
        source_gens = res.generators_at(s, t)
        cells = res.cells(s, t)
        unit_cells = [cells.index[(g.index, ())] for g in source_gens]
        out = 0
        for i, g in enumerate(res.generators_at(s + 1, target_t)):
            image = lam.image(s, g.index)
            bit = 0
            for j, c in enumerate(unit_cells):
                if cochain >> j & 1 and image >> c & 1:
                    bit ^= 1
            if bit:
                out |= 1 << i
        return out

    def multiply_by(self, cls: ClassExpr, h: str) -> ClassExpr:
        """
        h·x 를 차트 기저로 표현

        Raises:
            InsufficientFrontierError: 결과 위치가 계산 범위 밖일 때
        """
        ds, dstem, dw = MULTIPLIERS[h]
        if not self.res.motivic:
            dw = 0
        s2, stem2 = cls.s + ds, cls.stem + dstem
        if s2 > self.max_s or stem2 > self.max_stem:
            raise InsufficientFrontierError(f"{h}·x 위치 (s={s2}, stem={stem2}) 가 차트 범위 밖입니다")
        weight2 = cls.weight + dw
        if cls.is_zero:
            return ClassExpr(s2, stem2, weight2)
        t = cls.stem + cls.s
        product = self.multiply_cochain(h, cls.s, t, self.representative(cls))
        coords = self.group(s2, stem2 + s2).project(product, weight2)
        return ClassExpr.of(s2, stem2, weight2, coords)

    def basis_class(self, s: int, stem: int, index: int) -> ClassExpr:
        x = self.group(s, stem + s).summands[index]
        return ClassExpr.of(s, stem, x.weight, {index: 0})

    def chart(self, labels: Optional[Iterable[Tuple[int, int, int, str]]] = None,
              multipliers: Iterable[str] = ("h0", "h1", "h2")) -> Chart:
        """범위 전체의 차트 (성분 + 곱 간선)"""
        summands: List[ExtSummand] = []
        for stem in range(self.max_stem + 1):
            for s in range(self.max_s + 1):
                summands.extend(self.summands(s, stem))
        edges: List[ProductEdge] = []
        for x in summands:
            for h in multipliers:
                ds, dstem, _ = MULTIPLIERS[h]
                if x.s + ds > self.max_s or x.stem + dstem > self.max_stem:
                    continue
                result = self.multiply_by(self.basis_class(x.s, x.stem, x.index), h)
                for index, shift in result.terms:
                    edges.append(ProductEdge(x.ref, h, (result.s, result.stem, index), shift))
        chart = Chart(
            mode=self.res.mode,
            kind="ext",
            max_s=self.max_s,
            max_stem=self.max_stem,
            summands=summands,
            edges=edges,
            provenance=[f"resolution:{self.res.mode}:s<={self.max_s + 1},t<={self.max_stem + self.max_s}"],
        )
        if labels:
            chart = chart.with_labels(labels)
        return chart


def required_frontier(max_s: int, max_stem: int) -> Tuple[int, int]:
    """차트 (max_s, max_stem) 에 필요한 분해 frontier (s, t)"""
    return max_s + 1, max_stem + max_s


def ext_chart(res: Resolution, max_s: Optional[int] = None, max_stem: Optional[int] = None,
              labels: Optional[Iterable[Tuple[int, int, int, str]]] = None) -> Chart:
    """분해에서 Ext 차트 추출 (범위 미지정 시 분해가 허용하는 최대)"""
    if max_s is None:
        max_s = res.max_s - 1
    if max_stem is None:
        max_stem = min(res.frontier.values()) - max_s
    return ExtComputer(res, max_s, max_stem).chart(labels=labels)


def classical_mode_chart(max_s: int, max_stem: int, workers: int = 1) -> Chart:
    """τ = 1 (모든 weight 0) 로 같은 파이프라인 실행"""
    from .resolution import make_resolution

    s_top, t_top = required_frontier(max_s, max_stem)
    res = make_resolution(s_top, t_top, motivic=False, workers=workers)
    return ExtComputer(res, max_s, max_stem).chart()
