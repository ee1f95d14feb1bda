"""
회귀 fixture 로딩
- 라벨 표: (s, stem, weight) → 이름
- 차트 fixture: 명시적 성분 + 무한 탑 레코드 (영역 안으로 전개)
"""
import logging
from collections import Counter
from dataclasses import dataclass
from pathlib import Path
from typing import List, Literal, Optional, Tuple

import yaml
from pydantic import BaseModel, Field, ValidationError

from .chart import MULTIPLIERS
from .config import EXT_CHART_FIXTURE, EXT_LABELS_FILE, MAY_E4_FIXTURE
from .errors import ChartFormatError

logger = logging.getLogger(__name__)

Label = Tuple[int, int, int, str]


class LabelRecord(BaseModel):
    name: str
    s: int = Field(ge=0)
    stem: int = Field(ge=0)
    weight: int


class LabelFile(BaseModel):
    labels: List[LabelRecord] = Field(default_factory=list)


class RegionRecord(BaseModel):
    max_stem: int = Field(ge=0)
    max_s: int = Field(ge=0)


class ClassRecord(BaseModel):
    s: int = Field(ge=0)
    stem: int = Field(ge=0)
    weight: int
    kind: Literal["free", "torsion"]


class TowerRecord(ClassRecord):
    step: Literal["h0", "h1", "h2"]


class ChartFixtureFile(BaseModel):
    region: RegionRecord
    classes: List[ClassRecord] = Field(default_factory=list)
    towers: List[TowerRecord] = Field(default_factory=list)


@dataclass
class ChartFixture:
    max_stem: int
    max_s: int
    expected: Counter

    def kinds(self) -> Counter:
        """{(s, stem, kind): 개수} (weight 무시)"""
        out: Counter = Counter()
        for (s, stem, _, kind), n in self.expected.items():
            out[(s, stem, kind)] += n
        return out


def _load_yaml(path: Path):
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"fixture 파일을 찾을 수 없습니다: {path}")
    with open(path, "r", encoding="utf-8") as f:
        return yaml.safe_load(f) or {}


def _validate(model, raw, source: str):
    try:
        return model.model_validate(raw)
    except ValidationError as e:
        first = e.errors()[0]
        where = "".join(f"[{p}]" if isinstance(p, int) else f".{p}" for p in first["loc"])
        raise ChartFormatError(first["msg"], f"{source}:${where}") from e


def read_labels(path: Optional[Path] = None) -> List[Label]:
    """라벨 표 → [(s, stem, weight, 이름)]"""
    path = Path(path or EXT_LABELS_FILE)
    data = _validate(LabelFile, _load_yaml(path), str(path))
    return [(r.s, r.stem, r.weight, r.name) for r in data.labels]


def expand_tower(tower: TowerRecord, max_s: int, max_stem: int) -> List[Tuple[int, int, int, str]]:
    ds, dstem, dw = MULTIPLIERS[tower.step]
    out = []
    s, stem, w = tower.s, tower.stem, tower.weight
    while s <= max_s and stem <= max_stem:
        out.append((s, stem, w, tower.kind))
        s, stem, w = s + ds, stem + dstem, w + dw
    return out


def read_chart_fixture(path: Path) -> ChartFixture:
    """
    Raises:
        FileNotFoundError: 파일 없음
        ChartFormatError: 레코드 형식 오류
    """
    path = Path(path)
    data = _validate(ChartFixtureFile, _load_yaml(path), str(path))
    max_stem, max_s = data.region.max_stem, data.region.max_s
    expected: Counter = Counter()
    for r in data.classes:
        if r.stem <= max_stem and r.s <= max_s:
            expected[(r.s, r.stem, r.weight, r.kind)] += 1
    for tower in data.towers:
        for key in expand_tower(tower, max_s, max_stem):
            expected[key] += 1
    logger.debug(f"fixture {path.name}: 성분 {sum(expected.values())}개")
    return ChartFixture(max_stem, max_s, expected)


def ext_chart_fixture() -> ChartFixture:
    return read_chart_fixture(EXT_CHART_FIXTURE)


def may_e4_fixture() -> ChartFixture:
    return read_chart_fixture(MAY_E4_FIXTURE)


def compare_multisets(expected: Counter, actual: Counter) -> List[str]:
    """차이 목록 (비어 있으면 일치)"""
    diffs = []
    for key in sorted(set(expected) | set(actual), key=lambda k: (k[1], k[0]) + tuple(map(str, k[2:]))):
        e, a = expected.get(key, 0), actual.get(key, 0)
        if e != a:
            diffs.append(f"{key}: 기대 {e}, 계산 {a}")
    return diffs


__all__ = [
    "ChartFixture", "read_labels", "read_chart_fixture", "ext_chart_fixture", "may_e4_fixture",
    "expand_tower", "compare_multisets",
]
