"""
차트 파일 입출력
- pydantic 스키마 (ChartFile), JSON 은 indent=2, sort_keys 로 결정적 출력
- 레코드 정렬: (stem, s, weight, index)
- 잘못된 파일은 위치(파일:JSON 경로)가 포함된 ChartFormatError
"""
import json
import logging
from pathlib import Path
from typing import List, Literal, Optional, Tuple

from pydantic import BaseModel, Field, ValidationError

from .chart import TORSION, Chart, ExtSummand, ProductEdge
from .errors import ChartFormatError

logger = logging.getLogger(__name__)

CHART_SCHEMA_VERSION = 1


class FrontierRecord(BaseModel):
    max_s: int = Field(ge=0)
    max_stem: int = Field(ge=0)


class SummandRecord(BaseModel):
    s: int = Field(ge=0)
    stem: int = Field(ge=0)
    weight: int
    kind: Literal["free", "torsion"]
    torsion_order: Optional[int] = Field(default=None, ge=1)
    label: Optional[str] = None
    index: int = Field(default=0, ge=0)
    exotic: bool = False


class EdgeRecord(BaseModel):
    # "from" 은 예약어라 alias 사용
    source: Tuple[int, int, int] = Field(alias="from")
    multiplier: Literal["h0", "h1", "h2"]
    target: Tuple[int, int, int] = Field(alias="to")
    tau_shift: int = Field(ge=0)

    model_config = {"populate_by_name": True}


class ChartFile(BaseModel):
    schema_version: int = CHART_SCHEMA_VERSION
    mode: Literal["motivic", "classical"]
    kind: str = "ext"
    frontier: FrontierRecord
    summands: List[SummandRecord] = Field(default_factory=list)
    edges: List[EdgeRecord] = Field(default_factory=list)
    provenance: List[str] = Field(default_factory=list)


def to_chart_file(chart: Chart) -> ChartFile:
    summands = [
        SummandRecord(
            s=x.s, stem=x.stem, weight=x.weight, kind=x.kind,
            torsion_order=x.order, label=x.label, index=x.index, exotic=x.exotic,
        )
        for x in chart.sorted_summands()
    ]
    edges = [
        EdgeRecord(source=e.source, multiplier=e.multiplier, target=e.target, tau_shift=e.tau_shift)
        for e in chart.sorted_edges()
    ]
    return ChartFile(
        mode=chart.mode,
        kind=chart.kind,
        frontier=FrontierRecord(max_s=chart.max_s, max_stem=chart.max_stem),
        summands=summands,
        edges=edges,
        provenance=list(chart.provenance),
    )


def emit_chart(chart: Chart) -> str:
    data = to_chart_file(chart).model_dump(mode="json", by_alias=True)
    return json.dumps(data, indent=2, ensure_ascii=False, sort_keys=True) + "\n"


def write_chart(chart: Chart, path: Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(emit_chart(chart), encoding="utf-8")
    logger.info(f"차트 저장: {path} (성분 {len(chart.summands)}개, 간선 {len(chart.edges)}개)")
    return path


def _location(source: str, loc) -> str:
    path = "".join(f"[{p}]" if isinstance(p, int) else f".{p}" for p in loc)
    return f"{source}:${path}"


def from_chart_file(data: ChartFile, source: str = "<chart>") -> Chart:
    if data.schema_version != CHART_SCHEMA_VERSION:
        raise ChartFormatError(f"지원하지 않는 스키마 버전: {data.schema_version}", f"{source}:$.schema_version")
    summands = []
    seen = set()
    for k, r in enumerate(data.summands):
        where = f"{source}:$.summands[{k}]"
        if (r.kind == TORSION) != (r.torsion_order is not None):
            raise ChartFormatError(f"kind={r.kind} 와 torsion_order={r.torsion_order} 불일치", where)
        ref = (r.s, r.stem, r.index)
        if ref in seen:
            raise ChartFormatError(f"중복 성분 {ref}", where)
        seen.add(ref)
        summands.append(ExtSummand(r.s, r.stem, r.weight, r.torsion_order, r.label, r.index, r.exotic))
    edges = []
    for k, e in enumerate(data.edges):
        where = f"{source}:$.edges[{k}]"
        if tuple(e.source) not in seen or tuple(e.target) not in seen:
            raise ChartFormatError(f"존재하지 않는 성분을 잇는 간선 {e.source} → {e.target}", where)
        edges.append(ProductEdge(tuple(e.source), e.multiplier, tuple(e.target), e.tau_shift))
    return Chart(
        mode=data.mode,
        kind=data.kind,
        max_s=data.frontier.max_s,
        max_stem=data.frontier.max_stem,
        summands=summands,
        edges=edges,
        provenance=list(data.provenance),
    )


def parse_chart(text: str, source: str = "<chart>") -> Chart:
    """
    Raises:
        ChartFormatError: JSON 문법 오류 또는 스키마 위반 (위치 포함)
    """
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as e:
        raise ChartFormatError(f"JSON 문법 오류: {e.msg}", f"{source}:{e.lineno}:{e.colno}") from e
    try:
        data = ChartFile.model_validate(raw)
    except ValidationError as e:
        first = e.errors()[0]
        raise ChartFormatError(first["msg"], _location(source, first["loc"])) from e
    return from_chart_file(data, source)


def read_chart(path: Path) -> Chart:
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"차트 파일을 찾을 수 없습니다: {path}")
    return parse_chart(path.read_text(encoding="utf-8"), str(path))


__all__ = ["ChartFile", "emit_chart", "write_chart", "parse_chart", "read_chart", "to_chart_file"]
