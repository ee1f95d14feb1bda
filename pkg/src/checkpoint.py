"""
분해 체크포인트 모듈
- 버전이 붙은 JSON (pydantic 으로 스키마 검증)
- 셀 완료마다 원자적 저장 (임시 파일 → replace), 최소 저장 간격 설정 가능
- 불러온 frontier 가 단조가 아니면 IntegrityError
"""
import json
import logging
import time
from pathlib import Path
from typing import Dict, List, Literal, Optional, Tuple

from pydantic import BaseModel, Field, ValidationError

from .config import DEFAULT_CHECKPOINT_INTERVAL
from .errors import IntegrityError
from .milnor import milnor
from .resolution import ResGenerator, Resolution

logger = logging.getLogger(__name__)

CHECKPOINT_SCHEMA_VERSION = 1


class GeneratorRecord(BaseModel):
    """생성원 하나와 그 미분 [(대상 생성원 번호, R), …]"""
    s: int = Field(ge=0)
    t: int = Field(ge=0)
    w: int
    id: int = Field(ge=0)
    differential: List[Tuple[int, List[int]]] = Field(default_factory=list)


class CheckpointFile(BaseModel):
    schema_version: int = CHECKPOINT_SCHEMA_VERSION
    mode: Literal["motivic", "classical"]
    frontier: Dict[int, int]
    generators: List[GeneratorRecord]


def to_checkpoint(res: Resolution) -> CheckpointFile:
    records = []
    for s, gens in enumerate(res.generators):
        for g, diff in zip(gens, res.differentials[s]):
            records.append(GeneratorRecord(
                s=g.s, t=g.t, w=g.w, id=g.id,
                differential=[(k, list(R)) for k, R in diff],
            ))
    return CheckpointFile(mode=res.mode, frontier=dict(res.frontier), generators=records)


def dump_checkpoint(res: Resolution) -> str:
    data = to_checkpoint(res).model_dump(mode="json")
    return json.dumps(data, indent=2, ensure_ascii=False, sort_keys=True)


def save_checkpoint(res: Resolution, path: Path) -> Path:
    """원자적 저장"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_suffix(path.suffix + ".tmp")
    tmp.write_text(dump_checkpoint(res), encoding="utf-8")
    tmp.replace(path)
    return path


def from_checkpoint(data: CheckpointFile) -> Resolution:
    if data.schema_version != CHECKPOINT_SCHEMA_VERSION:
        raise IntegrityError(f"지원하지 않는 체크포인트 버전: {data.schema_version}")
    res = Resolution(motivic=(data.mode == "motivic"))
    res.generators = [[] for _ in range(max((r.s for r in data.generators), default=0) + 1)]
    res.differentials = [[] for _ in res.generators]
    for r in data.generators:
        gens = res.generators[r.s]
        if gens and r.t < gens[-1].t:
            raise IntegrityError(f"생성원 순서 오류: s={r.s}, t={r.t}")
        gens.append(ResGenerator(r.s, r.t, r.w, r.id, len(gens)))
        res.differentials[r.s].append(tuple((k, milnor(*R)) for k, R in r.differential))
    if not res.generators[0]:
        raise IntegrityError("F_0 생성원이 없습니다")
    res.frontier = {int(s): int(t) for s, t in data.frontier.items()}
    res.check_frontier()
    return res


def load_checkpoint(path: Path) -> Resolution:
    """
    체크포인트 불러오기

    Raises:
        FileNotFoundError: 파일 없음
        IntegrityError: 스키마/버전/frontier 오류
    """
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"체크포인트를 찾을 수 없습니다: {path}")
    try:
        data = CheckpointFile.model_validate_json(path.read_text(encoding="utf-8"))
    except ValidationError as e:
        raise IntegrityError(f"손상된 체크포인트 {path}: {e}") from e
    res = from_checkpoint(data)
    logger.info(f"체크포인트 로드: {path} (frontier {res.frontier})")
    return res


class Checkpointer:
    """셀 완료 콜백 - interval 초 이내의 반복 저장은 건너뜀"""

    def __init__(self, path: Path, interval: float = DEFAULT_CHECKPOINT_INTERVAL):
        self.path = Path(path)
        self.interval = interval
        self._last: Optional[float] = None
        self.writes = 0

    def __call__(self, res: Resolution, s: int, t: int) -> None:
        now = time.monotonic()
        if self.interval > 0 and self._last is not None and now - self._last < self.interval:
            return
        self.flush(res)
        self._last = now

    def flush(self, res: Resolution) -> None:
        save_checkpoint(res, self.path)
        self.writes += 1
        logger.debug(f"체크포인트 저장: {self.path}")
