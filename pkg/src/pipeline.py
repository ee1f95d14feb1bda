#!/usr/bin/env python3
"""
핵심 파이프라인 함수들
- run_compute_ext: 분해 → Ext 차트 (체크포인트/재개 포함)
- run_compute_may: May E₂ / E₄ / E∞ 차트
- run_apply_ledger: Adams ledger 적용 후 E∞ 차트
- run_render: 차트 파일 → SVG / PNG
각 실행은 출력 옆에 meta.json (파라미터, 단계별 시간, provenance) 을 남긴다.
"""
import json
import logging
import time
from contextlib import contextmanager
from dataclasses import dataclass, field
from datetime import datetime
from pathlib import Path
from typing import Any, Dict, Iterator, List, Optional

from .chart import Chart
from .chart_io import read_chart, write_chart
from .checkpoint import Checkpointer, load_checkpoint
from .config import DEFAULT_CHECKPOINT_INTERVAL
from .errors import IntegrityError
from .ext import ExtComputer, required_frontier
from .fixtures import read_labels
from .may import e2_page, e4_chart, load_may_ledger_file, may_einf_chart, required_max_m, default_max_f
from .render import write_png, write_svg
from .resolution import Resolution, extend_resolution
from .ss_ledger import PagedChart, einf_survivors, load_ledger_file

logger = logging.getLogger(__name__)

MODES = ("motivic", "classical")
MAY_PAGES = ("2", "4", "inf")


@dataclass
class RunRecord:
    """한 번의 실행 기록 (meta.json 내용)"""
    command: str
    params: Dict[str, Any]
    timings: Dict[str, float] = field(default_factory=dict)
    outputs: List[str] = field(default_factory=list)
    provenance: List[str] = field(default_factory=list)
    created_at: str = field(default_factory=lambda: datetime.now().isoformat())

    @contextmanager
    def stage(self, name: str) -> Iterator[None]:
        start = time.time()
        logger.info(f"[{self.command}] {name} 시작")
        try:
            yield
        finally:
            elapsed = time.time() - start
            self.timings[name] = round(elapsed, 3)
            logger.info(f"[{self.command}] {name} 완료 ({elapsed:.2f}초)")

    def summary(self) -> str:
        parts = [f"{name} {sec:.2f}s" for name, sec in self.timings.items()]
        return ", ".join(parts) if parts else "-"

    def to_dict(self) -> Dict[str, Any]:
        return {
            "command": self.command,
            "params": self.params,
            "timings": self.timings,
            "outputs": self.outputs,
            "provenance": self.provenance,
            "created_at": self.created_at,
        }


def write_meta(out_dir: Path, record: RunRecord) -> Path:
    """meta.json 저장"""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    meta_path = out_dir / "meta.json"
    with open(meta_path, "w", encoding="utf-8") as f:
        json.dump(record.to_dict(), f, indent=2, ensure_ascii=False)
    return meta_path


def default_checkpoint_path(out: Path) -> Path:
    out = Path(out)
    return out.with_name(out.stem + ".checkpoint.json")


def run_compute_ext(max_stem: int, max_s: int, mode: str, out: Path,
                    resume: Optional[Path] = None, threads: int = 1,
                    checkpoint_interval: float = DEFAULT_CHECKPOINT_INTERVAL) -> RunRecord:
    """
    Ext 차트 계산

    Args:
        max_stem, max_s: 차트 범위
        mode: "motivic" | "classical"
        out: 차트 JSON 경로 (체크포인트는 같은 폴더에 *.checkpoint.json)
        resume: 이어서 계산할 체크포인트
        threads: 커널 계산 병렬도
        checkpoint_interval: 셀 사이 체크포인트 최소 간격 (초), 0 이면 셀마다 저장

    Raises:
        ValueError: 잘못된 범위/모드
        IntegrityError: 체크포인트 모드 불일치, 분해 무결성 실패
    """
    if max_stem < 0 or max_s < 1:
        raise ValueError(f"범위는 max_stem ≥ 0, max_s ≥ 1 이어야 합니다: {max_stem}, {max_s}")
    if mode not in MODES:
        raise ValueError(f"알 수 없는 모드: {mode}")
    out = Path(out)
    record = RunRecord("compute-ext", {
        "max_stem": max_stem, "max_filtration": max_s, "mode": mode, "threads": threads,
        "resume": str(resume) if resume else None,
    })
    checkpoint_path = Path(resume) if resume else default_checkpoint_path(out)
    checkpointer = Checkpointer(checkpoint_path, checkpoint_interval)

    with record.stage("resolution"):
        if resume:
            res = load_checkpoint(resume)
            if res.mode != mode:
                raise IntegrityError(f"체크포인트 모드 {res.mode} 와 요청 모드 {mode} 가 다릅니다")
        else:
            res = Resolution(motivic=(mode == "motivic"))
        s_top, t_top = required_frontier(max_s, max_stem)
        extend_resolution(res, s_top, t_top, workers=threads, on_cell=checkpointer)
        checkpointer.flush(res)

    with record.stage("ext"):
        labels = read_labels() if mode == "motivic" else None
        chart = ExtComputer(res, max_s, max_stem).chart(labels=labels)

    with record.stage("write"):
        write_chart(chart, out)

    record.outputs += [str(out), str(checkpoint_path)]
    record.provenance = list(chart.provenance)
    write_meta(out.parent, record)
    return record


def run_compute_may(max_stem: int, page: str, out: Path, ledger: Optional[Path] = None,
                    max_f: Optional[int] = None, threads: int = 1) -> RunRecord:
    """
    May 차트 계산 (page: "2", "4", "inf")

    Raises:
        FileNotFoundError: E₄ 이상인데 ledger 가 없을 때
        LedgerError: ledger 항목 거부
    """
    if page not in MAY_PAGES:
        raise ValueError(f"페이지는 {', '.join(MAY_PAGES)} 중 하나여야 합니다: {page}")
    out = Path(out)
    max_f = max_f if max_f is not None else default_max_f(max_stem)
    record = RunRecord("compute-may", {
        "max_stem": max_stem, "page": page, "max_filtration": max_f, "threads": threads,
        "ledger": str(ledger) if ledger else None,
    })

    differentials = []
    if page != "2":
        if ledger is None:
            raise FileNotFoundError(f"E{page} 계산에는 --ledger 가 필요합니다")
        with record.stage("ledger"):
            differentials = load_may_ledger_file(ledger)

    with record.stage(f"may-e{page}"):
        if page == "2":
            chart = e2_page(max_stem, max_m=required_max_m(max_stem, max_f), max_f=max_f, workers=threads).chart()
        elif page == "4":
            chart = e4_chart(max_stem, differentials, max_f=max_f, workers=threads)
        else:
            chart = may_einf_chart(max_stem, differentials, max_f=max_f, workers=threads)

    with record.stage("write"):
        write_chart(chart, out)

    record.outputs.append(str(out))
    record.provenance = list(chart.provenance)
    write_meta(out.parent, record)
    return record


def run_apply_ledger(chart_path: Path, ledger_path: Path, out: Path,
                     last_page: Optional[int] = None) -> RunRecord:
    """
    Adams E₂ 차트에 ledger 를 적용한 E∞ 차트

    Raises:
        LedgerError: 거부 항목 또는 페이지 계산 실패
    """
    out = Path(out)
    record = RunRecord("apply-ledger", {
        "chart": str(chart_path), "ledger": str(ledger_path), "last_page": last_page,
    })
    with record.stage("load"):
        chart = read_chart(chart_path)
        ledger = load_ledger_file(ledger_path, chart)
    logger.info(f"ledger 항목 적용 {len(ledger.entries)}개, 범위 밖 {len(ledger.skipped)}개")
    for entry in ledger.skipped:
        logger.debug(f"범위 밖: {entry}")

    with record.stage("pages"):
        einf = einf_survivors(PagedChart.from_chart(chart), ledger, last_page)

    with record.stage("write"):
        write_chart(einf, out)

    record.outputs.append(str(out))
    record.provenance = list(einf.provenance)
    write_meta(out.parent, record)
    return record


def run_render(chart_path: Path, svg: Optional[Path] = None, png: Optional[Path] = None) -> RunRecord:
    """
    Raises:
        ChartFormatError: 차트 파일 형식 오류
    """
    if svg is None and png is None:
        raise ValueError("--svg 또는 --png 중 하나는 필요합니다")
    record = RunRecord("render", {"chart": str(chart_path), "svg": str(svg) if svg else None,
                                  "png": str(png) if png else None})
    chart: Chart
    with record.stage("load"):
        chart = read_chart(chart_path)
    if svg is not None:
        with record.stage("svg"):
            record.outputs.append(str(write_svg(chart, svg)))
    if png is not None:
        with record.stage("png"):
            record.outputs.append(str(write_png(chart, png)))
    record.provenance = list(chart.provenance)
    write_meta(Path(record.outputs[0]).parent, record)
    return record


__all__ = [
    "RunRecord", "write_meta", "run_compute_ext", "run_compute_may", "run_apply_ledger", "run_render",
    "default_checkpoint_path", "MODES", "MAY_PAGES",
]
