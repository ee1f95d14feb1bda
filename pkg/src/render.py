"""
차트 렌더링 (SVG 1.1, PNG 미리보기)
- 가로 stem, 세로 Adams filtration, weight 는 점 옆 숫자
- 검은 점 Free, 빨간 점 τ-torsion
- h₀ 수직선 검정/파랑 (τ_shift > 0 이면 파랑), h₁ 대각선 검정/빨강 (대상이 torsion 이면 빨강),
  h₂ 기울기 1/3 초록/자홍 (τ_shift > 0 이면 자홍)
"""
import logging
from html import escape
from pathlib import Path
from typing import Dict, List, Tuple

from PIL import Image, ImageDraw

from .chart import Chart, ClassRef, ProductEdge

logger = logging.getLogger(__name__)

CELL = 40
MARGIN = 40
DOT_RADIUS = 3.5
DOT_SPACING = 8

BLACK = "#000000"
RED = "#d62728"
BLUE = "#1f77b4"
GREEN = "#2ca02c"
MAGENTA = "#e377c2"
GRID = "#dddddd"


def edge_color(chart: Chart, edge: ProductEdge) -> str:
    if edge.multiplier == "h0":
        return BLUE if edge.tau_shift > 0 else BLACK
    if edge.multiplier == "h1":
        return RED if chart.get(edge.target).order is not None else BLACK
    return MAGENTA if edge.tau_shift > 0 else GREEN


class ChartLayout:
    """성분별 픽셀 좌표 (같은 위치의 성분은 가로로 나란히)"""

    def __init__(self, chart: Chart):
        self.chart = chart
        self.width = 2 * MARGIN + (chart.max_stem + 1) * CELL
        self.height = 2 * MARGIN + (chart.max_s + 1) * CELL
        self.points: Dict[ClassRef, Tuple[float, float]] = {}
        for s, stem in chart.positions():
            group = chart.at(s, stem)
            n = len(group)
            for k, x in enumerate(group):
                offset = (k - (n - 1) / 2) * DOT_SPACING
                self.points[x.ref] = self.to_pixel(stem, s, offset)

    def to_pixel(self, stem: float, s: float, offset: float = 0.0) -> Tuple[float, float]:
        px = MARGIN + (stem + 0.5) * CELL + offset
        py = self.height - MARGIN - (s + 0.5) * CELL
        return round(px, 2), round(py, 2)


def render_svg(chart: Chart) -> str:
    """결정적 SVG 문서 (빈 차트는 축만)"""
    layout = ChartLayout(chart)
    w, h = layout.width, layout.height
    out: List[str] = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w}" height="{h}" viewBox="0 0 {w} {h}">',
        f'<title>{escape(chart.kind)} ({escape(chart.mode)})</title>',
        '<g id="grid">',
    ]
    for stem in range(chart.max_stem + 2):
        x = MARGIN + stem * CELL
        out.append(f'<line x1="{x}" y1="{MARGIN}" x2="{x}" y2="{h - MARGIN}" stroke="{GRID}" stroke-width="0.5"/>')
    for s in range(chart.max_s + 2):
        y = h - MARGIN - s * CELL
        out.append(f'<line x1="{MARGIN}" y1="{y}" x2="{w - MARGIN}" y2="{y}" stroke="{GRID}" stroke-width="0.5"/>')
    out.append("</g>")

    out.append('<g id="axes" font-family="sans-serif" font-size="10">')
    out.append(f'<line x1="{MARGIN}" y1="{h - MARGIN}" x2="{w - MARGIN}" y2="{h - MARGIN}" stroke="{BLACK}"/>')
    out.append(f'<line x1="{MARGIN}" y1="{MARGIN}" x2="{MARGIN}" y2="{h - MARGIN}" stroke="{BLACK}"/>')
    for stem in range(0, chart.max_stem + 1, 2):
        x, _ = layout.to_pixel(stem, 0)
        out.append(f'<text x="{x}" y="{h - MARGIN + 14}" text-anchor="middle">{stem}</text>')
    for s in range(0, chart.max_s + 1, 2):
        _, y = layout.to_pixel(0, s)
        out.append(f'<text x="{MARGIN - 6}" y="{y + 3}" text-anchor="end">{s}</text>')
    out.append("</g>")

    out.append('<g id="edges" stroke-width="1">')
    for e in chart.sorted_edges():
        if e.source not in layout.points or e.target not in layout.points:
            continue
        x1, y1 = layout.points[e.source]
        x2, y2 = layout.points[e.target]
        out.append(f'<line x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}" stroke="{edge_color(chart, e)}"/>')
    out.append("</g>")

    out.append('<g id="classes" font-family="sans-serif" font-size="7">')
    for x in chart.sorted_summands():
        px, py = layout.points[x.ref]
        color = BLACK if x.order is None else RED
        title = f"{x.label or ''} (s={x.s}, stem={x.stem}, w={x.weight})".strip()
        out.append(f'<circle cx="{px}" cy="{py}" r="{DOT_RADIUS}" fill="{color}"><title>{escape(title)}</title></circle>')
        out.append(f'<text x="{px + 4}" y="{py - 4}" fill="{color}">{x.weight}</text>')
    out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"


def write_svg(chart: Chart, path: Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(render_svg(chart), encoding="utf-8")
    logger.info(f"SVG 저장: {path}")
    return path


def render_png(chart: Chart, scale: int = 2) -> Image.Image:
    """SVG 와 같은 규칙의 래스터 미리보기"""
    layout = ChartLayout(chart)
    img = Image.new("RGB", (layout.width * scale, layout.height * scale), "white")
    draw = ImageDraw.Draw(img)

    def sc(p: Tuple[float, float]) -> Tuple[float, float]:
        return p[0] * scale, p[1] * scale

    h = layout.height
    draw.line([sc((MARGIN, h - MARGIN)), sc((layout.width - MARGIN, h - MARGIN))], fill=BLACK, width=scale)
    draw.line([sc((MARGIN, MARGIN)), sc((MARGIN, h - MARGIN))], fill=BLACK, width=scale)
    for stem in range(0, chart.max_stem + 1, 2):
        x, _ = layout.to_pixel(stem, 0)
        draw.text(sc((x - 3, h - MARGIN + 4)), str(stem), fill=BLACK)
    for s in range(0, chart.max_s + 1, 2):
        _, y = layout.to_pixel(0, s)
        draw.text(sc((MARGIN - 16, y - 5)), str(s), fill=BLACK)

    for e in chart.sorted_edges():
        if e.source in layout.points and e.target in layout.points:
            draw.line([sc(layout.points[e.source]), sc(layout.points[e.target])],
                      fill=edge_color(chart, e), width=scale)
    r = DOT_RADIUS * scale
    for x in chart.sorted_summands():
        px, py = sc(layout.points[x.ref])
        color = BLACK if x.order is None else RED
        draw.ellipse([px - r, py - r, px + r, py + r], fill=color)
        draw.text((px + 2 * scale, py - 6 * scale), str(x.weight), fill=color)
    return img


def write_png(chart: Chart, path: Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    render_png(chart).save(path, "PNG")
    logger.info(f"PNG 저장: {path}")
    return path
