import json

import pytest
from PIL import Image

from src.chart import Chart, ClassExpr, ExtSummand, ProductEdge, weight_zero_slice
from src.chart_io import emit_chart, parse_chart, read_chart, write_chart
from src.errors import ChartFormatError, HomogeneityError
from src.render import render_svg, write_png, write_svg


@pytest.fixture
def small_chart():
    summands = [
        ExtSummand(1, 1, 1, None, "h1", 0),
        ExtSummand(2, 2, 2, None, None, 0),
        ExtSummand(3, 3, 3, None, None, 0),
        ExtSummand(4, 4, 4, 1, None, 0),
        ExtSummand(1, 3, 2, None, "h2", 0),
        ExtSummand(2, 3, 2, None, None, 0),
    ]
    edges = [
        ProductEdge((1, 1, 0), "h1", (2, 2, 0), 0),
        ProductEdge((2, 2, 0), "h1", (3, 3, 0), 0),
        ProductEdge((3, 3, 0), "h1", (4, 4, 0), 0),
        ProductEdge((1, 3, 0), "h0", (2, 3, 0), 0),
        ProductEdge((2, 3, 0), "h0", (3, 3, 0), 1),
    ]
    return Chart("motivic", "ext", 4, 4, summands, edges, ["test"])


def test_emit_is_deterministic_and_round_trips(small_chart, tmp_path):
    text = emit_chart(small_chart)
    shuffled = Chart(small_chart.mode, small_chart.kind, 4, 4,
                     list(reversed(small_chart.summands)), list(reversed(small_chart.edges)), ["test"])
    assert emit_chart(shuffled) == text
    path = write_chart(small_chart, tmp_path / "c.json")
    back = read_chart(path)
    assert emit_chart(back) == text
    assert back.multiset() == small_chart.multiset()
    record = json.loads(text)["edges"][0]
    assert set(record) == {"from", "to", "multiplier", "tau_shift"}


def test_positions_and_lookup_order(small_chart):
    assert small_chart.positions() == [(1, 1), (2, 2), (1, 3), (2, 3), (3, 3), (4, 4)]
    assert [x.label for x in small_chart.at(1, 3)] == ["h2"]
    assert small_chart.at(0, 0) == []


def test_multiply_uses_edges_and_torsion(small_chart):
    h0h2 = small_chart.basis_class((2, 3, 0))
    assert small_chart.multiply(h0h2, "h0") == ClassExpr.of(3, 3, 2, {0: 1})
    h1_4 = small_chart.multiply(small_chart.basis_class((3, 3, 0)), "h1")
    assert h1_4 == ClassExpr.of(4, 4, 4, {0: 0})
    tau_h1_3 = small_chart.basis_class((3, 3, 0)).tau()
    assert small_chart.multiply(tau_h1_3, "h1").is_zero


def test_class_sums():
    a = ClassExpr.of(2, 3, 2, {0: 0})
    assert (a + a).is_zero
    with pytest.raises(HomogeneityError):
        a + ClassExpr.of(2, 4, 2, {0: 0})
    with pytest.raises(HomogeneityError):
        a + ClassExpr.of(2, 3, 1, {1: 0})


def test_weight_zero_slice(small_chart):
    assert weight_zero_slice(small_chart) == {(1, 1): 1, (2, 2): 1, (3, 3): 1, (1, 3): 1, (2, 3): 1}


def test_with_labels_needs_unique_match(small_chart):
    labelled = small_chart.with_labels([(2, 2, 2, "h1^2"), (9, 9, 9, "missing")])
    assert labelled.find("h1^2").ref == (2, 2, 0)
    assert labelled.find("missing") is None


@pytest.mark.parametrize("mutate, where", [
    (lambda d: d["summands"][0].update(kind="torsion"), "summands[0]"),
    (lambda d: d["edges"][0].update(to=[9, 9, 0]), "edges[0]"),
    (lambda d: d["summands"][1].update(s=-1), "summands[1]"),
    (lambda d: d.update(schema_version=7), "schema_version"),
])
def test_malformed_chart_reports_location(small_chart, mutate, where):
    data = json.loads(emit_chart(small_chart))
    mutate(data)
    with pytest.raises(ChartFormatError) as info:
        parse_chart(json.dumps(data), "c.json")
    assert where in str(info.value)
    assert str(info.value).startswith("c.json")


def test_invalid_json_and_missing_file(tmp_path):
    with pytest.raises(ChartFormatError):
        parse_chart("{not json", "bad.json")
    with pytest.raises(FileNotFoundError):
        read_chart(tmp_path / "nope.json")


def test_render_svg_and_png(small_chart, tmp_path):
    svg = render_svg(small_chart)
    assert svg == render_svg(small_chart)
    assert svg.count("<circle") == len(small_chart.summands)
    assert "#d62728" in svg  # τ-torsion 점과 그리로 가는 h1 선
    assert "#1f77b4" in svg  # τ 가 붙은 h0 선
    write_svg(small_chart, tmp_path / "c.svg")
    png = write_png(small_chart, tmp_path / "c.png")
    with Image.open(png) as img:
        assert img.size[0] > 0 and img.size[1] > 0


def test_render_empty_chart():
    svg = render_svg(Chart("motivic", "ext", 3, 3))
    assert "<circle" not in svg
    assert svg.strip().endswith("</svg>")
