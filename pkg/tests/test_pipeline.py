import json

import pytest

from src.chart_io import read_chart
from src.config import ADAMS_LEDGER_FILE
from src.errors import IntegrityError
from src.pipeline import (
    default_checkpoint_path,
    run_apply_ledger,
    run_compute_ext,
    run_compute_may,
    run_render,
)


@pytest.fixture
def ext_run(tmp_path):
    out = tmp_path / "ext" / "chart.json"
    record = run_compute_ext(8, 4, "motivic", out)
    return out, record


def test_compute_ext_outputs(ext_run):
    out, record = ext_run
    chart = read_chart(out)
    assert chart.kind == "ext" and chart.mode == "motivic"
    assert (chart.max_s, chart.max_stem) == (4, 8)
    assert default_checkpoint_path(out).exists()
    meta = json.loads((out.parent / "meta.json").read_text(encoding="utf-8"))
    assert meta["command"] == "compute-ext"
    assert meta["params"]["max_stem"] == 8
    assert set(meta["timings"]) == {"resolution", "ext", "write"}
    assert record.summary() != "-"


def test_resume_extends_checkpoint(ext_run, tmp_path):
    out, _ = ext_run
    resumed = tmp_path / "resumed.json"
    run_compute_ext(10, 5, "motivic", resumed, resume=default_checkpoint_path(out))
    fresh = tmp_path / "fresh.json"
    run_compute_ext(10, 5, "motivic", fresh)
    assert resumed.read_bytes() == fresh.read_bytes()


def test_resume_rejects_mode_mismatch(ext_run, tmp_path):
    out, _ = ext_run
    with pytest.raises(IntegrityError):
        run_compute_ext(8, 4, "classical", tmp_path / "c.json", resume=default_checkpoint_path(out))


def test_compute_ext_argument_checks(tmp_path):
    with pytest.raises(ValueError):
        run_compute_ext(-1, 3, "motivic", tmp_path / "x.json")
    with pytest.raises(ValueError):
        run_compute_ext(4, 3, "real", tmp_path / "x.json")


def test_compute_may_pages(tmp_path):
    record = run_compute_may(6, "2", tmp_path / "e2.json", max_f=4)
    assert read_chart(tmp_path / "e2.json").kind == "may-e2"
    assert record.params["max_filtration"] == 4
    with pytest.raises(FileNotFoundError):
        run_compute_may(6, "4", tmp_path / "e4.json")
    with pytest.raises(ValueError):
        run_compute_may(6, "3", tmp_path / "e3.json")


def test_apply_ledger_and_render(ext_run, tmp_path):
    out, _ = ext_run
    einf = tmp_path / "einf" / "einf.json"
    run_apply_ledger(out, ADAMS_LEDGER_FILE, einf)
    chart = read_chart(einf)
    assert chart.kind == "adams-einf"
    assert chart.multiset() == read_chart(out).multiset()

    svg = tmp_path / "render" / "chart.svg"
    record = run_render(einf, svg=svg, png=tmp_path / "render" / "chart.png")
    assert "<svg" in svg.read_text(encoding="utf-8")
    assert len(record.outputs) == 2
    with pytest.raises(ValueError):
        run_render(einf)
