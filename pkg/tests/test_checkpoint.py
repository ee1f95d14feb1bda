import json

import pytest

from src.checkpoint import Checkpointer, dump_checkpoint, load_checkpoint, save_checkpoint
from src.config import DEFAULT_CHECKPOINT_INTERVAL
from src.errors import IntegrityError
from src.resolution import extend_resolution, make_resolution, verify_resolution


def test_resume_matches_uninterrupted_run(tmp_path):
    partial = make_resolution(3, 6)
    path = save_checkpoint(partial, tmp_path / "res.checkpoint.json")
    resumed = load_checkpoint(path)
    assert resumed.frontier == partial.frontier
    extend_resolution(resumed, 4, 10)
    fresh = make_resolution(4, 10)
    assert dump_checkpoint(resumed) == dump_checkpoint(fresh)
    assert verify_resolution(resumed).ok


def test_checkpointer_writes_every_cell(tmp_path):
    writer = Checkpointer(tmp_path / "cp.json", interval=0.0)
    make_resolution(2, 4).extend(2, 5, on_cell=writer)
    assert writer.writes >= 2
    assert load_checkpoint(tmp_path / "cp.json").frontier[2] == 5


def test_checkpointer_interval_skips_writes(tmp_path):
    writer = Checkpointer(tmp_path / "cp.json", interval=3600.0)
    make_resolution(2, 3).extend(2, 6, on_cell=writer)
    assert writer.writes == 1


def test_default_cadence_defers_to_final_flush(tmp_path):
    writer = Checkpointer(tmp_path / "cp.json")
    assert writer.interval == DEFAULT_CHECKPOINT_INTERVAL > 0
    res = make_resolution(2, 3)
    res.extend(2, 6, on_cell=writer)
    assert writer.writes == 1
    assert load_checkpoint(tmp_path / "cp.json").frontier[2] < 6
    writer.flush(res)
    assert writer.writes == 2
    assert load_checkpoint(tmp_path / "cp.json").frontier[2] == 6


def test_mode_is_recorded(tmp_path):
    path = save_checkpoint(make_resolution(2, 4, motivic=False), tmp_path / "c.json")
    assert load_checkpoint(path).mode == "classical"


def test_corrupt_checkpoint(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{\"mode\": \"motivic\"}", encoding="utf-8")
    with pytest.raises(IntegrityError):
        load_checkpoint(path)
    with pytest.raises(FileNotFoundError):
        load_checkpoint(tmp_path / "missing.json")


def test_non_monotone_frontier_rejected(tmp_path):
    path = save_checkpoint(make_resolution(2, 4), tmp_path / "c.json")
    data = json.loads(path.read_text(encoding="utf-8"))
    data["frontier"]["2"] = 9
    path.write_text(json.dumps(data), encoding="utf-8")
    with pytest.raises(IntegrityError):
        load_checkpoint(path)
