from collections import Counter

import pytest

from src.errors import ChartFormatError
from src.fixtures import (
    TowerRecord,
    compare_multisets,
    expand_tower,
    ext_chart_fixture,
    may_e4_fixture,
    read_chart_fixture,
    read_labels,
)


def test_label_table():
    labels = {name: (s, stem, w) for s, stem, w, name in read_labels()}
    assert labels["h1"] == (1, 1, 1)
    assert labels["c0"] == (3, 8, 5)
    assert labels["[tau g]"] == (4, 20, 11)


def test_tower_expansion():
    tower = TowerRecord(s=5, stem=5, weight=5, kind="torsion", step="h1")
    assert expand_tower(tower, max_s=7, max_stem=24) == [
        (5, 5, 5, "torsion"), (6, 6, 6, "torsion"), (7, 7, 7, "torsion"),
    ]


def test_bundled_fixtures_parse():
    ext = ext_chart_fixture()
    assert (ext.max_stem, ext.max_s) == (24, 14)
    assert ext.expected[(0, 0, 0, "free")] == 1
    assert ext.expected[(4, 4, 4, "torsion")] == 1
    assert ext.kinds()[(14, 0, "free")] == 1
    may = may_e4_fixture()
    assert (may.max_stem, may.max_s) == (20, 12)


def test_malformed_fixture(tmp_path):
    path = tmp_path / "bad.yaml"
    path.write_text("region: {max_stem: 3, max_s: 3}\nclasses:\n  - {s: 1, stem: 1, weight: 1, kind: odd}\n",
                    encoding="utf-8")
    with pytest.raises(ChartFormatError) as info:
        read_chart_fixture(path)
    assert "classes[0]" in str(info.value)
    with pytest.raises(FileNotFoundError):
        read_chart_fixture(tmp_path / "missing.yaml")


def test_compare_multisets():
    a = Counter({(1, 1, 1, "free"): 1, (2, 2, 2, "free"): 1})
    b = Counter({(1, 1, 1, "free"): 2})
    diffs = compare_multisets(a, b)
    assert len(diffs) == 2
    assert compare_multisets(a, a) == []
