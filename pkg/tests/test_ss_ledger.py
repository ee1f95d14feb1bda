import pytest

from src.chart import Chart, ExtSummand
from src.config import ADAMS_LEDGER_FILE
from src.errors import LedgerError
from src.ss_ledger import PagedChart, einf_survivors, load_ledger, load_ledger_file, turn_page


@pytest.fixture
def e2_chart():
    summands = [
        ExtSummand(1, 5, 3, None, "x", 0),
        ExtSummand(3, 4, 3, None, "y", 0),
        ExtSummand(1, 7, 4, None, "u", 0),
        ExtSummand(3, 6, 5, None, "v", 0),
        ExtSummand(2, 2, 2, None, "w", 0),
    ]
    return Chart("motivic", "ext", 3, 8, summands)


def _ledger(*entries):
    return {"entries": list(entries)}


def test_differential_kills_both_ends(e2_chart):
    ledger = load_ledger(_ledger({"page": 2, "source": "x", "target": "y"}), e2_chart, labels=[])
    einf = einf_survivors(PagedChart.from_chart(e2_chart), ledger)
    assert einf.kind == "adams-einf"
    assert einf.at(1, 5) == [] and einf.at(3, 4) == []
    assert [x.label for x in einf.at(2, 2)] == ["w"]


def test_tau_multiple_target_leaves_exotic_torsion(e2_chart):
    ledger = load_ledger(_ledger({"page": 2, "source": "u", "target": "tau v"}), e2_chart, labels=[])
    e3 = turn_page(PagedChart.from_chart(e2_chart), ledger)
    assert e3.page == 3
    assert e3.summands(1, 7) == []
    (v,) = e3.summands(3, 6)
    assert (v.weight, v.order, v.exotic, v.label) == (5, 1, True, "v")


def test_zero_differential_keeps_both_alive(e2_chart):
    ledger = load_ledger(_ledger({"page": 2, "source": "x", "target": "0"}), e2_chart, labels=[])
    einf = einf_survivors(PagedChart.from_chart(e2_chart), ledger)
    assert len(einf.at(1, 5)) == 1
    assert len(einf.at(3, 4)) == 1


def test_rejections_are_collected(e2_chart):
    data = _ledger(
        {"page": 2, "source": "x", "target": "v"},
        {"page": 2, "source": "nobody", "target": "0"},
        {"page": 1, "source": "x", "target": "0"},
    )
    with pytest.raises(LedgerError) as info:
        load_ledger(data, e2_chart, labels=[])
    assert len(info.value.rejections) == 3


def test_out_of_range_entries_are_skipped(e2_chart):
    data = {
        "classes": {"far": [4, 30, 16]},
        "entries": [{"page": 2, "source": "far", "target": "0"}],
    }
    ledger = load_ledger(data, e2_chart, labels=[])
    assert ledger.entries == []
    assert [str(e) for e in ledger.skipped] == ["d2(far) = 0"]


def test_family_member_with_target_past_edge_is_skipped(e2_chart):
    data = _ledger({"page": 2, "source": "w^{k}", "target": "0", "family": {"var": "k", "start": 1}})
    ledger = load_ledger(data, e2_chart, labels=[])
    assert ledger.entries == []
    assert [str(e) for e in ledger.skipped] == ["d2(w^1) = 0"]


def test_family_stops_at_chart_edge():
    chart = Chart("motivic", "ext", 4, 3, [ExtSummand(2, 2, 2, None, "w", 0)])
    data = _ledger({"page": 2, "source": "w^{k}", "target": "0", "family": {"var": "k", "start": 1}})
    ledger = load_ledger(data, chart, labels=[])
    assert [e.entry.source for e in ledger.entries] == ["w^1"]
    assert ledger.skipped == []


def test_last_page_limits_application(e2_chart):
    ledger = load_ledger(_ledger({"page": 2, "source": "u", "target": "tau v"}), e2_chart, labels=[])
    assert ledger.pages == [2]
    untouched = einf_survivors(PagedChart.from_chart(e2_chart), ledger, last_page=1)
    assert len(untouched.at(1, 7)) == 1
    assert untouched.provenance[-1] == "ledger:pages<=1"
    applied = einf_survivors(PagedChart.from_chart(e2_chart), ledger)
    assert applied.at(1, 7) == []


def test_bundled_ledger_is_out_of_range_for_small_chart(motivic_chart):
    ledger = load_ledger_file(ADAMS_LEDGER_FILE, motivic_chart)
    assert ledger.entries == []
    assert any(e.source == "h4" for e in ledger.skipped)
    einf = einf_survivors(PagedChart.from_chart(motivic_chart), ledger)
    assert einf.multiset() == motivic_chart.multiset()
