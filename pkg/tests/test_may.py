import pytest

from src.config import MAY_LEDGER_FILE
from src.errors import LedgerError
from src.fixtures import compare_multisets, ext_chart_fixture, may_e4_fixture
from src.grading import MayDegree
from src.may import (
    MAY_GENERATORS,
    MAY_RELATIONS,
    MayE2,
    MayPoly,
    check_d_squared,
    dga_differential,
    e2_page,
    e4_chart,
    gen_monomial_degree,
    h_degree,
    load_may_ledger,
    load_may_ledger_file,
    may_einf_chart,
    parse_gen_monomial,
    required_max_m,
)

SMALL_STEM = 8
SMALL_F = 8


@pytest.fixture(scope="module")
def small_e2():
    return MayE2(SMALL_STEM, SMALL_F, required_max_m(SMALL_STEM, SMALL_F))


@pytest.fixture(scope="module")
def may_ledger():
    return load_may_ledger_file(MAY_LEDGER_FILE)


def _restrict(counter, max_stem, max_s):
    return type(counter)({k: n for k, n in counter.items() if k[1] <= max_stem and k[0] <= max_s})


def test_h_degrees():
    assert h_degree(1, 0) == MayDegree(1, 0, 1, 0)
    assert h_degree(1, 1) == MayDegree(1, 1, 1, 1)
    assert h_degree(2, 0) == MayDegree(2, 2, 1, 1)
    assert h_degree(2, 1) == MayDegree(2, 5, 1, 3)


def test_dga_differential():
    assert str(dga_differential(MayPoly.parse("h20"))) == "h10 h11"
    assert dga_differential(MayPoly.parse("h20^2")).is_zero
    assert dga_differential(dga_differential(MayPoly.parse("h30 h21"))).is_zero


def test_d_squared_vanishes_in_range():
    assert check_d_squared(SMALL_STEM, 4) == []


def test_named_generators_have_expected_degrees(small_e2):
    for name, _, degree in MAY_GENERATORS:
        if degree[1] > SMALL_STEM or degree[2] > SMALL_F:
            continue
        d, bits = small_e2.class_of(name)
        assert bits != 0, name
        assert (d.m, d.s, d.f, d.w) == degree


def test_relations_in_range(small_e2):
    checked = 0
    for lhs, rhs in MAY_RELATIONS:
        _, exps = parse_gen_monomial(lhs)
        if gen_monomial_degree(exps).s > SMALL_STEM:
            continue
        assert small_e2.relation_holds(lhs, rhs), f"{lhs} = {rhs}"
        checked += 1
    assert checked == 3


def test_unit_spans_origin(small_e2):
    origin = (0, 0, 0, 0)
    assert len(small_e2.homology[origin].summands) == 1
    assert small_e2.basis[origin] == [(0,) * len(MAY_GENERATORS)]
    chart = e2_page(4, max_f=3).chart()
    assert [(x.s, x.stem, x.weight, x.label) for x in chart.summands if x.stem == 0 and x.s == 0] == [
        (0, 0, 0, "1")
    ]


def test_tau_moves_weight(small_e2):
    d, bits = small_e2.class_of("tau h1^3")
    assert d.w == 2
    assert bits == small_e2.class_of("h1^3")[1]


def test_classical_mode_forgets_weights():
    chart = e2_page(6, max_f=4, motivic=False, max_m=required_max_m(6, 4)).chart()
    assert chart.mode == "classical"
    assert all(x.weight == 0 for x in chart.summands)


def test_bundled_ledger_loads(may_ledger):
    assert len(load_may_ledger_file(MAY_LEDGER_FILE, max_page=2)) == 15
    assert len(may_ledger) == 19
    assert {d.page for d in may_ledger} == {2, 4, 8}


def test_ledger_degree_check():
    bad = {"entries": [
        {"page": 2, "source": "b20", "value": "h1^3"},
        {"page": 2, "source": "tau b20", "value": "0"},
        {"page": 2, "source": "b99", "value": "0"},
    ]}
    with pytest.raises(LedgerError) as info:
        load_may_ledger(bad)
    assert len(info.value.rejections) == 3
    good = load_may_ledger({"entries": [{"page": 2, "source": "b20", "value": "tau h1^3 + h0^2 h2"}]})
    assert len(good[0].value) == 2


def test_e4_matches_fixture_in_low_stems(may_ledger):
    fixture = may_e4_fixture()
    chart = e4_chart(SMALL_STEM, may_ledger, max_f=SMALL_F)
    assert chart.kind == "may-e4"
    expected = _restrict(fixture.expected, SMALL_STEM, SMALL_F)
    assert compare_multisets(expected, chart.multiset(SMALL_STEM, SMALL_F)) == []


def test_may_einf_matches_ext_in_low_stems(may_ledger):
    chart = may_einf_chart(SMALL_STEM, may_ledger, max_f=SMALL_F)
    assert chart.kind == "may-einf"
    expected = _restrict(ext_chart_fixture().expected, SMALL_STEM, SMALL_F)
    assert compare_multisets(expected, chart.multiset(SMALL_STEM, SMALL_F)) == []


@pytest.mark.slow
def test_e4_matches_full_fixture(may_ledger):
    fixture = may_e4_fixture()
    chart = e4_chart(fixture.max_stem, may_ledger)
    assert compare_multisets(fixture.expected, chart.multiset(fixture.max_stem, fixture.max_s)) == []
