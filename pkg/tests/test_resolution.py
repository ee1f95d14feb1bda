import pytest

from src.chart import MULTIPLIERS, ClassExpr
from src.errors import InsufficientFrontierError, IntegrityError
from src.ext import ExtComputer, required_frontier
from src.fixtures import compare_multisets, ext_chart_fixture
from src.names import ClassResolver
from src.resolution import Resolution, extend_resolution, make_resolution, verify_resolution

from .conftest import SMALL_RANGE


def test_first_stage_generators_are_hopf_elements(motivic_resolution):
    gens = [(g.t, g.w) for g in motivic_resolution.generators[1]]
    assert gens[:4] == [(1, 0), (2, 1), (4, 2), (8, 4)]


def test_resolution_is_valid(motivic_resolution, classical_resolution):
    for res in (motivic_resolution, classical_resolution):
        report = verify_resolution(res)
        assert report.ok, report.failures
        assert report.checked > 0


def test_worker_count_does_not_change_result(motivic_resolution):
    s_top, t_top = required_frontier(3, 8)
    parallel = make_resolution(s_top, t_top, motivic=True, workers=3)
    for s in range(1, s_top + 1):
        ours = [(g.t, g.w, d) for g, d in zip(parallel.generators[s], parallel.differentials[s])]
        ref = [(g.t, g.w, d) for g, d in zip(motivic_resolution.generators[s], motivic_resolution.differentials[s])
               if g.t <= t_top]
        assert ours == ref


def test_extension_is_incremental():
    res = make_resolution(2, 6)
    extend_resolution(res, 3, 9)
    fresh = make_resolution(3, 9)
    assert [len(g) for g in res.generators] == [len(g) for g in fresh.generators]


def test_frontier_guard():
    res = Resolution()
    with pytest.raises(InsufficientFrontierError):
        res.require(1, 3)
    res.frontier = {0: 4, 1: 6}
    with pytest.raises(IntegrityError):
        res.check_frontier()


def test_chart_matches_fixture(motivic_chart):
    max_s, max_stem = SMALL_RANGE
    fixture = ext_chart_fixture()
    expected = type(fixture.expected)(
        {k: n for k, n in fixture.expected.items() if k[0] <= max_s and k[1] <= max_stem}
    )
    assert compare_multisets(expected, motivic_chart.multiset(max_stem, max_s)) == []


def test_labels_attach_to_unique_classes(motivic_chart):
    c0 = motivic_chart.find("c0")
    assert (c0.s, c0.stem, c0.weight, c0.kind) == (3, 8, 5, "free")
    ph1 = motivic_chart.find("Ph1")
    assert (ph1.s, ph1.stem, ph1.weight) == (5, 9, 5)


def test_motivic_relations(motivic_chart):
    resolver = ClassResolver(motivic_chart)
    assert resolver.resolve("h0^2 h2") == resolver.resolve("tau h1^3")
    assert resolver.resolve("h0 h1").is_zero
    h1_4 = resolver.resolve("h1^4")
    assert not h1_4.is_zero
    assert resolver.resolve("tau h1^4").is_zero


def test_h1_multiplication_by_edges(motivic_resolution, motivic_chart):
    ext = ExtComputer(motivic_resolution, *SMALL_RANGE)
    h1 = ext.basis_class(1, 1, 0)
    via_cochains = ext.multiply_by(ext.multiply_by(h1, "h1"), "h1")
    via_edges = motivic_chart.multiply(motivic_chart.multiply(motivic_chart.basis_class((1, 1, 0)), "h1"), "h1")
    assert via_cochains == via_edges
    assert via_edges.weight == 3


def _drop_killed(ext, cls):
    orders = [x.order for x in ext.group(cls.s, cls.stem + cls.s).summands]
    kept = {i: e for i, e in cls.terms if orders[i] is None or e < orders[i]}
    return ClassExpr.of(cls.s, cls.stem, cls.weight, kept)


def test_multiplication_commutes_with_tau(motivic_resolution):
    ext = ExtComputer(motivic_resolution, *SMALL_RANGE)
    max_s, max_stem = SMALL_RANGE
    checked = 0
    for s in range(max_s):
        for stem in range(max_stem + 1):
            for x in ext.summands(s, stem):
                cls = ext.basis_class(s, stem, x.index)
                tau_cls = _drop_killed(ext, cls.tau(1))
                for h, (ds, dstem, _) in MULTIPLIERS.items():
                    if s + ds > max_s or stem + dstem > max_stem:
                        continue
                    lhs = ext.multiply_by(tau_cls, h)
                    rhs = _drop_killed(ext, ext.multiply_by(cls, h).tau(1))
                    assert lhs.terms == rhs.terms, (s, stem, x.index, h)
                    checked += 1
    assert checked > 20


def test_multiply_outside_chart_raises(motivic_chart):
    top = motivic_chart.basis_class(motivic_chart.at(SMALL_RANGE[0], 0)[0].ref)
    with pytest.raises(InsufficientFrontierError):
        motivic_chart.multiply(top, "h0")


def test_classical_chart_forgets_weights(motivic_chart, classical_chart):
    assert all(x.weight == 0 for x in classical_chart.summands)
    assert all(x.order is None for x in classical_chart.summands)
    max_s, max_stem = SMALL_RANGE
    for s in range(max_s + 1):
        for stem in range(max_stem + 1):
            assert motivic_chart.free_count(s, stem) == classical_chart.free_count(s, stem), (s, stem)


@pytest.mark.slow
def test_full_chart_matches_fixture():
    fixture = ext_chart_fixture()
    res = make_resolution(*required_frontier(fixture.max_s, fixture.max_stem), motivic=True, workers=4)
    chart = ExtComputer(res, fixture.max_s, fixture.max_stem).chart()
    assert compare_multisets(fixture.expected, chart.multiset()) == []
