import pytest

from src.verify import CheckResult, VerifyOptions, run_suites


def test_check_result_lines():
    assert CheckResult("a", "PASS").line() == "a: PASS"
    assert CheckResult("b", "FAIL", "detail").line() == "b: FAIL (detail)"
    assert CheckResult("c", "SKIP", "range").failed is False


def test_adem_suite_passes():
    report = run_suites("adem")
    assert report.ok
    assert len(report.results) == 4
    assert "adem" in report.timings


@pytest.mark.slow
def test_milnor_suite_passes():
    report = run_suites("milnor", VerifyOptions(oracle_max_degree=10))
    assert report.ok, report.lines()
    assert any("basis triples through degree 14" in r.name for r in report.results)


def test_unknown_suite():
    with pytest.raises(ValueError):
        run_suites("topology")


@pytest.mark.slow
def test_all_suites_full_range():
    report = run_suites("all", VerifyOptions(full=True))
    assert report.ok, [line for line in report.lines() if "FAIL" in line]
