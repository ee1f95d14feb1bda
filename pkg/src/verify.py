"""
검증 스위트
- milnor / adem / ext / may / ledger, "all" 은 전부
- 각 검사는 "이름: PASS|FAIL|SKIP" 한 줄 (FAIL 은 사유 포함)
- 분해·차트는 VerifyContext 에 캐시해 스위트 사이에 공유
"""
import logging
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Dict, List, Optional, Tuple

from .adem import AdmissibleElt, SqWord, adem_reduce, admissible_basis, admissible_to_milnor, milnor_to_admissible, parse_admissible
from .chart import Chart, weight_zero_slice
from .config import ADAMS_LEDGER_FILE, MAY_LEDGER_FILE
from .errors import InsufficientFrontierError, LedgerError, MotivicError
from .ext import ExtComputer, classical_mode_chart, required_frontier
from .fixtures import compare_multisets, ext_chart_fixture, may_e4_fixture, read_labels
from .grading import Tau
from .may import (
    MAY_GENERATORS, MAY_RELATIONS, MayE2, check_d_squared, e4_chart, load_may_ledger_file, may_einf_chart,
    required_max_m,
)
from .milnor import (
    SteenrodElt, all_products, check_associativity, dual_pairing_product, enumerate_basis, first_tau_power_degree, milnor,
    milnor_product,
)
from .names import ClassResolver
from .resolution import Resolution, make_resolution, verify_resolution
from .ss_ledger import PagedChart, einf_survivors, load_ledger, read_ledger_file

logger = logging.getLogger(__name__)

SUITES = ("milnor", "adem", "ext", "may", "ledger")

PASS, FAIL, SKIP = "PASS", "FAIL", "SKIP"

ASSOCIATIVITY_MAX_DEGREE = 14

# (좌변, 우변, 필요한 (max_s, max_stem))
EXT_RELATIONS: List[Tuple[str, str, Tuple[int, int]]] = [
    ("h0^2 h2", "tau h1^3", (3, 3)),
    ("h0^2 Ph2", "tau h1^2 Ph1", (7, 11)),
    ("h0 f0", "tau h1 e0", (5, 18)),
    ("tau [h2 g]", "h2 [tau g]", (5, 23)),
]

STRETCH_RELATIONS: List[Tuple[str, str, Tuple[int, int]]] = [
    ("h0^2 j", "tau h1 Pe0", (9, 26)),
    ("h0^2 k", "tau h1 d0^2", (9, 29)),
    ("h0^5 r", "tau c0 Pd0", (11, 30)),
]


@dataclass
class CheckResult:
    name: str
    status: str
    detail: str = ""

    @property
    def failed(self) -> bool:
        return self.status == FAIL

    def line(self) -> str:
        if self.detail and self.status != PASS:
            return f"{self.name}: {self.status} ({self.detail})"
        return f"{self.name}: {self.status}"


def check(name: str, ok: bool, detail: str = "") -> CheckResult:
    return CheckResult(name, PASS if ok else FAIL, "" if ok else detail)


@dataclass
class VerifyOptions:
    """
    full: 회귀 fixture 범위 (stem ≤ 24 Ext, stem ≤ 20 May)
    stretch: stem 26–40 추가 검사 (매우 느림)
    """
    full: bool = False
    stretch: bool = False
    workers: int = 1
    oracle_max_degree: int = 16
    checkpoint: Optional[Path] = None

    @property
    def ext_range(self) -> Tuple[int, int]:
        """(max_s, max_stem)"""
        return (14, 24) if self.full else (8, 12)

    @property
    def may_stem(self) -> int:
        return 20 if self.full else 12


@dataclass
class VerifyContext:
    options: VerifyOptions
    _resolutions: Dict[Tuple[int, int], Resolution] = field(default_factory=dict)
    _charts: Dict[Tuple[str, int, int], Chart] = field(default_factory=dict)

    def resolution(self, max_s: int, max_stem: int) -> Resolution:
        key = required_frontier(max_s, max_stem)
        for (s_top, t_top), res in self._resolutions.items():
            if s_top >= key[0] and t_top >= key[1]:
                return res
        res = make_resolution(*key, motivic=True, workers=self.options.workers)
        self._resolutions[key] = res
        return res

    def ext_chart(self, max_s: int, max_stem: int) -> Chart:
        key = ("motivic", max_s, max_stem)
        if key not in self._charts:
            res = self.resolution(max_s, max_stem)
            self._charts[key] = ExtComputer(res, max_s, max_stem).chart(labels=read_labels())
        return self._charts[key]

    def classical_chart(self, max_s: int, max_stem: int) -> Chart:
        key = ("classical", max_s, max_stem)
        if key not in self._charts:
            self._charts[key] = classical_mode_chart(max_s, max_stem, workers=self.options.workers)
        return self._charts[key]


def _resolve_equal(resolver: ClassResolver, lhs: str, rhs: str) -> Tuple[bool, str]:
    left = resolver.resolve(lhs)
    right = resolver.resolve(rhs)
    if left.is_zero:
        return False, f"{lhs} 가 0"
    return left == right, f"{lhs} = {left.terms}, {rhs} = {right.terms}"


def _relation_checks(chart: Chart, relations) -> List[CheckResult]:
    resolver = ClassResolver(chart)
    out = []
    for lhs, rhs, (s_need, stem_need) in relations:
        name = f"{lhs} = {rhs}"
        if not chart.in_range(s_need, stem_need):
            out.append(CheckResult(name, SKIP, "차트 범위 밖"))
            continue
        try:
            ok, detail = _resolve_equal(resolver, lhs, rhs)
        except (KeyError, InsufficientFrontierError) as e:
            ok, detail = False, str(e)
        out.append(check(name, ok, detail))
    return out


# ---------------------------------------------------------------- milnor

def milnor_suite(ctx: VerifyContext) -> List[CheckResult]:
    opts = ctx.options
    out: List[CheckResult] = []

    bound = min(12 if opts.full else 8, opts.oracle_max_degree)
    bad = []
    for R, S, _ in all_products(bound):
        if milnor_product(R, S) != dual_pairing_product(R, S, max_degree=opts.oracle_max_degree):
            bad.append(f"P{R}·P{S}")
    out.append(check(f"Milnor product agrees with dual-pairing oracle through degree {bound}", not bad,
                     ", ".join(bad[:5])))

    checked, bad = check_associativity(ASSOCIATIVITY_MAX_DEGREE)
    out.append(check(f"Milnor product is associative on {checked} basis triples through degree {ASSOCIATIVITY_MAX_DEGREE}",
                     not bad, ", ".join(bad[:5])))

    unit = milnor_product((), milnor(3)) == milnor_product(milnor(3), ()) == SteenrodElt.basis(milnor(3))
    out.append(check("P() is a two-sided unit", unit))

    degree = first_tau_power_degree(2, 30)
    out.append(check("tau^2 first appears at topological dimension 26", degree == 26, f"계산값 {degree}"))
    return out


# ---------------------------------------------------------------- adem

def adem_suite(ctx: VerifyContext) -> List[CheckResult]:
    opts = ctx.options
    out: List[CheckResult] = []
    top = 20 if opts.full else 12

    sizes = [p for p in range(1, top + 1) if len(admissible_basis(p)) != len(enumerate_basis(p))]
    out.append(check(f"admissible and Milnor bases have equal size through degree {top}", not sizes,
                     f"불일치 차수 {sizes}"))

    lhs = adem_reduce(SqWord((2, 2)))
    out.append(check("Sq2 Sq2 = tau Sq3 Sq1", lhs == parse_admissible("tau Sq3 Sq1"), f"계산값 {lhs}"))

    bad = []
    for total in range(2, top + 1):
        for p in range(1, total):
            for w1 in admissible_basis(p):
                a = AdmissibleElt({w1: Tau(0)})
                for w2 in admissible_basis(total - p):
                    b = AdmissibleElt({w2: Tau(0)})
                    if admissible_to_milnor(a * b) != admissible_to_milnor(a) * admissible_to_milnor(b):
                        bad.append(f"{a}·{b}")
    out.append(check(f"Adem and Milnor products agree through degree {top}", not bad, ", ".join(bad[:5])))

    bad = []
    for p in range(1, top + 1):
        for w in admissible_basis(p):
            x = AdmissibleElt({w: Tau(0)})
            if milnor_to_admissible(admissible_to_milnor(x)) != x:
                bad.append(str(x))
    out.append(check(f"basis change is invertible through degree {top}", not bad, ", ".join(bad[:5])))
    return out


# ---------------------------------------------------------------- ext

def _checkpoint_checks(path: Path) -> List[CheckResult]:
    from .checkpoint import load_checkpoint

    name = f"checkpoint {path} d∘d = 0, minimal, homogeneous"
    try:
        res = load_checkpoint(path)
    except (MotivicError, ValueError, FileNotFoundError) as e:
        return [check(name, False, str(e))]
    report = verify_resolution(res)
    return [check(name, report.ok, "; ".join(report.failures[:5]))]


def ext_suite(ctx: VerifyContext) -> List[CheckResult]:
    opts = ctx.options
    max_s, max_stem = opts.ext_range
    out: List[CheckResult] = []

    res = ctx.resolution(max_s, max_stem)
    report = verify_resolution(res)
    out.append(check("resolution d∘d = 0, minimal, homogeneous", report.ok, "; ".join(report.failures[:5])))

    chart = ctx.ext_chart(max_s, max_stem)
    out.extend(_relation_checks(chart, EXT_RELATIONS))

    resolver = ClassResolver(chart)
    h1_4 = resolver.resolve("h1^4")
    out.append(check("tau h1^4 = 0 and h1^4 != 0",
                     not h1_4.is_zero and resolver.resolve("tau h1^4").is_zero, f"h1^4 = {h1_4.terms}"))

    classical = ctx.classical_chart(max_s, max_stem)
    bad = []
    for s in range(max_s + 1):
        for stem in range(max_stem + 1):
            if chart.free_count(s, stem) != len(classical.at(s, stem)):
                bad.append((s, stem))
    out.append(check("free summand counts equal classical dimensions", not bad, f"위치 {bad[:5]}"))

    orders = sorted({x.order for x in chart.summands if x.order is not None})
    out.append(check(f"all torsion summands through stem {max_stem} have order 1", orders in ([], [1]),
                     f"차수 {orders}"))

    if opts.full:
        fixture = ext_chart_fixture()
        diffs = compare_multisets(fixture.expected, chart.multiset(fixture.max_stem, fixture.max_s))
        out.append(check(f"Ext chart matches regression fixture through stem {fixture.max_stem}", not diffs,
                         "; ".join(diffs[:5])))
        for s, stem, weight, name in read_labels():
            if chart.in_range(s, stem):
                x = chart.find(name)
                out.append(check(f"label {name} has weight {weight}",
                                 x is not None and (x.s, x.stem, x.weight) == (s, stem, weight),
                                 "라벨 없음" if x is None else f"(s={x.s}, stem={x.stem}, w={x.weight})"))

    if opts.stretch:
        out.extend(_stretch_checks(ctx))

    if opts.checkpoint:
        out.extend(_checkpoint_checks(opts.checkpoint))
    return out


def _stretch_checks(ctx: VerifyContext) -> List[CheckResult]:
    out = []
    chart = ctx.ext_chart(13, 34)
    out.extend(_relation_checks(chart, STRETCH_RELATIONS))
    orders = sorted({x.order for x in chart.summands if x.order is not None})
    out.append(check("all torsion summands through stem 34 have order 1", orders == [1], f"차수 {orders}"))

    res = ctx.resolution(14, 40)
    wide = ExtComputer(res, 14, 40)
    found = any(x.order == 2 for s in range(15) for x in wide.summands(s, 40))
    out.append(check("a tau^2-torsion summand appears in stem 40", found))
    return out


# ---------------------------------------------------------------- may

def may_suite(ctx: VerifyContext) -> List[CheckResult]:
    opts = ctx.options
    max_stem = opts.may_stem
    max_f = max_stem // 2 + 4
    out: List[CheckResult] = []

    e2 = MayE2(max_stem, max_f, required_max_m(max_stem, max_f), workers=opts.workers)
    for name, _, degree in MAY_GENERATORS:
        if degree[1] > max_stem or degree[2] > max_f:
            continue
        try:
            d, bits = e2.class_of(name)
            ok = bits != 0 and (d.m, d.s, d.f, d.w) == degree
            detail = f"{d}"
        except MotivicError as e:
            ok, detail = False, str(e)
        out.append(check(f"E2 contains {name} at {degree}", ok, detail))

    for lhs, rhs in MAY_RELATIONS:
        name = f"{lhs} = {rhs}"
        try:
            out.append(check(name, e2.relation_holds(lhs, rhs)))
        except MotivicError as e:
            out.append(CheckResult(name, SKIP, str(e)))

    failures = check_d_squared(max_stem, max_f)
    out.append(check("DGA differential squares to zero", not failures, "; ".join(failures[:5])))

    try:
        ledger = load_may_ledger_file(MAY_LEDGER_FILE)
        out.append(check("May ledger passes degree check", True))
    except LedgerError as e:
        out.append(check("May ledger passes degree check", False, "; ".join(map(str, e.rejections[:5]))))
        return out

    if opts.full:
        fixture = may_e4_fixture()
        e4 = e4_chart(fixture.max_stem, ledger, workers=opts.workers)
        diffs = compare_multisets(fixture.expected, e4.multiset(fixture.max_stem, fixture.max_s))
        out.append(check(f"May E4 matches regression fixture through stem {fixture.max_stem}", not diffs,
                         "; ".join(diffs[:5])))

        einf = may_einf_chart(fixture.max_stem, ledger, workers=opts.workers)
        ext = ext_chart_fixture()
        top_s = min(einf.max_s, ext.max_s)
        expected = {k: n for k, n in ext.expected.items() if k[1] <= fixture.max_stem and k[0] <= top_s}
        diffs = compare_multisets(expected, einf.multiset(fixture.max_stem, top_s))
        out.append(check(f"May E-infinity agrees with Ext chart through stem {fixture.max_stem}", not diffs,
                         "; ".join(diffs[:5])))
    return out


# ---------------------------------------------------------------- ledger

def ledger_suite(ctx: VerifyContext) -> List[CheckResult]:
    max_s, max_stem = ctx.options.ext_range
    chart = ctx.ext_chart(max_s, max_stem)
    out: List[CheckResult] = []

    try:
        ledger = load_ledger(read_ledger_file(ADAMS_LEDGER_FILE), chart)
    except LedgerError as e:
        out.append(check("Adams ledger passes degree check", False, "; ".join(map(str, e.rejections[:5]))))
        return out
    out.append(check("Adams ledger passes degree check", True))
    logger.info(f"Adams ledger: 적용 {len(ledger.entries)}개, 범위 밖 {len(ledger.skipped)}개")

    try:
        einf = einf_survivors(PagedChart.from_chart(chart), ledger)
    except LedgerError as e:
        out.append(check("Adams ledger applies cleanly", False, str(e)))
        return out
    out.append(check("Adams ledger applies cleanly", True))

    def present(s: int, stem: int, weight: int) -> bool:
        return any(x.weight == weight for x in einf.at(s, stem))

    def expect(name: str, pos: Tuple[int, int, int], alive: bool) -> CheckResult:
        s, stem, w = pos
        verb = "survives" if alive else "does not survive"
        if not chart.in_range(s, stem):
            return CheckResult(f"{name} {verb}", SKIP, "차트 범위 밖")
        return check(f"{name} {verb}", present(s, stem, w) == alive)

    for n in range(4, max_s + 1):
        if n > max_stem:
            break
        out.append(expect(f"h1^{n}", (n, n, n), True))
    out.append(expect("h1^4 Ph1", (9, 13, 9), True))
    out.append(expect("h1^4 c0", (7, 12, 9), True))
    out.append(expect("h1^2 h4 c0", (6, 25, 15), True))
    out.append(expect("h4", (1, 15, 8), False))
    out.append(expect("e0", (4, 17, 10), False))
    out.append(expect("h1 e0", (5, 18, 11), False))
    out.append(expect("[h3 g]", (5, 27, 16), False))

    classical = ctx.classical_chart(max_s, max_stem)
    expected0 = {p: len(classical.at(*p)) for p in classical.positions()}
    out.append(check("E2 weight-zero slice matches classical chart", weight_zero_slice(chart) == expected0))
    return out


SUITE_FUNCTIONS: Dict[str, Callable[[VerifyContext], List[CheckResult]]] = {
    "milnor": milnor_suite,
    "adem": adem_suite,
    "ext": ext_suite,
    "may": may_suite,
    "ledger": ledger_suite,
}


@dataclass
class VerifyReport:
    results: List[CheckResult]
    timings: Dict[str, float]

    @property
    def ok(self) -> bool:
        return not any(r.failed for r in self.results)

    def lines(self) -> List[str]:
        return [r.line() for r in self.results]


def run_suites(suite: str, options: Optional[VerifyOptions] = None) -> VerifyReport:
    """
    Args:
        suite: SUITES 중 하나 또는 "all"

    Raises:
        ValueError: 알 수 없는 스위트 이름
    """
    options = options or VerifyOptions()
    names = SUITES if suite == "all" else (suite,)
    unknown = [n for n in names if n not in SUITE_FUNCTIONS]
    if unknown:
        raise ValueError(f"알 수 없는 스위트: {', '.join(unknown)}")
    ctx = VerifyContext(options)
    results: List[CheckResult] = []
    timings: Dict[str, float] = {}
    for name in names:
        start = time.time()
        logger.info(f"스위트 시작: {name}")
        results.extend(SUITE_FUNCTIONS[name](ctx))
        timings[name] = time.time() - start
        logger.info(f"스위트 완료: {name} ({timings[name]:.1f}초)")
    if suite not in ("ext", "all") and options.checkpoint:
        results.extend(_checkpoint_checks(options.checkpoint))
    return VerifyReport(results, timings)


__all__ = ["SUITES", "CheckResult", "VerifyOptions", "VerifyReport", "run_suites"]
