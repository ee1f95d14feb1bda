#!/usr/bin/env python3
"""
모티빅 Ext 계산 통합 CLI
mext compute-ext, compute-may, apply-ledger, render, verify, algebra 명령 제공

종료 코드: 0 성공, 1 검증 실패/무결성 오류, 2 사용법 오류 (잘못된 인자, 입력 파일, ledger)
"""
import argparse
import logging
import sys
from pathlib import Path
from typing import List, Optional

from .adem import admissible_to_milnor, milnor_to_admissible, parse_admissible, parse_milnor
from .config import ADAMS_LEDGER_FILE, MAY_LEDGER_FILE, get_config
from .errors import ChartFormatError, IntegrityError, LedgerError, MotivicError
from .logging_conf import setup_logging
from .pipeline import MAY_PAGES, MODES, run_apply_ledger, run_compute_ext, run_compute_may, run_render
from .verify import SUITES, VerifyOptions, run_suites

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2


def _out_path(args, default_name: str) -> Path:
    if args.out:
        return Path(args.out)
    return Path(get_config().OUT_ROOT) / default_name


def _start_logging(out_dir: Path) -> None:
    cfg = get_config()
    setup_logging(log_file=Path(out_dir) / "run.log", level=cfg.log_level)


def _report_ledger_error(e: LedgerError) -> None:
    print(f"❌ ledger 오류 (거부 {len(e.rejections)}개)")
    print(str(e))


def cmd_compute_ext(args) -> int:
    """분해와 Ext 차트 계산"""
    out = _out_path(args, f"ext_{args.mode}_s{args.max_filtration}_stem{args.max_stem}.json")
    _start_logging(out.parent)
    threads = args.threads or get_config().THREADS
    logger.info(f"compute-ext: stem ≤ {args.max_stem}, s ≤ {args.max_filtration}, {args.mode}, threads={threads}")
    record = run_compute_ext(
        args.max_stem, args.max_filtration, args.mode, out,
        resume=Path(args.resume) if args.resume else None,
        threads=threads,
        checkpoint_interval=get_config().CHECKPOINT_INTERVAL,
    )
    print(f"✅ 차트 저장: {out}")
    print(f"   단계별 시간: {record.summary()}")
    return EXIT_OK


def cmd_compute_may(args) -> int:
    """May 스펙트럴 시퀀스 페이지 계산"""
    out = _out_path(args, f"may_e{args.page}_stem{args.max_stem}.json")
    _start_logging(out.parent)
    threads = args.threads or get_config().THREADS
    ledger = Path(args.ledger) if args.ledger else (MAY_LEDGER_FILE if args.default_ledger else None)
    record = run_compute_may(args.max_stem, args.page, out, ledger=ledger,
                             max_f=args.max_filtration, threads=threads)
    print(f"✅ May E{args.page} 차트 저장: {out}")
    print(f"   단계별 시간: {record.summary()}")
    return EXIT_OK


def cmd_apply_ledger(args) -> int:
    """Adams ledger 적용"""
    out = Path(args.out)
    _start_logging(out.parent)
    ledger = Path(args.ledger) if args.ledger else ADAMS_LEDGER_FILE
    record = run_apply_ledger(Path(args.input), ledger, out, last_page=args.last_page)
    print(f"✅ E∞ 차트 저장: {out}")
    print(f"   단계별 시간: {record.summary()}")
    return EXIT_OK


def cmd_render(args) -> int:
    """차트 렌더링"""
    target = Path(args.svg or args.png)
    _start_logging(target.parent)
    record = run_render(Path(args.input), svg=Path(args.svg) if args.svg else None,
                        png=Path(args.png) if args.png else None)
    for path in record.outputs:
        print(f"✅ 렌더링: {path}")
    return EXIT_OK


def cmd_verify(args) -> int:
    """검증 스위트 실행"""
    cfg = get_config()
    setup_logging(log_file=Path(cfg.OUT_ROOT) / "run.log", level=cfg.log_level)
    options = VerifyOptions(
        full=args.full,
        stretch=args.stretch,
        workers=args.threads or cfg.THREADS,
        oracle_max_degree=cfg.ORACLE_MAX_DEGREE,
        checkpoint=Path(args.checkpoint) if args.checkpoint else None,
    )
    report = run_suites(args.suite, options)
    for line in report.lines():
        print(line)
    if report.ok:
        print("✅ 모든 검사 통과")
        return EXIT_OK
    failed = sum(1 for r in report.results if r.failed)
    print(f"❌ 실패 {failed}개")
    return EXIT_FAILURE


def cmd_algebra(args) -> int:
    """Steenrod 대수 곱 계산 (Milnor / 허용 기저 동시 출력)"""
    if args.expr:
        value = parse_admissible(args.expr)
        milnor_form = admissible_to_milnor(value)
        admissible_form = value
    else:
        milnor_form = parse_milnor(args.milnor)
        admissible_form = milnor_to_admissible(milnor_form)
    print(f"bidegree: {milnor_form.bidegree}")
    print(f"Milnor:     {milnor_form}")
    print(f"admissible: {admissible_form}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mext",
        description="Motivic Steenrod algebra, Ext and spectral sequence charts"
    )
    subparsers = parser.add_subparsers(dest="command", help="Available commands")

    # mext compute-ext
    ext_parser = subparsers.add_parser("compute-ext", help="Compute the Ext chart from a minimal resolution")
    ext_parser.add_argument("--max-stem", type=int, required=True, help="Largest stem")
    ext_parser.add_argument("--max-filtration", type=int, required=True, help="Largest Adams filtration")
    ext_parser.add_argument("--mode", choices=MODES, default="motivic", help="motivic or classical (tau = 1)")
    ext_parser.add_argument("--out", help="Chart JSON path")
    ext_parser.add_argument("--resume", help="Resume from checkpoint")
    ext_parser.add_argument("--threads", type=int, help="Worker threads (overrides MEXT_THREADS)")

    # mext compute-may
    may_parser = subparsers.add_parser("compute-may", help="Compute a May spectral sequence page")
    may_parser.add_argument("--max-stem", type=int, required=True, help="Largest stem")
    may_parser.add_argument("--page", choices=MAY_PAGES, default="2", help="E2, E4 or E-infinity")
    may_parser.add_argument("--ledger", help="May differential ledger (YAML)")
    may_parser.add_argument("--default-ledger", action="store_true", help="Use the bundled May ledger")
    may_parser.add_argument("--max-filtration", type=int, help="Largest Adams filtration")
    may_parser.add_argument("--out", help="Chart JSON path")
    may_parser.add_argument("--threads", type=int, help="Worker threads (overrides MEXT_THREADS)")

    # mext apply-ledger
    ledger_parser = subparsers.add_parser("apply-ledger", help="Apply an Adams differential ledger to an Ext chart")
    ledger_parser.add_argument("--in", dest="input", required=True, help="Ext chart JSON")
    ledger_parser.add_argument("--ledger", help="Adams differential ledger (YAML, default: bundled)")
    ledger_parser.add_argument("--last-page", type=int, help="Last page to apply")
    ledger_parser.add_argument("--out", required=True, help="E-infinity chart JSON path")

    # mext render
    render_parser = subparsers.add_parser("render", help="Render a chart file")
    render_parser.add_argument("--in", dest="input", required=True, help="Chart JSON")
    render_parser.add_argument("--svg", help="SVG output path")
    render_parser.add_argument("--png", help="PNG preview path")

    # mext verify
    verify_parser = subparsers.add_parser("verify", help="Run verification suites")
    verify_parser.add_argument("--suite", choices=SUITES + ("all",), default="all", help="Suite to run")
    verify_parser.add_argument("--checkpoint", help="Also verify a resolution checkpoint")
    verify_parser.add_argument("--full", action="store_true", help="Use regression-fixture ranges")
    verify_parser.add_argument("--stretch", action="store_true", help="Add stem 26-40 checks (very slow)")
    verify_parser.add_argument("--threads", type=int, help="Worker threads (overrides MEXT_THREADS)")

    # mext algebra
    algebra_parser = subparsers.add_parser("algebra", help="Evaluate a Steenrod algebra product")
    group = algebra_parser.add_mutually_exclusive_group(required=True)
    group.add_argument("--expr", help='Admissible expression, e.g. "Sq2 Sq2"')
    group.add_argument("--milnor", help='Milnor expression, e.g. "P(2)*P(2)"')

    return parser


COMMANDS = {
    "compute-ext": cmd_compute_ext,
    "compute-may": cmd_compute_may,
    "apply-ledger": cmd_apply_ledger,
    "render": cmd_render,
    "verify": cmd_verify,
    "algebra": cmd_algebra,
}


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code == 0 else EXIT_USAGE

    if not args.command:
        parser.print_help()
        return EXIT_USAGE

    if args.command == "render" and not (args.svg or args.png):
        print("❌ --svg 또는 --png 중 하나는 필요합니다")
        return EXIT_USAGE
    for flag in ("max_stem", "max_filtration", "threads"):
        value = getattr(args, flag, None)
        if value is not None and value < (0 if flag == "max_stem" else 1):
            print(f"❌ --{flag.replace('_', '-')} 값이 올바르지 않습니다: {value}")
            return EXIT_USAGE

    try:
        return COMMANDS[args.command](args)
    except LedgerError as e:
        _report_ledger_error(e)
        return EXIT_USAGE
    except ChartFormatError as e:
        print(f"❌ 차트 파일 오류: {e}")
        return EXIT_USAGE
    except FileNotFoundError as e:
        print(f"❌ {e}")
        return EXIT_USAGE
    except IntegrityError as e:
        logger.error(f"무결성 오류: {e}")
        print(f"❌ 무결성 오류: {e}")
        return EXIT_FAILURE
    except MotivicError as e:
        print(f"❌ {e}")
        return EXIT_FAILURE
    except ValueError as e:
        print(f"⚠️  {e}")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
