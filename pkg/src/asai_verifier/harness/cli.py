"""Command line: ``verify <suite>``, ``report <path>``, ``list-suites``.

Exit codes: 0 when every report passes, 1 when any fails, 2 on a
configuration or I/O error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from ..errors import ConfigInvalid, IoFailure, UnknownSuite
from .reports import emit_report, load_reports
from .suites import SUITES, SuiteSpec, all_passed, list_suites, run_suite

log = logging.getLogger("asai_verifier")

EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2

_SPEC_KEYS = {"suite_name", "field_D", "ranges", "tolerances", "seed", "output", "format", "parallel"}


def load_config(path: str | None) -> dict:
    if path is None:
        return {}
    try:
        data = json.loads(Path(path).read_text())
    except OSError as exc:
        raise ConfigInvalid(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigInvalid(f"config {path} is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigInvalid("config must be a JSON object")
    unknown = set(data) - _SPEC_KEYS
    if unknown:
        raise ConfigInvalid(f"unknown config keys {sorted(unknown)}")
    return data


def build_spec(args: argparse.Namespace) -> SuiteSpec:
    """File values first, then flags; the positional suite loses to --suite."""
    cfg = load_config(args.config)
    name = args.suite_flag or args.suite or cfg.get("suite_name")
    if not name:
        raise ConfigInvalid("no suite given")
    if name not in SUITES:
        raise UnknownSuite(f"unknown suite {name!r}")
    ranges = {k: dict(v) for k, v in cfg.get("ranges", {}).items()}
    tolerances = dict(cfg.get("tolerances", {}))
    if args.max_norm is not None:
        bound = SUITES[name].primary_bound
        if bound is None:
            raise ConfigInvalid(f"suite {name} has no size bound for --max-norm")
        ranges.setdefault(name, {})[bound] = args.max_norm
    if args.tol is not None:
        tolerances[name] = args.tol
    spec = SuiteSpec(
        suite_name=name,
        field_D=args.D if args.D is not None else cfg.get("field_D", 5),
        ranges=ranges,
        tolerances=tolerances,
        seed=args.seed if args.seed is not None else cfg.get("seed", 0),
        output=args.out if args.out is not None else cfg.get("output"),
        format=args.format if args.format is not None else cfg.get("format", "json"),
        parallel=args.parallel if args.parallel is not None else cfg.get("parallel", 1),
    )
    spec.validate()
    return spec


def _summary(reports) -> str:
    failed = sum(not r.passed for r in reports)
    return f"{len(reports)} reports, {failed} failed"


def cmd_verify(args) -> int:
    spec = build_spec(args)
    reports = run_suite(spec)
    text = emit_report(reports, spec.format, spec.output)
    if spec.output is None:
        sys.stdout.write(text)
    log.info("%s D=%s: %s", spec.suite_name, spec.field_D, _summary(reports))
    return EXIT_OK if all_passed(reports) else EXIT_FAIL


def cmd_report(args) -> int:
    reports = load_reports(args.path)
    text = emit_report(reports, args.format, args.out)
    if args.out is None:
        sys.stdout.write(text)
    return EXIT_OK if all_passed(reports) else EXIT_FAIL


def cmd_list(args) -> int:
    width = max(len(n) for n in SUITES)
    for name, summary in list_suites():
        print(f"{name:<{width}}  {summary}")
    return EXIT_OK


def make_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="asai-verifier", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="run one suite and emit its reports")
    v.add_argument("suite", nargs="?")
    v.add_argument("--suite", dest="suite_flag")
    v.add_argument("--config", help="JSON file with SuiteSpec fields; flags override it")
    v.add_argument("--D", type=int)
    v.add_argument("--tol", type=float)
    v.add_argument("--max-norm", type=int, dest="max_norm",
                   help="the suite's primary size bound (norm cap, n cap or sample count)")
    v.add_argument("--seed", type=int)
    v.add_argument("--out")
    v.add_argument("--format", choices=("json", "csv"))
    v.add_argument("--parallel", type=int)
    v.set_defaults(func=cmd_verify)

    r = sub.add_parser("report", help="convert a JSON report file")
    r.add_argument("path")
    r.add_argument("--format", choices=("json", "csv"), default="json")
    r.add_argument("--out")
    r.set_defaults(func=cmd_report)

    ls = sub.add_parser("list-suites", help="print the suite names")
    ls.set_defaults(func=cmd_list)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = make_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors, which matches the config-error code
        return int(exc.code) if exc.code is not None else EXIT_CONFIG
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s", stream=sys.stderr)
    try:
        return args.func(args)
    except (ConfigInvalid, UnknownSuite) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except IoFailure as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except BrokenPipeError:
        # reader closed early (e.g. piped into head); nothing left to report
        sys.stderr.close()
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
