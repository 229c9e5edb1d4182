"""
Command line interface.

Subcommands::

    metastability bound scenarios.json
    metastability verify scenarios.json -o report.json --jobs 4
    metastability gen --seed 1 --count 50 --theorem lipschitz -o corpus.json
    metastability plot-data report.json -o plot.csv

Exit status is 0 on success, 1 when some scenario failed verification and 2
on invalid input.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from typing import Any, Dict, List, Optional, TextIO

from metastability import protocol
from metastability.corpus import PROFILES, generate_corpus
from metastability.numerics import CapExceededError, Caps
from metastability.protocol import ScenarioError, Theorem
from metastability.runner import ScenarioRunner, compute_bound

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_INPUT = 2


def _write(text: str, path: Optional[str], default: TextIO) -> None:
    if path is None or path == "-":
        default.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as f:
            f.write(text)


def _positive(value: str) -> int:
    result = int(value)
    if result <= 0:
        raise argparse.ArgumentTypeError("must be positive, got %d" % result)
    return result


def _add_caps(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--cap-bits", type=_positive, help="maximum bit length of any natural"
    )
    parser.add_argument(
        "--horizon", type=_positive, help="maximum length of a generated run"
    )
    parser.add_argument(
        "--search", type=_positive, help="maximum N examined by the oracle"
    )


def _overrides(args: argparse.Namespace) -> Dict[str, Optional[int]]:
    return dict(nat_bits=args.cap_bits, horizon=args.horizon, search=args.search)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="metastability",
        description="Rates of metastability for fixed point iterations on [0, 1].",
    )
    parser.add_argument(
        "-v",
        "--verbose",
        action="count",
        default=0,
        help="more logging (-v info, -vv debug)",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    bound = sub.add_parser("bound", help="compute bounds and print their traces")
    bound.add_argument("input", help="scenario file")
    bound.add_argument("--id", action="append", help="only these scenario ids")
    bound.add_argument("-o", "--output", help="write traces as JSON")
    _add_caps(bound)

    verify = sub.add_parser("verify", help="run the oracle on every scenario")
    verify.add_argument("input", help="scenario file")
    verify.add_argument("-o", "--output", help="report file, default stdout")
    verify.add_argument("--jobs", type=_positive, default=1, help="worker threads")
    verify.add_argument(
        "--timings", action="store_true", help="record wall times in the report"
    )
    _add_caps(verify)

    gen = sub.add_parser("gen", help="generate a seeded scenario corpus")
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--count", type=int, default=50)
    gen.add_argument("--theorem", choices=[t.value for t in Theorem])
    gen.add_argument("--profile", choices=PROFILES, default="standard")
    gen.add_argument("-o", "--output", help="scenario file, default stdout")

    plot = sub.add_parser("plot-data", help="convert a report to CSV")
    plot.add_argument("input", help="report file")
    plot.add_argument("-o", "--output", help="CSV file, default stdout")
    return parser


def run_bound(args: argparse.Namespace) -> int:
    scenarios = protocol.load(args.input)
    if args.id:
        scenarios = [s for s in scenarios if s.id in args.id]
    runner = ScenarioRunner(**_overrides(args))
    results: List[Dict[str, Any]] = []
    for scenario in scenarios:
        try:
            result = compute_bound(scenario, runner.caps_for(scenario))
        except CapExceededError as e:
            logger.warning("%s: %s" % (scenario.id, e))
            sys.stdout.write("%s: bound too large to compute (%s)\n" % (scenario.id, e))
            continue
        results.append(result)
        sys.stdout.write(runner.render("bound.txt.j2", result))
    if args.output:
        text = json.dumps(results, indent=2, sort_keys=True) + "\n"
        _write(text, args.output, sys.stdout)
    return EXIT_OK


def run_verify(args: argparse.Namespace) -> int:
    scenarios = protocol.load(args.input)
    runner = ScenarioRunner(jobs=args.jobs, timings=args.timings, **_overrides(args))
    report = runner.run(scenarios)
    _write(report.dumps(), args.output, sys.stdout)
    sys.stderr.write(runner.render("summary.txt.j2", dict(report=report.to_json())))
    return EXIT_FAILED if report.failed else EXIT_OK


def run_gen(args: argparse.Namespace) -> int:
    if args.count < 0:
        raise ValueError("count must be non-negative")
    theorem = Theorem(args.theorem) if args.theorem else None
    scenarios = generate_corpus(args.seed, args.count, theorem, args.profile)
    _write(protocol.dumps(scenarios), args.output, sys.stdout)
    return EXIT_OK


def run_plot_data(args: argparse.Namespace) -> int:
    with open(args.input, "r", encoding="utf-8") as f:
        try:
            report = json.load(f)
        except json.JSONDecodeError as e:
            raise ScenarioError(e.msg, line=e.lineno, column=e.colno)
    _write(protocol.emit_plot_data(report), args.output, sys.stdout)
    return EXIT_OK


COMMANDS = {
    "bound": run_bound,
    "verify": run_verify,
    "gen": run_gen,
    "plot-data": run_plot_data,
}


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    level = [logging.WARNING, logging.INFO, logging.DEBUG][min(args.verbose, 2)]
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")
    try:
        # Malformed cap variables are an input error for every subcommand.
        Caps.from_env()
        return COMMANDS[args.command](args)
    except (ScenarioError, ValueError, OSError, KeyError) as e:
        logger.error("%s" % e)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
