"""Command-line entry point: ``idclusters verify-suite`` and ``idclusters scenario``.

Exit status is 0 when every check passes, 1 when any check fails, and 2 for
unusable input (unreadable or invalid scenario, missing state, bad flags).
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .errors import IdClustersError
from .scenarios import COMMANDS, bundled_scenarios, run_scenario
from .suite import SECTIONS, SweepConfig, run_verification_suite
from .tensor_space import DEFAULT_TOL, MAX_DIM_ENV


def _int_list(text: str) -> tuple[int, ...]:
    try:
        values = tuple(int(x) for x in text.split(",") if x.strip())
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from exc
    if not values or min(values) < 1:
        raise argparse.ArgumentTypeError("values must be positive integers")
    return values


def _choice_list(choices):
    def parse(text: str) -> tuple[str, ...]:
        values = tuple(x.strip() for x in text.split(",") if x.strip())
        bad = [v for v in values if v not in choices]
        if bad or not values:
            raise argparse.ArgumentTypeError(f"choose from {', '.join(choices)}")
        return values
    return parse


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=None,
                        help=f"relative Frobenius tolerance (default {DEFAULT_TOL:g})")
    common.add_argument("--seed", type=int, default=0, help="64-bit seed for all random draws")
    common.add_argument("--max-dim", type=_positive_int, default=None,
                        help=f"largest allowed d**N (default from ${MAX_DIM_ENV} or 4096)")
    common.add_argument("--format", choices=("json", "text"), default="json")
    common.add_argument("--include-timing", action="store_true",
                        help="add per-check elapsed time (breaks byte-identical output)")
    common.add_argument("--output", "-o", type=Path, default=None,
                        help="write the report here instead of stdout")

    parser = argparse.ArgumentParser(
        prog="idclusters",
        description="Identical-particle cluster transport: verification sweeps and scenarios.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    suite = sub.add_parser("verify-suite", parents=[common],
                           help="check every identity over a sweep of configurations")
    suite.add_argument("--d", dest="d_values", type=_int_list, default=(2, 3, 4),
                       help="single-particle dimensions, comma separated (default 2,3,4)")
    suite.add_argument("--N", dest="N_values", type=_int_list, default=(2, 3, 4),
                       help="particle numbers, comma separated (default 2,3,4)")
    suite.add_argument("--statistics", type=_choice_list(("boson", "fermion")),
                       default=("boson", "fermion"))
    suite.add_argument("--sections", type=_choice_list(SECTIONS), default=SECTIONS,
                       help=f"subset of {','.join(SECTIONS)}")
    suite.add_argument("--samples", type=_positive_int, default=20,
                       help="random instances per sampled identity (default 20)")
    suite.add_argument("--workers", type=_positive_int, default=1)

    scen = sub.add_parser("scenario", parents=[common], help="run a command on a scenario file",
                          epilog=f"bundled scenarios: {', '.join(bundled_scenarios())}")
    scen.add_argument("path", help="scenario JSON file or bundled scenario name")
    scen.add_argument("scenario_command", metavar="command", choices=COMMANDS,
                      help=" | ".join(COMMANDS))
    scen.add_argument("--observable", default=None, help="observable name for 'measure'")
    scen.add_argument("--outcome", type=int, default=None,
                      help="eigenvalue index for a selective measurement (ascending order)")
    scen.add_argument("--t", type=float, default=1.0, help="evolution time for 'evolve'")
    return parser


def _emit(report, args) -> None:
    text = report.to_json(args.include_timing) if args.format == "json" else report.to_text(args.include_timing)
    if args.output is None:
        sys.stdout.write(text)
    else:
        args.output.write_text(text)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "verify-suite":
            config = SweepConfig(
                d_values=args.d_values,
                N_values=args.N_values,
                statistics=args.statistics,
                seed=args.seed,
                tol=DEFAULT_TOL if args.tol is None else args.tol,
                max_dim=args.max_dim,
                samples=args.samples,
                sections=args.sections,
                workers=args.workers,
            )
            report = run_verification_suite(config)
        else:
            report = run_scenario(args.path, args.scenario_command, observable=args.observable,
                                  outcome=args.outcome, t=args.t, seed=args.seed, tol=args.tol,
                                  max_dim=args.max_dim)
    except IdClustersError as exc:
        print(f"idclusters: error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    _emit(report, args)
    return report.exit_status


if __name__ == "__main__":
    sys.exit(main())
