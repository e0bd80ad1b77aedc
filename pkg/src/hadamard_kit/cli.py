"""Command line entry point: ``hadamard-kit run | list-scenarios | validate``."""

from __future__ import annotations

import argparse
import json
import sys

from . import __version__
from .errors import ConfigError

EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2


def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hadamard-kit", description=__doc__)
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run the scenario described by a TOML config")
    run.add_argument("config", help="path to the scenario TOML file")
    run.add_argument("--out", metavar="DIR", help="report directory (overrides output.dir)")
    run.add_argument("--plots", action="store_true", help="also write an SVG residual chart")
    run.add_argument("--seed", type=int, help="random seed (overrides seed)")
    run.add_argument("--set", dest="overrides", action="append", default=[], metavar="KEY=VALUE",
                     help="override a config key, e.g. --set params.points=5 (repeatable)")
    run.add_argument("--quiet", action="store_true", help="print only the summary line")

    sub.add_parser("list-scenarios", help="list registered scenario names")

    val = sub.add_parser("validate", help="check a config file and print the resolved settings")
    val.add_argument("config")
    val.add_argument("--set", dest="overrides", action="append", default=[], metavar="KEY=VALUE")
    return parser


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    from .harness import SCENARIOS, load_config, run_scenario

    if args.command == "list-scenarios":
        width = max(map(len, SCENARIOS))
        for name, sc in SCENARIOS.items():
            print(f"{name:<{width}}  {sc.summary}")
        return EXIT_OK

    try:
        if args.command == "validate":
            cfg = load_config(args.config, args.overrides)
            print(json.dumps(cfg.model_dump(mode="json"), indent=2))
            return EXIT_OK
        cfg = load_config(args.config, args.overrides, seed=args.seed, out=args.out, plots=args.plots or None)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    report = run_scenario(cfg)
    summary = report.summary()
    if not args.quiet:
        for r in report.rows:
            if r.judged and not r.passed:
                print(f"FAIL case {r.case_id}: {r.params} computed={r.computed!r} residual={r.abs_residual!r} "
                      f"tolerance={r.tolerance!r} {r.flag}")
    print(f"{cfg.scenario}: {summary['passed']}/{summary['judged']} judged rows pass, "
          f"{summary['diagnostic']} diagnostic, max residual {summary['max_residual']:.3e}, "
          f"reports in {cfg.output.dir}")
    return EXIT_OK if report.passed else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
