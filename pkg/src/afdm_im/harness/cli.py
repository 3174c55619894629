"""Command line entry point: ``afdm-im {simulate,abep,compare,validate}``."""

from __future__ import annotations

import argparse
import logging
import sys

from ..codec import ConfigError
from ..records import emit_csv
from ..simulation import resolve_workers
from .config import load_config
from .experiments import RECIPES, run_experiment, run_recipe, theory_records
from .validation import format_table, run_checks

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_RUNTIME = 3

log = logging.getLogger("afdm_im")


def _write(records, out):
    if out:
        emit_csv(records, out)
        print(f"wrote {len(records)} rows to {out}")
    else:
        for r in records:
            print(f"{r.system:>16} {r.profile:>7} {r.detector:>5} {r.source:>6}  {r.snr_db:6.2f} dB  {r.ber:.3e}  {r.note}")


def cmd_simulate(args) -> int:
    cfg = load_config(args.config)
    if args.seed is not None:
        cfg = cfg.with_seed(args.seed)
    _write(run_experiment(cfg, workers=resolve_workers(args.threads)), args.out)
    return EXIT_OK


def cmd_abep(args) -> int:
    _write(theory_records(load_config(args.config)), args.out)
    return EXIT_OK


def cmd_compare(args) -> int:
    records = run_recipe(
        args.figure,
        seed=args.seed or 0,
        workers=resolve_workers(args.threads),
        max_bits=int(args.max_bits),
        min_errors=args.min_errors,
    )
    _write(records, args.out)
    return EXIT_OK


def cmd_validate(args) -> int:
    results = run_checks(args.seed or 0)
    print(format_table(results))
    return EXIT_OK if all(r.passed for r in results) else EXIT_RUNTIME


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None, help="override the experiment seed")
    common.add_argument("--out", default=None, help="CSV output path")
    common.add_argument("--threads", type=int, default=None, help="worker threads (default: $SIM_THREADS or 1)")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="afdm-im", description="AFDM with index modulation: link simulation and error-rate bounds")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", parents=[common], help="Monte Carlo BER sweep from a config file")
    p.add_argument("--config", required=True)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("abep", parents=[common], help="union-bound BER curve for a config file")
    p.add_argument("--config", required=True)
    p.set_defaults(func=cmd_abep)

    p = sub.add_parser("compare", parents=[common], help="run a named figure recipe")
    p.add_argument("figure", choices=sorted(RECIPES))
    p.add_argument("--max-bits", type=float, default=1e6, help="bit budget per simulated point")
    p.add_argument("--min-errors", type=int, default=100)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("validate", parents=[common], help="run the built-in oracle checks")
    p.set_defaults(func=cmd_validate)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except Exception as exc:  # noqa: BLE001 - any other failure maps to the runtime exit code
        log.debug("runtime failure", exc_info=True)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
