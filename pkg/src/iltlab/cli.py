"""``iltlab`` command line entry point.

    iltlab <experiment> [--config FILE] [--seed N] [--replicates N] [--steps N]
                        [--workers N] [--out DIR] [--format table|flat] ...
    iltlab report RECORD.json [--format table|flat]

Exit codes: 0 success, 2 configuration error, 3 experiment failure, 4 I/O error.
"""

from __future__ import annotations

import argparse
import json
import sys

from .config import DEFAULT_GRIDS, EXPERIMENTS, MODES, ExperimentConfig, parse_config
from .errors import IltLabError, InvalidConfiguration
from .parallel import ENV_WORKERS
from .runner import load_record, report, run, save_record

EXIT_OK, EXIT_CONFIG, EXIT_FAILED, EXIT_IO = 0, 2, 3, 4

_DEFAULTS = ExperimentConfig("validate")

EPILOG = f"""\
defaults:
  seed {_DEFAULTS.master_seed}, replicates {_DEFAULTS.replicates}, steps {_DEFAULTS.n_steps}, horizon {_DEFAULTS.horizon},
  estimator binned with bandwidth 4*sqrt(dt), workers {_DEFAULTS.workers} ({ENV_WORKERS} overrides), out {_DEFAULTS.out_dir}/
  small-dev / fit grid: 12 log-spaced points per decade on [0.02, 0.3]
  no-intersect grid {DEFAULT_GRIDS['no-intersect']()}, hitting-tail grid {DEFAULT_GRIDS['hitting-tail']()}
  tau-tail grid 4..8 step 0.5; calibrate-a grid 4 points per decade on [1e-4, 0.1]
  modes: {'; '.join(f'{k}: {"/".join(v)}' for k, v in MODES.items())} (first is default)

config files are JSON objects with the same keys as the result-file "config" block;
flags override the file.  Unknown keys are rejected.
"""


def _floats(text: str) -> list:
    try:
        return [json.loads(v) for v in text.split(",") if v.strip()]
    except json.JSONDecodeError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from exc


def _kv(text: str):
    if "=" not in text:
        raise argparse.ArgumentTypeError(f"expected key=value, got {text!r}")
    k, v = text.split("=", 1)
    try:
        return k, json.loads(v)
    except json.JSONDecodeError:
        return k, v


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="iltlab",
        description="Intersection local time experiments.",
        epilog=EPILOG,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    p.add_argument("experiment", choices=EXPERIMENTS + ("report",))
    p.add_argument("record", nargs="?", help="result JSON to render (report only)")
    p.add_argument("--config", help="JSON config file")
    p.add_argument("--seed", type=int, dest="master_seed")
    p.add_argument("--replicates", type=int)
    p.add_argument("--steps", type=int, dest="n_steps")
    p.add_argument("--horizon", type=float)
    p.add_argument("--workers", type=int)
    p.add_argument("--out", dest="out_dir")
    p.add_argument("--format", choices=("table", "flat"), default="table")
    p.add_argument("--no-save", action="store_true", help="print only; do not write result files")
    p.add_argument("--estimator", choices=("binned", "mollified"))
    p.add_argument("--kernel", choices=("epanechnikov", "tophat"))
    p.add_argument("--bandwidth", type=float)
    p.add_argument("--functional", choices=("mutual", "self"))
    p.add_argument("--dim", type=int, choices=(1, 2))
    p.add_argument("--grid", type=_floats, help="comma-separated x grid")
    p.add_argument("--window", type=_floats, help="fit window lo,hi")
    p.add_argument("--p-list", type=_floats, dest="p_list")
    p.add_argument("--mode")
    p.add_argument("--t", type=float)
    p.add_argument("--exponent", type=float)
    p.add_argument("--z", type=int)
    p.add_argument("--dt", type=float)
    p.add_argument("--target", type=float)
    p.add_argument("--source", help="result JSON whose curve `fit` should use")
    p.add_argument("--start-law", choices=("point", "mu"), dest="start_kind")
    p.add_argument("--query", help="oracle name")
    p.add_argument("--arg", type=_kv, action="append", default=[], help="oracle argument key=value")
    return p


OVERRIDES = (
    "master_seed", "replicates", "n_steps", "horizon", "workers", "out_dir", "estimator", "kernel",
    "bandwidth", "functional", "dim", "grid", "window", "p_list", "mode", "t", "exponent", "z", "dt",
    "target", "source",
)


def config_from_args(ns: argparse.Namespace) -> ExperimentConfig:
    over = {k: getattr(ns, k) for k in OVERRIDES}
    over["experiment"] = ns.experiment
    if ns.start_kind == "mu":
        over["start_law"] = {"kind": "mu"}
    elif ns.start_kind == "point":
        over["start_law"] = {"kind": "point", "x": 0.0, "x_tilde": 0.0}
    if ns.query:
        over["query"] = {"name": ns.query, "args": dict(ns.arg)}
    return parse_config(ns.config, over)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK

    if ns.experiment == "report":
        if not ns.record:
            print("iltlab: report needs a result JSON path", file=sys.stderr)
            return EXIT_CONFIG
        try:
            rec = load_record(ns.record)
        except (OSError, json.JSONDecodeError) as exc:
            print(f"iltlab: cannot read {ns.record}: {exc}", file=sys.stderr)
            return EXIT_IO
        sys.stdout.write(report(rec, ns.format))
        return EXIT_OK

    try:
        cfg = config_from_args(ns)
    except InvalidConfiguration as exc:
        print(f"iltlab: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"iltlab: cannot read config: {exc}", file=sys.stderr)
        return EXIT_IO

    try:
        rec = run(cfg)
    except InvalidConfiguration as exc:
        print(f"iltlab: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"iltlab: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except IltLabError as exc:
        print(f"iltlab: {cfg.experiment} failed: {exc}", file=sys.stderr)
        return EXIT_FAILED
    except ValueError as exc:
        # library argument errors that only show up once the run starts
        print(f"iltlab: {cfg.experiment} failed: {exc}", file=sys.stderr)
        return EXIT_FAILED

    if not ns.no_save:
        try:
            paths = save_record(rec, cfg.out_dir)
        except OSError as exc:
            print(f"iltlab: I/O error: {exc}", file=sys.stderr)
            return EXIT_IO
        print(f"wrote {paths[0]} and {paths[1]}", file=sys.stderr)
    sys.stdout.write(report(rec, ns.format))
    if not rec.ok:
        print(f"iltlab: {rec.message}", file=sys.stderr)
        return EXIT_FAILED
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
