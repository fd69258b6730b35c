"""Command-line entry point.

Exit codes: 0 success, 1 verification mismatch, 2 config error,
3 simulation diverged, 4 singular allocation.
"""

import argparse
import dataclasses
import sys
from pathlib import Path

from .allocation import SingularAllocation
from .harness.config import ConfigError, load_config
from .harness.reports import (compare_controllers, format_inertia_report, format_metrics,
                              sweep_singularity, validate_inertia, write_sweep)
from .harness.simulate import SimulationError, run_scenario, write_csv

EXIT_OK, EXIT_MISMATCH, EXIT_CONFIG, EXIT_DIVERGED, EXIT_SINGULAR = 0, 1, 2, 3, 4


def _load(args):
    cfg = load_config(args.config)
    if args.dt is not None:
        if args.dt <= 0:
            raise ConfigError("--dt must be positive")
        cfg = dataclasses.replace(cfg, integration=dataclasses.replace(cfg.integration, dt=args.dt))
    return cfg


def _out_dir(args, cfg=None):
    return Path(args.out if args.out else (cfg.out_dir if cfg else "out"))


def _sim_exit(exc):
    print(f"error: {exc}", file=sys.stderr)
    return EXIT_SINGULAR if isinstance(exc.cause, SingularAllocation) else EXIT_DIVERGED


def cmd_simulate(args):
    cfg = _load(args)
    out = _out_dir(args, cfg)
    try:
        result = run_scenario(cfg)
    except SimulationError as exc:
        if len(exc.log):
            write_csv(out / f"{cfg.name}.csv", exc.log)
        return _sim_exit(exc)
    path = write_csv(out / f"{cfg.name}.csv", result.log)
    for k, v in result.summary.items():
        print(f"{k}: {v}")
    print(f"log: {path}")
    return EXIT_OK


def cmd_validate_inertia(args):
    report = validate_inertia()
    print(format_inertia_report(report))
    ok = all(r["ok"] for r in report["rows"]) and report["oracle_max_rel"] <= 1e-9
    return EXIT_OK if ok else EXIT_MISMATCH


def cmd_compare(args):
    cfg = _load(args)
    runs, metrics = compare_controllers(cfg, _out_dir(args, cfg))
    print(format_metrics(metrics))
    return EXIT_OK


def cmd_sweep(args):
    cfg = _load(args)
    sw = cfg.sweep
    try:
        cells = sweep_singularity(cfg.morph, sw.beta1_range, sw.beta2_range, sw.n1, sw.n2,
                                  cfg.integration.det_eps)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    path = write_sweep(_out_dir(args, cfg) / f"{cfg.name}_singularity.csv", cells)
    n_sing = sum(c[4] for c in cells)
    print(f"{len(cells)} cells, {n_sing} below threshold; written to {path}")
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(prog="foldquad", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, config=True):
        if config:
            p.add_argument("config", help="scenario YAML file")
        p.add_argument("--out", help="output directory")
        p.add_argument("--dt", type=float, help="physics step override, s")
        p.add_argument("--seed", type=int, default=0,
                       help="reserved; the pipeline is deterministic")
        p.add_argument("--format", choices=["csv"], default="csv")

    common(sub.add_parser("simulate", help="run one scenario"))
    common(sub.add_parser("validate-inertia", help="check the inertia model"), config=False)
    common(sub.add_parser("compare-controllers", help="adaptive vs baseline on one scenario"))
    common(sub.add_parser("sweep-singularity", help="det(CAM) over hinge angles"))
    return parser


COMMANDS = {
    "simulate": cmd_simulate,
    "validate-inertia": cmd_validate_inertia,
    "compare-controllers": cmd_compare,
    "sweep-singularity": cmd_sweep,
}


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
