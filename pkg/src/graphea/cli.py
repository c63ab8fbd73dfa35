"""Command line entry point: ``graphea run | compare-time | aggregate``."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import harness
from .errors import ContractViolation


def _print_stats(stats):
    print(f"{'function':<14} {'mode':<10} {'runs':>4} {'mean_best':>14} {'std_best':>12} {'evals':>8} {'wall_ms':>10}")
    for s in stats:
        std = f"{s.std_best:12.4e}" if s.std_defined else f"{'n/a':>12}"
        print(f"{s.function:<14} {s.mode:<10} {s.runs:>4} {s.mean_best:14.6e} {std} {s.mean_evals:8.0f} "
              f"{s.mean_wall_time_ms:10.1f}")


def _print_timing(rows):
    print(f"{'function':<14} {'mode_a':<10} {'mode_b':<10} {'wall_a_ms':>10} {'wall_b_ms':>10} {'ratio':>7}")
    for r in rows:
        print(f"{r.function:<14} {r.mode_a:<10} {r.mode_b:<10} {r.wall_a:10.1f} {r.wall_b:10.1f} {r.ratio:7.3f}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="graphea", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="run a batch of seeded optimisation runs")
    p.add_argument("--config", type=Path, help="key = value config file; flags override it")
    p.add_argument("--function", help="benchmark name, comma list, or 'all'")
    p.add_argument("--dim", type=int)
    p.add_argument("--budget", type=int)
    p.add_argument("--pop", type=int)
    p.add_argument("--delta", type=int)
    p.add_argument("--cr", type=float)
    p.add_argument("--mu", type=float)
    p.add_argument("--mode", help="adaptive, static:<id>, or a comma list of those")
    p.add_argument("--select", choices=["map", "sample"])
    p.add_argument("--epsilon", type=float)
    p.add_argument("--eta", type=float)
    p.add_argument("--runs", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--out", type=Path)
    p.add_argument("--trace", action="store_true", default=None)
    p.add_argument("--dump-graph", action="store_true", default=None)
    p.add_argument("--parallel", type=int)

    p = sub.add_parser("compare-time", help="mean wall time of adaptive vs static runs")
    p.add_argument("--config", type=Path, required=True)

    p = sub.add_parser("aggregate", help="recompute aggregate.csv from a runs.csv directory")
    p.add_argument("--in", dest="in_dir", type=Path, required=True)
    return parser


def _run(args) -> int:
    overrides = {k: v for k, v in vars(args).items() if k not in ("command", "config")}
    overrides = {k: (str(v) if isinstance(v, Path) else v) for k, v in overrides.items()}
    spec = harness.parse_config(args.config, overrides)
    records = harness.run_experiment(spec)
    failed = [r for r in records if r.error is not None]
    for r in failed:
        print(f"run {r.run_id} ({r.function}, {r.mode}, seed {r.seed}) failed: {r.error}", file=sys.stderr)
    stats = harness.aggregate(records) if len(failed) < len(records) else []
    _print_stats(stats)
    if spec.out is not None:
        harness.write_outputs(records, stats, spec.out, trace=spec.trace, dump_graph=spec.dump_graph)
        print(f"wrote results to {spec.out}")
    return 1 if failed else 0


def _compare_time(args) -> int:
    spec = harness.parse_config(args.config)
    rows, records, stats = harness.time_comparison(spec)
    _print_stats(stats)
    print()
    _print_timing(rows)
    if spec.out is not None:
        harness.write_outputs(records, stats, spec.out, trace=spec.trace, dump_graph=spec.dump_graph)
        harness.write_timing(rows, spec.out)
        print(f"wrote results to {spec.out}")
    return 0


def _aggregate(args) -> int:
    rows = harness.read_runs(args.in_dir / "runs.csv")
    stats = harness.aggregate(rows)
    harness.write_aggregate(stats, args.in_dir)
    _print_stats(stats)
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    handler = {"run": _run, "compare-time": _compare_time, "aggregate": _aggregate}[args.command]
    try:
        return handler(args)
    except (ContractViolation, OSError) as exc:
        print(f"graphea: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
