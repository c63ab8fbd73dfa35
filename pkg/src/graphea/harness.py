"""Multi-run experiments, aggregation and CSV output.

Per-run seeds follow ``seed = base_seed + run_id`` where ``run_id`` counts
jobs in (function, mode, repetition) order across the whole experiment, so
no two runs of one experiment share a seed.
"""

from __future__ import annotations

import csv
import dataclasses
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, NamedTuple

import numpy as np

from .benchmarks import FUNCTION_IDS
from .engine import EngineConfig, RunRecord, run
from .errors import ContractViolation
from .operators import N_STRATEGIES, OperatorParams

RUN_HEADER = ["run_id", "function", "mode", "seed", "best_fitness", "evals_used", "generations", "wall_time_ms"]
TRACE_HEADER = ["run_id", "generation", "best_fitness", "diversity", "strategy_id"]
AGGREGATE_HEADER = [
    "function", "mode", "runs", "mean_best", "std_best", "std_defined", "mean_evals", "mean_wall_time_ms",
]
GRAPH_HEADER = ["run_id", "generation", "from_strategy"] + [f"w{j}" for j in range(N_STRATEGIES)]
FAILURE_HEADER = ["run_id", "function", "mode", "seed", "error"]
TIMING_HEADER = ["function", "mode_a", "mode_b", "mean_wall_time_ms_a", "mean_wall_time_ms_b", "ratio"]

_ENGINE_KEYS = {
    "dim": int, "budget": int, "pop": int, "delta": int, "cr": float, "mu": float,
    "select": str, "epsilon": float, "eta": float, "w_min": float,
}
_OPERATOR_KEYS = {
    "alpha": float, "sigma_frac": float, "levy_beta": float, "levy_scale": float,
    "de_f": float, "de_cr": float,
}


def _bool(text: str) -> bool:
    v = str(text).strip().lower()
    if v in ("1", "true", "yes", "on"):
        return True
    if v in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def _names(text) -> tuple[str, ...]:
    if isinstance(text, (list, tuple)):
        return tuple(text)
    return tuple(p.strip() for p in str(text).split(",") if p.strip())


_SPEC_KEYS = {"function": _names, "mode": _names, "runs": int, "seed": int, "out": str,
              "trace": _bool, "dump_graph": _bool, "parallel": int}
KNOWN_KEYS = {**_ENGINE_KEYS, **_OPERATOR_KEYS, **_SPEC_KEYS}


def fmt(x) -> str:
    """Serialise a float with 17 significant digits (exact round trip)."""
    return format(float(x), ".17g")


@dataclass(frozen=True)
class ExperimentSpec:
    functions: tuple[str, ...] = ("sphere",)
    modes: tuple[str, ...] = ("adaptive",)
    runs: int = 100
    base_seed: int = 0
    out: Path | None = None
    trace: bool = False
    dump_graph: bool = False
    parallel: int = 1
    engine: EngineConfig = field(default_factory=EngineConfig)

    def configs(self) -> list[tuple[int, EngineConfig]]:
        """All ``(run_id, config)`` jobs in canonical order."""
        jobs = []
        for fn in self.functions:
            for mode in self.modes:
                for _ in range(self.runs):
                    run_id = len(jobs)
                    cfg = dataclasses.replace(
                        self.engine, function=fn, mode=mode, seed=self.base_seed + run_id,
                        dump_graph=self.dump_graph,
                    )
                    jobs.append((run_id, cfg))
        return jobs


def read_config_file(path) -> dict[str, str]:
    """Parse ``key = value`` lines; ``#`` starts a comment."""
    values = {}
    try:
        lines = Path(path).read_text().splitlines()
    except OSError as exc:
        raise ContractViolation(f"cannot read config {path}: {exc}") from exc
    for lineno, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ContractViolation(f"{path}:{lineno}: expected 'key = value', got {raw!r}")
        values[key.strip().replace("-", "_")] = value.strip()
    return values


def parse_config(path=None, overrides: dict | None = None) -> ExperimentSpec:
    """Merge a config file with flag overrides (flags win) on top of the defaults.

    Defaults reproduce the reference protocol: D=40, 40,000 evaluations,
    pop=50, delta=20, CR=0.7, MU=0.3 and 100 runs.
    """
    raw: dict = read_config_file(path) if path is not None else {}
    raw.update({k.replace("-", "_"): v for k, v in (overrides or {}).items() if v is not None})

    parsed = {}
    for key, value in raw.items():
        if key == "functions":
            key = "function"
        if key not in KNOWN_KEYS:
            raise ContractViolation(f"unknown config key {key!r}; known keys: {', '.join(sorted(KNOWN_KEYS))}")
        conv = KNOWN_KEYS[key]
        try:
            parsed[key] = value if isinstance(value, bool) and conv is _bool else conv(value)
        except (TypeError, ValueError) as exc:
            raise ContractViolation(f"{key}: invalid value {value!r} ({exc})") from exc

    functions = parsed.pop("function", ("sphere",))
    functions = _names(functions)
    if functions == ("all",):
        functions = FUNCTION_IDS
    for fn in functions:
        if fn not in FUNCTION_IDS:
            raise ContractViolation(f"function: unknown {fn!r}; valid names: {', '.join(FUNCTION_IDS)}")
    modes = _names(parsed.pop("mode", ("adaptive",)))
    if not modes:
        raise ContractViolation("mode: at least one mode is required")

    op_kwargs = {k: parsed.pop(k) for k in list(parsed) if k in _OPERATOR_KEYS}
    eng_kwargs = {k: parsed.pop(k) for k in list(parsed) if k in _ENGINE_KEYS}
    operators = OperatorParams(**op_kwargs)
    engine = EngineConfig(function=functions[0], operators=operators, **eng_kwargs)
    for mode in modes:
        dataclasses.replace(engine, mode=mode)

    runs = parsed.get("runs", 100)
    parallel = parsed.get("parallel", 1)
    if runs < 1:
        raise ContractViolation(f"runs must be >= 1, got {runs}")
    if parallel < 1:
        raise ContractViolation(f"parallel must be >= 1, got {parallel}")
    out = parsed.get("out")
    return ExperimentSpec(
        functions=tuple(functions),
        modes=modes,
        runs=runs,
        base_seed=parsed.get("seed", 0),
        out=Path(out) if out else None,
        trace=parsed.get("trace", False),
        dump_graph=parsed.get("dump_graph", False),
        parallel=parallel,
        engine=engine,
    )


def _execute(job: tuple[int, EngineConfig]) -> RunRecord:
    run_id, cfg = job
    try:
        rec = run(cfg)
    except Exception as exc:  # one broken run must not sink the batch
        return RunRecord(cfg.function, cfg.mode, cfg.seed, None, math.nan, 0, 0, 0.0, [], [],
                         run_id=run_id, error=f"{type(exc).__name__}: {exc}")
    rec.run_id = run_id
    return rec


def _sort_key(rec):
    return (rec.function, rec.mode, rec.run_id)


def run_experiment(spec: ExperimentSpec) -> list[RunRecord]:
    """Run every job of ``spec``; the result order is independent of ``parallel``."""
    jobs = spec.configs()
    if spec.parallel > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=spec.parallel) as pool:
            records = list(pool.map(_execute, jobs))
    else:
        records = [_execute(job) for job in jobs]
    return sorted(records, key=_sort_key)


class RunRow(NamedTuple):
    run_id: int
    function: str
    mode: str
    seed: int
    best_fitness: float
    evals_used: int
    generations: int
    wall_time_ms: float

    @classmethod
    def from_record(cls, rec: RunRecord) -> RunRow:
        return cls(rec.run_id, rec.function, rec.mode, rec.seed, rec.best_fitness,
                   rec.evals_used, rec.generations_run, rec.wall_time * 1e3)


@dataclass(frozen=True)
class AggregateStats:
    function: str
    mode: str
    runs: int
    mean_best: float
    std_best: float
    std_defined: bool  # False for a single run, where std_best is reported as 0
    mean_evals: float
    mean_wall_time_ms: float


def aggregate(rows: Iterable) -> list[AggregateStats]:
    """Mean and sample standard deviation of ``best_fitness`` per (function, mode).

    Accepts :class:`RunRow` or :class:`RunRecord` items; failed runs are skipped.
    """
    groups: dict[tuple[str, str], list[RunRow]] = {}
    for r in rows:
        if isinstance(r, RunRecord):
            if r.error is not None:
                continue
            r = RunRow.from_record(r)
        groups.setdefault((r.function, r.mode), []).append(r)
    if not groups:
        raise ContractViolation("aggregate: no successful runs to summarise")
    stats = []
    for (fn, mode), grp in sorted(groups.items()):
        best = np.array([g.best_fitness for g in grp])
        n = len(best)
        stats.append(AggregateStats(
            function=fn,
            mode=mode,
            runs=n,
            mean_best=float(np.mean(best)),
            std_best=float(np.std(best, ddof=1)) if n > 1 else 0.0,
            std_defined=n > 1,
            mean_evals=float(np.mean([g.evals_used for g in grp])),
            mean_wall_time_ms=float(np.mean([g.wall_time_ms for g in grp])),
        ))
    return stats


class TimingRow(NamedTuple):
    function: str
    mode_a: str
    mode_b: str
    wall_a: float
    wall_b: float
    ratio: float


def timing_table(stats: Iterable[AggregateStats], mode_a: str = "adaptive", mode_b: str | None = None) -> list[TimingRow]:
    """Per-function ratio of mean wall time, ``mode_a / mode_b``.

    ``mode_b`` defaults to the first static mode present.
    """
    stats = list(stats)
    modes = {s.mode for s in stats}
    if mode_b is None:
        static = sorted(m for m in modes if m.startswith("static"))
        if not static:
            raise ContractViolation("time comparison needs a static mode")
        mode_b = static[0]
    for m in (mode_a, mode_b):
        if m not in modes:
            raise ContractViolation(f"time comparison: mode {m!r} missing from results")
    by_key = {(s.function, s.mode): s for s in stats}
    rows = []
    for fn in sorted({s.function for s in stats}):
        a, b = by_key.get((fn, mode_a)), by_key.get((fn, mode_b))
        if a is None or b is None:
            raise ContractViolation(f"time comparison: {fn} lacks one of {mode_a!r}, {mode_b!r}")
        rows.append(TimingRow(fn, mode_a, mode_b, a.mean_wall_time_ms, b.mean_wall_time_ms,
                              a.mean_wall_time_ms / b.mean_wall_time_ms))
    return rows


def time_comparison(spec: ExperimentSpec) -> tuple[list[TimingRow], list[RunRecord], list[AggregateStats]]:
    """Run ``spec`` (which must list ``adaptive`` and a static mode) and compare wall times."""
    if "adaptive" not in spec.modes or not any(m.startswith("static") for m in spec.modes):
        raise ContractViolation(f"compare-time needs both 'adaptive' and a 'static:<id>' mode, got {spec.modes}")
    records = run_experiment(spec)
    stats = aggregate(records)
    return timing_table(stats), records, stats


# -- output ------------------------------------------------------------------


def _write_csv(path: Path, header, rows) -> Path:
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(header)
            w.writerows(rows)
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc}") from exc
    return path


def _run_csv_row(r: RunRow):
    return [r.run_id, r.function, r.mode, r.seed, fmt(r.best_fitness), r.evals_used, r.generations,
            fmt(r.wall_time_ms)]


def _stats_csv_row(s: AggregateStats):
    return [s.function, s.mode, s.runs, fmt(s.mean_best), fmt(s.std_best), int(s.std_defined),
            fmt(s.mean_evals), fmt(s.mean_wall_time_ms)]


def write_aggregate(stats, out_dir) -> Path:
    return _write_csv(Path(out_dir) / "aggregate.csv", AGGREGATE_HEADER, [_stats_csv_row(s) for s in stats])


def write_timing(rows, out_dir) -> Path:
    return _write_csv(Path(out_dir) / "time_comparison.csv", TIMING_HEADER,
                      [[r.function, r.mode_a, r.mode_b, fmt(r.wall_a), fmt(r.wall_b), fmt(r.ratio)] for r in rows])


def write_outputs(records: list[RunRecord], stats, out_dir, *, trace=False, dump_graph=False) -> dict[str, Path]:
    """Write ``runs.csv``, ``aggregate.csv`` and, on request, traces and graph dumps.

    Failed runs go to ``failures.csv`` instead of ``runs.csv``.
    """
    out = Path(out_dir)
    records = sorted(records, key=_sort_key)
    ok = [r for r in records if r.error is None]
    failed = [r for r in records if r.error is not None]
    paths = {
        "runs": _write_csv(out / "runs.csv", RUN_HEADER, [_run_csv_row(RunRow.from_record(r)) for r in ok]),
        "aggregate": write_aggregate(stats, out),
    }
    if failed:
        paths["failures"] = _write_csv(out / "failures.csv", FAILURE_HEADER,
                                       [[r.run_id, r.function, r.mode, r.seed, r.error] for r in failed])
    if trace:
        for r in ok:
            _write_csv(out / "traces" / f"run_{r.run_id:05d}.csv", TRACE_HEADER,
                       [[r.run_id, t.generation, fmt(t.best_fitness), fmt(t.diversity), t.strategy_id]
                        for t in r.trace])
        paths["traces"] = out / "traces"
    if dump_graph:
        for r in ok:
            if not r.graph_snapshots:
                continue
            rows = [[r.run_id, gen, i] + [fmt(w) for w in W[i]]
                    for gen, W in r.graph_snapshots for i in range(W.shape[0])]
            _write_csv(out / "graphs" / f"run_{r.run_id:05d}.csv", GRAPH_HEADER, rows)
        paths["graphs"] = out / "graphs"
    return paths


def read_runs(path) -> list[RunRow]:
    path = Path(path)
    try:
        with open(path, newline="") as fh:
            reader = csv.reader(fh)
            header = next(reader)
            if header != RUN_HEADER:
                raise ContractViolation(f"{path}: unexpected header {header}")
            return [RunRow(int(r[0]), r[1], r[2], int(r[3]), float(r[4]), int(r[5]), int(r[6]), float(r[7]))
                    for r in reader]
    except OSError as exc:
        raise OSError(f"cannot read {path}: {exc}") from exc
