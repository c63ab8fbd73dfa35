import csv
import math
import statistics

import pytest

from graphea import harness
from graphea.cli import main
from graphea.errors import ContractViolation
from graphea.harness import AggregateStats, RunRow, aggregate, parse_config, run_experiment


def row(best, fn="sphere", mode="adaptive", run_id=0):
    return RunRow(run_id, fn, mode, run_id, best, 100, 3, 1.0)


def tiny_spec(**kw):
    base = dict(function="sphere", dim=4, budget=300, pop=10, delta=3, runs=3, seed=100)
    base.update(kw)
    return parse_config(overrides=base)


class TestParseConfig:
    def test_defaults(self):
        spec = parse_config()
        e = spec.engine
        assert (e.dim, e.budget, e.pop, e.delta, e.cr, e.mu, spec.runs) == (40, 40_000, 50, 20, 0.7, 0.3, 100)

    def test_overrides_only_named_fields(self):
        spec = parse_config(overrides={"runs": 5, "dim": 10})
        assert spec.runs == 5 and spec.engine.dim == 10
        assert spec.engine.budget == 40_000 and spec.engine.pop == 50

    def test_unknown_function_lists_names(self):
        with pytest.raises(ContractViolation, match="sphere, schwefel12"):
            parse_config(overrides={"function": "nosuchfn"})

    def test_unknown_key(self):
        with pytest.raises(ContractViolation, match="colour"):
            parse_config(overrides={"colour": "red"})

    @pytest.mark.parametrize("key, value", [("cr", "1.2"), ("runs", "0"), ("dim", "ten"), ("mode", "static:99")])
    def test_bad_values_name_the_key(self, key, value):
        with pytest.raises(ContractViolation, match=key.split(":")[0]):
            parse_config(overrides={key: value})

    def test_file_then_flags(self, tmp_path):
        cfg = tmp_path / "exp.cfg"
        cfg.write_text("# comment\nfunction = sphere, alpine\ndim = 8\nmode = adaptive, static:3\nruns = 4\n"
                       "alpha = 0.3  # trailing comment\ntrace = yes\n")
        spec = parse_config(cfg, {"dim": 6})
        assert spec.functions == ("sphere", "alpine")
        assert spec.modes == ("adaptive", "static:3")
        assert spec.engine.dim == 6
        assert spec.engine.operators.alpha == 0.3
        assert spec.trace is True and spec.runs == 4

    def test_all_functions(self):
        assert len(parse_config(overrides={"function": "all"}).functions) == 12

    def test_malformed_line(self, tmp_path):
        cfg = tmp_path / "bad.cfg"
        cfg.write_text("dim 8\n")
        with pytest.raises(ContractViolation, match="key = value"):
            parse_config(cfg)


class TestRunExperiment:
    def test_seed_schedule(self):
        recs = run_experiment(tiny_spec())
        assert [r.seed for r in recs] == [100, 101, 102]
        assert [r.run_id for r in recs] == [0, 1, 2]

    def test_seeds_injective_across_experiment(self):
        spec = tiny_spec(function="sphere,alpine", mode="adaptive,static:2", runs=2)
        seeds = [cfg.seed for _, cfg in spec.configs()]
        assert len(seeds) == len(set(seeds)) == 8

    def test_repeatable(self):
        a = run_experiment(tiny_spec())
        b = run_experiment(tiny_spec())
        assert [r.best_fitness for r in a] == [r.best_fitness for r in b]

    def test_parallel_matches_serial(self):
        serial = run_experiment(tiny_spec(runs=4))
        par = run_experiment(tiny_spec(runs=4, parallel=2))
        assert [(r.run_id, r.best_fitness, r.evals_used) for r in serial] == \
               [(r.run_id, r.best_fitness, r.evals_used) for r in par]

    def test_failed_run_is_recorded(self):
        # budget below the population size fails inside the engine
        recs = run_experiment(tiny_spec(budget=5, runs=2))
        assert all(r.error and "initial population" in r.error for r in recs)


class TestAggregate:
    def test_two_runs(self):
        (s,) = aggregate([row(1.0), row(3.0, run_id=1)])
        assert s.mean_best == 2.0
        assert s.std_best == pytest.approx(math.sqrt(2), rel=1e-15)
        assert s.std_defined

    def test_single_run(self):
        (s,) = aggregate([row(4.0)])
        assert s.std_best == 0.0 and not s.std_defined

    def test_equal_bests(self):
        (s,) = aggregate([row(2.5, run_id=i) for i in range(4)])
        assert s.std_best == 0.0

    def test_groups(self):
        stats = aggregate([row(1.0), row(2.0, mode="static:1"), row(3.0, fn="alpine")])
        assert [(s.function, s.mode) for s in stats] == [("alpine", "adaptive"), ("sphere", "adaptive"),
                                                          ("sphere", "static:1")]

    def test_empty(self):
        with pytest.raises(ContractViolation):
            aggregate([])


class TestTiming:
    def stats(self, mode, wall):
        return AggregateStats("sphere", mode, 2, 0.0, 0.0, True, 100.0, wall)

    def test_ratio(self):
        (r,) = harness.timing_table([self.stats("adaptive", 30.0), self.stats("static:1", 20.0)])
        assert r.ratio == 1.5

    def test_self_comparison(self):
        (r,) = harness.timing_table([self.stats("static:1", 20.0)], "static:1", "static:1")
        assert r.ratio == 1.0

    def test_missing_mode(self):
        with pytest.raises(ContractViolation):
            harness.timing_table([self.stats("adaptive", 30.0)])
        with pytest.raises(ContractViolation):
            harness.time_comparison(tiny_spec())


class TestOutputs:
    def test_schemas_and_recompute(self, tmp_path):
        spec = tiny_spec(function="sphere,alpine", mode="adaptive,static:5", runs=2, dump_graph=True)
        recs = run_experiment(spec)
        stats = aggregate(recs)
        paths = harness.write_outputs(recs, stats, tmp_path, trace=True, dump_graph=True)
        with open(paths["runs"]) as fh:
            rows = list(csv.reader(fh))
        assert rows[0] == "run_id,function,mode,seed,best_fitness,evals_used,generations,wall_time_ms".split(",")
        assert len(rows) - 1 == 2 * 2 * 2
        keys = [(r[1], r[2], int(r[0])) for r in rows[1:]]
        assert keys == sorted(keys)
        trace_files = sorted((tmp_path / "traces").iterdir())
        assert len(trace_files) == 8
        with open(trace_files[0]) as fh:
            assert next(csv.reader(fh)) == "run_id,generation,best_fitness,diversity,strategy_id".split(",")
        assert any((tmp_path / "graphs").iterdir())

        # independent recomputation from the CSV
        with open(paths["aggregate"]) as fh:
            emitted = {(r["function"], r["mode"]): r for r in csv.DictReader(fh)}
        groups = {}
        for r in rows[1:]:
            groups.setdefault((r[1], r[2]), []).append(float(r[4]))
        for key, vals in groups.items():
            assert float(emitted[key]["mean_best"]) == pytest.approx(statistics.fmean(vals), rel=1e-12, abs=1e-300)
            assert float(emitted[key]["std_best"]) == pytest.approx(statistics.stdev(vals), rel=1e-12, abs=1e-300)

    def test_floats_round_trip(self):
        x = 0.1 + 0.2
        assert float(harness.fmt(x)) == x
        assert len(harness.fmt(1 / 3).replace("0.", "")) == 17

    def test_read_runs_round_trip(self, tmp_path):
        recs = run_experiment(tiny_spec())
        harness.write_outputs(recs, aggregate(recs), tmp_path)
        back = harness.read_runs(tmp_path / "runs.csv")
        assert [r.best_fitness for r in back] == [r.best_fitness for r in recs]


class TestCli:
    def test_run_and_aggregate(self, tmp_path, capsys):
        out = tmp_path / "o"
        rc = main(["run", "--function", "sphere", "--dim", "4", "--budget", "300", "--pop", "10", "--runs", "2",
                   "--mode", "adaptive", "--out", str(out), "--trace"])
        assert rc == 0
        assert (out / "runs.csv").exists() and (out / "traces").is_dir()
        before = (out / "aggregate.csv").read_text()
        (out / "aggregate.csv").unlink()
        assert main(["aggregate", "--in", str(out)]) == 0
        assert (out / "aggregate.csv").read_text() == before

    def test_bad_function_exit_code(self, capsys):
        assert main(["run", "--function", "nosuchfn"]) == 2
        assert "valid names" in capsys.readouterr().err

    def test_compare_time(self, tmp_path, capsys):
        cfg = tmp_path / "t.cfg"
        cfg.write_text(f"function = sphere\ndim = 4\nbudget = 400\npop = 10\nruns = 2\n"
                       f"mode = adaptive, static:1\nout = {tmp_path / 'cmp'}\n")
        assert main(["compare-time", "--config", str(cfg)]) == 0
        with open(tmp_path / "cmp" / "time_comparison.csv") as fh:
            (r,) = list(csv.DictReader(fh))
        assert r["mode_a"] == "adaptive" and r["mode_b"] == "static:1" and float(r["ratio"]) > 0

    def test_compare_time_needs_both_modes(self, tmp_path, capsys):
        cfg = tmp_path / "t.cfg"
        cfg.write_text("dim = 4\nbudget = 400\npop = 10\nruns = 1\n")
        assert main(["compare-time", "--config", str(cfg)]) == 2

    def test_aggregate_missing_dir(self, tmp_path, capsys):
        assert main(["aggregate", "--in", str(tmp_path / "missing")]) == 2
