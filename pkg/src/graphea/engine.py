"""Generational real-coded EA with graph-driven strategy switching.

A run either keeps one strategy for its whole length (``static:<id>``) or,
in ``adaptive`` mode, re-decides the strategy every ``delta`` generations
from a :class:`~graphea.graph.StrategyGraph` whose arcs are learned from the
relative change in population diversity over each window.

Every objective call goes through an :class:`Evaluator`, which enforces the
evaluation budget and remembers the best point ever evaluated.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from . import operators as ops
from .benchmarks import FUNCTION_IDS, BenchmarkFn, evaluate_batch, get_function
from .diversity import DiversityRecord, diversity_delta, population_diversity
from .errors import BudgetExhausted, ContractViolation
from .graph import SELECT_MODES, StrategyGraph


@dataclass(frozen=True)
class EngineConfig:
    function: str = "sphere"
    dim: int = 40
    budget: int = 40_000
    pop: int = 50
    delta: int = 20
    cr: float = 0.7
    mu: float = 0.3
    mode: str = "adaptive"
    select: str = "map"
    epsilon: float = 0.05
    eta: float = 0.1
    w_min: float = 0.01
    diversity_eps: float = 1e-12
    operators: ops.OperatorParams = field(default_factory=ops.OperatorParams)
    seed: int = 0
    dump_graph: bool = False

    def __post_init__(self):
        if self.function not in FUNCTION_IDS:
            raise ContractViolation(
                f"function: unknown {self.function!r}; valid names: {', '.join(FUNCTION_IDS)}"
            )
        if self.dim < 2:
            raise ContractViolation(f"dim must be >= 2, got {self.dim}")
        if self.budget <= 0:
            raise ContractViolation(f"budget must be > 0, got {self.budget}")
        if self.pop < 4:
            raise ContractViolation(f"pop must be >= 4, got {self.pop}")
        if self.delta < 1:
            raise ContractViolation(f"delta must be >= 1, got {self.delta}")
        for name in ("cr", "mu"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ContractViolation(f"{name} must be in [0, 1], got {v}")
        if self.select not in SELECT_MODES:
            raise ContractViolation(f"select must be one of {SELECT_MODES}, got {self.select!r}")
        if not 0.0 <= self.epsilon <= 1.0:
            raise ContractViolation(f"epsilon must be in [0, 1], got {self.epsilon}")
        if not 0.0 < self.w_min < 1.0 / ops.N_STRATEGIES:
            raise ContractViolation(f"w_min must be in (0, 1/{ops.N_STRATEGIES}), got {self.w_min}")
        if not self.eta > 0:
            raise ContractViolation(f"eta must be > 0, got {self.eta}")
        self.static_strategy  # validates mode

    @property
    def adaptive(self) -> bool:
        return self.mode == "adaptive"

    @property
    def static_strategy(self) -> int | None:
        if self.mode == "adaptive":
            return None
        head, _, tail = self.mode.partition(":")
        if head != "static" or not tail.strip().isdigit():
            raise ContractViolation(f"mode must be 'adaptive' or 'static:<id>', got {self.mode!r}")
        sid = int(tail)
        if not 0 <= sid < ops.N_STRATEGIES:
            raise ContractViolation(f"mode: static strategy id must be in [0, {ops.N_STRATEGIES - 1}], got {sid}")
        return sid


class Evaluator:
    """Budget-charging objective wrapper that tracks the best point seen."""

    def __init__(self, fn: BenchmarkFn, budget: int):
        self.fn = fn
        self.budget = budget
        self.used = 0
        self.best_fitness = np.inf
        self.best_genes: np.ndarray | None = None

    @property
    def remaining(self) -> int:
        return self.budget - self.used

    def _record(self, X, f):
        if len(f):
            i = int(np.argmin(f))
            if f[i] < self.best_fitness:
                self.best_fitness = float(f[i])
                self.best_genes = np.array(X[i])

    def __call__(self, x) -> float:
        if self.remaining <= 0:
            raise BudgetExhausted(f"budget of {self.budget} evaluations used up")
        X = np.asarray(x, dtype=np.float64)[None, :]
        f = evaluate_batch(self.fn, X)
        self.used += 1
        self._record(X, f)
        return float(f[0])

    def batch(self, X) -> np.ndarray:
        """Evaluate as many leading rows of ``X`` as the budget allows."""
        k = min(len(X), self.remaining)
        if k <= 0:
            return np.empty(0)
        f = evaluate_batch(self.fn, X[:k])
        self.used += k
        self._record(X[:k], f)
        return f


@dataclass
class Population:
    genes: np.ndarray  # (pop, D)
    fitness: np.ndarray  # (pop,)
    evaluator: Evaluator = field(repr=False)

    @property
    def size(self) -> int:
        return len(self.fitness)

    @property
    def evals_used(self) -> int:
        return self.evaluator.used


class TraceRow(NamedTuple):
    generation: int
    best_fitness: float
    diversity: float
    strategy_id: int


@dataclass
class RunRecord:
    function: str
    mode: str
    seed: int
    best_genes: np.ndarray
    best_fitness: float
    evals_used: int
    generations_run: int
    wall_time: float  # seconds
    strategy_trajectory: list[tuple[int, int]]
    trace: list[TraceRow]
    graph_snapshots: list[tuple[int, np.ndarray]] = field(default_factory=list)
    run_id: int = 0
    error: str | None = None

    @property
    def diversity_trace(self) -> list[DiversityRecord]:
        return [DiversityRecord(r.generation, r.diversity) for r in self.trace]


def init_population(cfg: EngineConfig, evaluator: Evaluator, rng: np.random.Generator) -> Population:
    if evaluator.remaining < cfg.pop:
        raise ContractViolation(
            f"budget {evaluator.remaining} cannot cover the initial population of {cfg.pop}"
        )
    lb, ub = evaluator.fn.lower_bound, evaluator.fn.upper_bound
    genes = lb + (ub - lb) * rng.random((cfg.pop, cfg.dim))
    return Population(genes, evaluator.batch(genes), evaluator)


def tournament_select(fitness, rng: np.random.Generator) -> int:
    """Binary tournament on minimised fitness; returns the winner's index."""
    i, j = rng.integers(len(fitness), size=2)
    return int(j) if fitness[j] < fitness[i] else int(i)


def _crossover(kind, p1, p2, params, bounds, rng):
    if kind == "blx":
        c1, c2 = ops.crossover_blx(p1, p2, params.alpha, rng)
        return ops.clamp_to_bounds(c1, bounds), ops.clamp_to_bounds(c2, bounds)
    if kind == "discrete":
        return ops.crossover_discrete(p1, p2, rng)
    if kind == "one_point":
        return ops.crossover_one_point(p1, p2, rng)
    if kind == "barycentric":
        return ops.crossover_barycentric(p1, p2, rng)
    raise ValueError(kind)


def _mutate(kind, x, parent, genes, params, bounds, rng):
    if kind == "levy":
        return ops.mutate_levy(x, bounds, params.levy_beta, params.levy_scale, rng)
    if kind == "gaussian":
        return ops.mutate_gaussian(x, bounds, params.sigma_frac, rng)
    if kind == "de_rand_1_bin":
        return ops.mutate_de_rand_1_bin(x, genes, bounds, params.de_f, params.de_cr, rng, index=parent)
    if kind == "scramble":
        # moving genes between positions can break per-gene bounds
        return ops.clamp_to_bounds(ops.mutate_scramble(x, rng), bounds)
    raise ValueError(kind)


def _replace(pop: Population, kids: np.ndarray, kid_fit: np.ndarray) -> Population:
    # offspring identical to a current member add nothing; parents win ties
    seen = {row.tobytes() for row in pop.genes}
    fresh = np.array([row.tobytes() not in seen for row in kids], dtype=bool)
    genes = np.concatenate([pop.genes, kids[fresh]])
    fit = np.concatenate([pop.fitness, kid_fit[fresh]])
    keep = np.argsort(fit, kind="stable")[: pop.size]
    elite = int(np.argmin(pop.fitness))
    if elite not in keep:
        keep[-1] = elite
    return Population(genes[keep], fit[keep], pop.evaluator)


def step_generation(
    pop: Population, strategy: int, cfg: EngineConfig, rng: np.random.Generator
) -> tuple[Population, bool]:
    """Breed ``pop`` offspring with ``strategy`` and truncate parents + offspring.

    Returns the next population and whether the budget ran out during this
    generation. Offspring left unevaluated at exhaustion are discarded.
    Offspring that received neither crossover nor mutation keep their
    parent's fitness and cost no evaluation.
    """
    ev = pop.evaluator
    if ev.remaining <= 0:
        raise BudgetExhausted("no evaluations left for a new generation")
    xover, mutation = ops.strategy_from_id(strategy)
    bounds = (ev.fn.lower_bound, ev.fn.upper_bound)
    params = cfg.operators
    n = pop.size
    kids: list[np.ndarray] = []
    kid_fit: list[float] = []
    exhausted = False
    try:
        while len(kids) < n:
            a = tournament_select(pop.fitness, rng)
            b = tournament_select(pop.fitness, rng)
            p1, p2 = pop.genes[a], pop.genes[b]
            if rng.random() < cfg.cr:
                if xover == "linear":
                    c1, c2, f1, f2 = ops.crossover_linear(p1, p2, ev, bounds)
                else:
                    c1, c2 = _crossover(xover, p1, p2, params, bounds, rng)
                    f1 = f2 = np.nan
            else:
                c1, c2 = p1.copy(), p2.copy()
                f1, f2 = pop.fitness[a], pop.fitness[b]
            for child, f, parent in ((c1, f1, a), (c2, f2, b)):
                if len(kids) == n:
                    break
                if rng.random() < cfg.mu:
                    child = _mutate(mutation, child, parent, pop.genes, params, bounds, rng)
                    f = np.nan
                kids.append(child)
                kid_fit.append(f)
    except BudgetExhausted:
        exhausted = True

    if not kids:
        return pop, True
    K = np.array(kids)
    F = np.array(kid_fit, dtype=np.float64)
    pending = np.flatnonzero(np.isnan(F))
    if len(pending):
        got = ev.batch(K[pending])
        F[pending[: len(got)]] = got
        if len(got) < len(pending):
            exhausted = True
            ok = ~np.isnan(F)
            K, F = K[ok], F[ok]
    exhausted = exhausted or ev.remaining <= 0
    return _replace(pop, K, F), exhausted


def run(cfg: EngineConfig) -> RunRecord:
    """Execute one seeded run until the evaluation budget is spent."""
    t0 = time.perf_counter()
    rng = np.random.default_rng(cfg.seed)
    ev = Evaluator(get_function(cfg.function, cfg.dim), cfg.budget)
    pop = init_population(cfg, ev, rng)

    graph = None
    if cfg.adaptive:
        graph = StrategyGraph(ops.N_STRATEGIES, cfg.eta, cfg.w_min)
        cur = int(rng.integers(ops.N_STRATEGIES))
    else:
        cur = cfg.static_strategy
    prev = cur
    boundary_div = None

    trace = [TraceRow(0, ev.best_fitness, population_diversity(pop.genes), cur)]
    trajectory: list[tuple[int, int]] = []
    snapshots: list[tuple[int, np.ndarray]] = []
    gen = 0
    while ev.remaining > 0:
        if gen % cfg.delta == 0:
            trajectory.append((gen // cfg.delta, cur))
        used_before = ev.used
        pop, exhausted = step_generation(pop, cur, cfg, rng)
        gen += 1
        div = population_diversity(pop.genes)
        trace.append(TraceRow(gen, ev.best_fitness, div, cur))

        if graph is not None and gen % cfg.delta == 0:
            # the first window has no baseline, so the first update lands at 2*delta
            if boundary_div is not None:
                graph.update(prev, cur, diversity_delta(boundary_div, div, cfg.diversity_eps))
            boundary_div = div
            prev = cur
            cur = graph.select(cur, rng, cfg.select, cfg.epsilon)
            if cfg.dump_graph:
                snapshots.append((gen, graph.weights.copy()))

        if exhausted:
            break
        if ev.used == used_before and cfg.cr == 0 and cfg.mu == 0:
            break  # no variation is possible, the population can never change

    return RunRecord(
        function=cfg.function,
        mode=cfg.mode,
        seed=cfg.seed,
        best_genes=ev.best_genes,
        best_fitness=ev.best_fitness,
        evals_used=ev.used,
        generations_run=gen,
        wall_time=time.perf_counter() - t0,
        strategy_trajectory=trajectory,
        trace=trace,
        graph_snapshots=snapshots,
    )
