"""Real-coded variation operators and the strategy table built from them.

Every stochastic operator takes an explicit ``numpy.random.Generator``; nothing
here touches global random state. Vectors are 1-D float arrays, bounds are a
``(lower, upper)`` pair of arrays of the same length.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np

from .errors import ContractViolation

CROSSOVERS = ("blx", "discrete", "one_point", "linear", "barycentric")
MUTATIONS = ("levy", "gaussian", "de_rand_1_bin", "scramble")
N_STRATEGIES = len(CROSSOVERS) * len(MUTATIONS)


class Strategy(NamedTuple):
    crossover: str
    mutation: str


def strategy_from_id(sid: int) -> Strategy:
    if not 0 <= sid < N_STRATEGIES:
        raise ContractViolation(f"strategy id must be in [0, {N_STRATEGIES - 1}], got {sid}")
    c, m = divmod(int(sid), len(MUTATIONS))
    return Strategy(CROSSOVERS[c], MUTATIONS[m])


def strategy_id(strategy: Strategy) -> int:
    return CROSSOVERS.index(strategy.crossover) * len(MUTATIONS) + MUTATIONS.index(strategy.mutation)


STRATEGIES = tuple(strategy_from_id(i) for i in range(N_STRATEGIES))


@dataclass(frozen=True)
class OperatorParams:
    """Tunable operator constants. Defaults are common literature choices."""

    alpha: float = 0.5  # BLX-alpha extension
    sigma_frac: float = 0.1  # gaussian step, fraction of the box width
    levy_beta: float = 1.5
    levy_scale: float = 0.01  # levy step, fraction of the box width
    de_f: float = 0.5
    de_cr: float = 0.9

    def __post_init__(self):
        if not self.alpha > 0:
            raise ContractViolation(f"alpha must be > 0, got {self.alpha}")
        if not self.sigma_frac > 0:
            raise ContractViolation(f"sigma_frac must be > 0, got {self.sigma_frac}")
        if not 1.0 < self.levy_beta <= 2.0:
            raise ContractViolation(f"levy_beta must be in (1, 2], got {self.levy_beta}")
        if not self.levy_scale > 0:
            raise ContractViolation(f"levy_scale must be > 0, got {self.levy_scale}")
        if not 0.0 < self.de_f <= 2.0:
            raise ContractViolation(f"de_f must be in (0, 2], got {self.de_f}")
        if not 0.0 <= self.de_cr <= 1.0:
            raise ContractViolation(f"de_cr must be in [0, 1], got {self.de_cr}")


def _pair(p1, p2):
    p1 = np.asarray(p1, dtype=np.float64)
    p2 = np.asarray(p2, dtype=np.float64)
    if p1.shape != p2.shape or p1.ndim != 1:
        raise ContractViolation(f"parent shapes differ or are not vectors: {p1.shape} vs {p2.shape}")
    return p1, p2


def clamp_to_bounds(x, bounds) -> np.ndarray:
    lower, upper = bounds
    return np.clip(x, lower, upper)


# -- crossovers --------------------------------------------------------------


def crossover_blx(p1, p2, alpha: float, rng: np.random.Generator):
    """BLX-alpha: each gene uniform on the parents' interval widened by alpha*d on both sides."""
    p1, p2 = _pair(p1, p2)
    lo = np.minimum(p1, p2)
    hi = np.maximum(p1, p2)
    d = hi - lo
    lo = lo - alpha * d
    width = (1.0 + 2.0 * alpha) * d
    u = rng.random((2, p1.size))
    return lo + u[0] * width, lo + u[1] * width


def crossover_discrete(p1, p2, rng: np.random.Generator):
    p1, p2 = _pair(p1, p2)
    heads = rng.random(p1.size) < 0.5
    return np.where(heads, p1, p2), np.where(heads, p2, p1)


def crossover_one_point(p1, p2, rng: np.random.Generator):
    p1, p2 = _pair(p1, p2)
    if p1.size < 2:
        raise ContractViolation("one-point crossover needs at least 2 genes")
    k = int(rng.integers(1, p1.size))
    return np.concatenate([p1[:k], p2[k:]]), np.concatenate([p2[:k], p1[k:]])


def crossover_linear(p1, p2, fitness_of: Callable[[np.ndarray], float], bounds=None):
    """Wright's linear crossover.

    Builds the midpoint and the two outer points, clamps them, evaluates all
    three through ``fitness_of`` and keeps the best two. Ties keep candidate
    order. Returns ``(child1, child2, fitness1, fitness2)``.

    ``fitness_of`` is responsible for budget accounting; if it raises, the
    exception propagates with whatever candidates were already evaluated
    counted against the budget.
    """
    p1, p2 = _pair(p1, p2)
    cands = [0.5 * (p1 + p2), 1.5 * p1 - 0.5 * p2, -0.5 * p1 + 1.5 * p2]
    if bounds is not None:
        cands = [clamp_to_bounds(c, bounds) for c in cands]
    fits = np.array([fitness_of(c) for c in cands])
    first, second = np.argsort(fits, kind="stable")[:2]
    return cands[first], cands[second], float(fits[first]), float(fits[second])


def crossover_barycentric(p1, p2, rng: np.random.Generator):
    p1, p2 = _pair(p1, p2)
    lam = rng.random()
    return lam * p1 + (1.0 - lam) * p2, (1.0 - lam) * p1 + lam * p2


# -- mutations ---------------------------------------------------------------


def mutate_gaussian(x, bounds, sigma_frac: float, rng: np.random.Generator) -> np.ndarray:
    lower, upper = bounds
    z = rng.standard_normal(len(x))
    return clamp_to_bounds(x + z * sigma_frac * (upper - lower), bounds)


def mantegna_sigma(beta: float) -> float:
    """Scale of the numerator normal in Mantegna's Levy-stable step generator."""
    num = math.gamma(1.0 + beta) * math.sin(math.pi * beta / 2.0)
    den = math.gamma((1.0 + beta) / 2.0) * beta * 2.0 ** ((beta - 1.0) / 2.0)
    return (num / den) ** (1.0 / beta)


def levy_steps(size: int, beta: float, rng: np.random.Generator) -> np.ndarray:
    """Heavy-tailed steps u / |v|^(1/beta); v is redrawn while |v| < 1e-300."""
    u = mantegna_sigma(beta) * rng.standard_normal(size)
    v = rng.standard_normal(size)
    tiny = np.abs(v) < 1e-300
    while tiny.any():
        v[tiny] = rng.standard_normal(int(tiny.sum()))
        tiny = np.abs(v) < 1e-300
    return u / np.abs(v) ** (1.0 / beta)


def mutate_levy(x, bounds, beta: float, scale: float, rng: np.random.Generator) -> np.ndarray:
    lower, upper = bounds
    s = levy_steps(len(x), beta, rng)
    return clamp_to_bounds(x + scale * (upper - lower) * s, bounds)


def mutate_de_rand_1_bin(
    x,
    population,
    bounds,
    F: float,
    cr_de: float,
    rng: np.random.Generator,
    index: int | None = None,
) -> np.ndarray:
    """DE/rand/1 donor with binomial mixing into ``x``.

    ``population`` is the (n, D) gene matrix of the current generation. Donor
    rows are drawn without replacement and exclude ``index`` when given.
    """
    population = np.asarray(population)
    n = population.shape[0]
    if n < 4:
        raise ContractViolation(f"DE/rand/1/bin needs a population of at least 4, got {n}")
    pool = np.arange(n) if index is None else np.delete(np.arange(n), index)
    r1, r2, r3 = rng.choice(pool, 3, replace=False)
    donor = population[r1] + F * (population[r2] - population[r3])
    d = len(x)
    j_rand = int(rng.integers(d))
    take = rng.random(d) < cr_de
    take[j_rand] = True
    return clamp_to_bounds(np.where(take, donor, x), bounds)


def mutate_scramble(x, rng: np.random.Generator) -> np.ndarray:
    x = np.array(x, dtype=np.float64)
    if x.size < 2:
        raise ContractViolation("scramble mutation needs at least 2 genes")
    i, j = sorted(rng.choice(x.size, 2, replace=False))
    x[i : j + 1] = x[i : j + 1][rng.permutation(j - i + 1)]
    return x
