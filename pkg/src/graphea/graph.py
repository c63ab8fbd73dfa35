"""Complete directed graph over strategies with learned transition weights.

Row ``r`` of the weight matrix is the distribution over the strategy to use
after strategy ``r``. Arcs are reinforced when the window run under their
target strategy kept (or raised) population diversity, and weakened otherwise.
"""

from __future__ import annotations

import numpy as np

from .errors import ContractViolation

SELECT_MODES = ("map", "sample")


class StrategyGraph:
    """Row-stochastic ``n x n`` weight matrix with a floor ``w_min`` on every arc.

    The increment applied to an arc is ``eta * min(|p_hat|, 1)``, signed like
    ``p_hat``. After the raw change the arc is floored at ``w_min`` and its row
    is renormalised: plain division by the row sum when that keeps every entry
    on or above the floor, otherwise only the mass above the floor is rescaled.
    """

    def __init__(self, n: int, eta: float = 0.1, w_min: float = 0.01):
        if n < 2:
            raise ContractViolation(f"graph needs at least 2 nodes, got {n}")
        if not 0.0 < w_min < 1.0 / n:
            raise ContractViolation(f"w_min must be in (0, 1/{n}), got {w_min}")
        if not eta > 0:
            raise ContractViolation(f"eta must be > 0, got {eta}")
        self.n = n
        self.eta = eta
        self.w_min = w_min
        self.weights = np.full((n, n), 1.0 / n)

    def copy(self) -> StrategyGraph:
        g = StrategyGraph(self.n, self.eta, self.w_min)
        g.weights = self.weights.copy()
        return g

    def _check(self, *ids):
        for s in ids:
            if not 0 <= s < self.n:
                raise ContractViolation(f"strategy id {s} outside [0, {self.n - 1}]")

    def step_size(self, p_hat: float) -> float:
        return self.eta * min(abs(p_hat), 1.0)

    def update(self, prev: int, cur: int, p_hat: float) -> None:
        """Credit the diversity change ``p_hat`` observed under ``cur`` to arc ``prev -> cur``."""
        self._check(prev, cur)
        if p_hat == 0.0 or np.isnan(p_hat):
            return
        a = self.step_size(p_hat)
        row = self.weights[prev]
        row[cur] = max(row[cur] + (a if p_hat > 0 else -a), self.w_min)
        total = row.sum()
        scaled = row / total
        if scaled.min() < self.w_min:
            slack = total - self.n * self.w_min
            scaled = self.w_min + (row - self.w_min) * (1.0 - self.n * self.w_min) / slack
        self.weights[prev] = scaled

    def select(self, cur: int, rng: np.random.Generator, mode: str = "map", epsilon: float = 0.05) -> int:
        """Pick the strategy for the next window from row ``cur``.

        ``map``: argmax of the row (lowest index on ties), replaced by a uniform
        pick with probability ``epsilon``. ``sample``: categorical draw from the row.
        """
        self._check(cur)
        row = self.weights[cur]
        if mode == "map":
            if not 0.0 <= epsilon <= 1.0:
                raise ContractViolation(f"epsilon must be in [0, 1], got {epsilon}")
            if epsilon > 0 and rng.random() < epsilon:
                return int(rng.integers(self.n))
            return int(np.argmax(row))
        if mode == "sample":
            return int(rng.choice(self.n, p=row))
        raise ContractViolation(f"selection mode must be one of {SELECT_MODES}, got {mode!r}")


def graph_init(n: int, eta: float = 0.1, w_min: float = 0.01) -> StrategyGraph:
    return StrategyGraph(n, eta, w_min)


def update_weight(g: StrategyGraph, prev: int, cur: int, p_hat: float) -> StrategyGraph:
    g.update(prev, cur, p_hat)
    return g


def select_next(g: StrategyGraph, cur: int, mode: str, epsilon: float, rng: np.random.Generator) -> int:
    return g.select(cur, rng, mode, epsilon)
