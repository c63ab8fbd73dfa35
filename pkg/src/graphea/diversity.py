"""Population diversity as the mean pairwise Euclidean distance."""

from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np
from scipy.spatial.distance import pdist

from ._accel import USE_NUMBA, njit
from .errors import ContractViolation


class DiversityRecord(NamedTuple):
    generation: int
    value: float


@njit(cache=True)
def _nb_mean_pairwise(X):
    n, d = X.shape
    total = 0.0
    for i in range(n - 1):
        for j in range(i + 1, n):
            s = 0.0
            for k in range(d):
                t = X[i, k] - X[j, k]
                s += t * t
            total += math.sqrt(s)
    return total * 2.0 / (n * (n - 1.0))


def _np_mean_pairwise(X):
    return float(np.mean(pdist(X)))


def population_diversity(genes) -> float:
    """Mean of ``||x_i - x_j||`` over all unordered pairs of rows of ``genes``."""
    X = np.ascontiguousarray(genes, dtype=np.float64)
    if X.ndim != 2 or X.shape[0] < 2:
        raise ContractViolation(f"diversity needs at least 2 individuals, got shape {X.shape}")
    if USE_NUMBA:
        return float(_nb_mean_pairwise(X))
    return _np_mean_pairwise(X)


def diversity_delta(before: float, after: float, eps: float = 1e-12) -> float:
    """Relative change ``(after - before) / max(before, eps)``; positive means diversity grew."""
    return (after - before) / max(before, eps)
