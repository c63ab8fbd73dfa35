"""Twelve box-constrained test objectives (minimisation).

Definitions, with ``i`` running from 1 to ``D``:

================  =================================================================  ===============
id                f(x)                                                               domain
================  =================================================================  ===============
sphere            sum x_i^2                                                          [-100, 100]
schwefel12        sum_i (sum_{j<=i} x_j)^2                                           [-100, 100]
schwefel221       max_i |x_i|                                                        [-100, 100]
griewank          1 + sum x_i^2 / 4000 - prod cos(x_i / sqrt(i))                     [-600, 600]
elliptic          sum (1e6)^((i-1)/(D-1)) x_i^2                                      [-100, 100]
zakharov          sum x_i^2 + (sum 0.5 i x_i)^2 + (sum 0.5 i x_i)^4                  [-10, 10]
cosmix            0.1 D - (0.1 sum cos(5 pi x_i) - sum x_i^2)                        [-1, 1]
levymontalvo2     0.1 [sin^2(3 pi x_1) + sum_{i<D} (x_i-1)^2 (1 + sin^2(3 pi x_{i+1}))
                  + (x_D-1)^2 (1 + sin^2(2 pi x_D))]                                 [-5, 5]
neumaier3         sum (x_i-1)^2 - sum_{i>=2} x_i x_{i-1}                             [-D^2, D^2]
periodic          1 + sum sin^2(x_i) - 0.1 exp(-sum x_i^2)                           [-10, 10]
michalewicz       -sum sin(x_i) sin^20(i x_i^2 / pi)                                 [0, pi]
alpine            sum |x_i sin(x_i) + 0.1 x_i|                                       [-10, 10]
================  =================================================================  ===============

``reference_optimum`` is descriptive metadata. Nothing in the optimiser reads it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from ._accel import USE_NUMBA, njit
from .errors import ContractViolation

FUNCTION_IDS = (
    "sphere",
    "schwefel12",
    "schwefel221",
    "griewank",
    "elliptic",
    "zakharov",
    "cosmix",
    "levymontalvo2",
    "neumaier3",
    "periodic",
    "michalewicz",
    "alpine",
)

_NAMES = {
    "sphere": "Sphere",
    "schwefel12": "Schwefel 1.2",
    "schwefel221": "Schwefel 2.21",
    "griewank": "Griewank",
    "elliptic": "Elliptic",
    "zakharov": "Zakharov",
    "cosmix": "Inverted cosine mixture",
    "levymontalvo2": "Levy and Montalvo 2",
    "neumaier3": "Neumaier 3",
    "periodic": "Periodic",
    "michalewicz": "Michalewicz",
    "alpine": "Alpine",
}

# Published global minima of Michalewicz (m=10); no closed form exists.
_MICHALEWICZ_OPTIMA = {2: -1.8013034, 5: -4.687658, 10: -9.66015}


# ---------------------------------------------------------------------------
# numpy kernels: X has shape (n, D), result shape (n,)


def _np_sphere(X):
    return np.sum(X * X, axis=1)


def _np_schwefel12(X):
    c = np.cumsum(X, axis=1)
    return np.sum(c * c, axis=1)


def _np_schwefel221(X):
    return np.max(np.abs(X), axis=1)


def _np_griewank(X):
    i = np.arange(1, X.shape[1] + 1)
    return 1.0 + np.sum(X * X, axis=1) / 4000.0 - np.prod(np.cos(X / np.sqrt(i)), axis=1)


def _elliptic_weights(d):
    if d == 1:
        return np.ones(1)
    return 1e6 ** (np.arange(d) / (d - 1))


def _np_elliptic(X):
    return np.sum(_elliptic_weights(X.shape[1]) * X * X, axis=1)


def _np_zakharov(X):
    i = np.arange(1, X.shape[1] + 1)
    s = np.sum(0.5 * i * X, axis=1)
    return np.sum(X * X, axis=1) + s**2 + s**4


def _np_cosmix(X):
    d = X.shape[1]
    return 0.1 * d - (0.1 * np.sum(np.cos(5.0 * np.pi * X), axis=1) - np.sum(X * X, axis=1))


def _np_levymontalvo2(X):
    head = np.sin(3.0 * np.pi * X[:, 0]) ** 2
    body = np.sum((X[:, :-1] - 1.0) ** 2 * (1.0 + np.sin(3.0 * np.pi * X[:, 1:]) ** 2), axis=1)
    last = X[:, -1]
    tail = (last - 1.0) ** 2 * (1.0 + np.sin(2.0 * np.pi * last) ** 2)
    return 0.1 * (head + body + tail)


def _np_neumaier3(X):
    return np.sum((X - 1.0) ** 2, axis=1) - np.sum(X[:, 1:] * X[:, :-1], axis=1)


def _np_periodic(X):
    return 1.0 + np.sum(np.sin(X) ** 2, axis=1) - 0.1 * np.exp(-np.sum(X * X, axis=1))


def _np_michalewicz(X):
    i = np.arange(1, X.shape[1] + 1)
    return -np.sum(np.sin(X) * np.sin(i * X * X / np.pi) ** 20, axis=1)


def _np_alpine(X):
    return np.sum(np.abs(X * np.sin(X) + 0.1 * X), axis=1)


NUMPY_KERNELS: dict[str, Callable[[np.ndarray], np.ndarray]] = {
    "sphere": _np_sphere,
    "schwefel12": _np_schwefel12,
    "schwefel221": _np_schwefel221,
    "griewank": _np_griewank,
    "elliptic": _np_elliptic,
    "zakharov": _np_zakharov,
    "cosmix": _np_cosmix,
    "levymontalvo2": _np_levymontalvo2,
    "neumaier3": _np_neumaier3,
    "periodic": _np_periodic,
    "michalewicz": _np_michalewicz,
    "alpine": _np_alpine,
}


# ---------------------------------------------------------------------------
# numba kernels: explicit row loops, same contract as the numpy ones


@njit(cache=True)
def _nb_sphere(X):
    n, d = X.shape
    out = np.empty(n)
    for r in range(n):
        s = 0.0
        for i in range(d):
            s += X[r, i] * X[r, i]
        out[r] = s
    return out


@njit(cache=True)
def _nb_schwefel12(X):
    n, d = X.shape
    out = np.empty(n)
    for r in range(n):
        s = 0.0
        c = 0.0
        for i in range(d):
            c += X[r, i]
            s += c * c
        out[r] = s
    return out


@njit(cache=True)
def _nb_schwefel221(X):
    n, d = X.shape
    out = np.empty(n)
    for r in range(n):
        m = 0.0
        for i in range(d):
            a = abs(X[r, i])
            if a > m:
                m = a
        out[r] = m
    return out


@njit(cache=True)
def _nb_griewank(X):
    n, d = X.shape
    out = np.empty(n)
    for r in range(n):
        s = 0.0
        p = 1.0
        for i in range(d):
            x = X[r, i]
            s += x * x
            p *= math.cos(x / math.sqrt(i + 1.0))
        out[r] = 1.0 + s / 4000.0 - p
    return out


@njit(cache=True)
def _nb_elliptic(X):
    n, d = X.shape
    w = np.ones(d)
    for i in range(d):
        if d > 1:
            w[i] = 1e6 ** (i / (d - 1.0))
    out = np.empty(n)
    for r in range(n):
        s = 0.0
        for i in range(d):
            s += w[i] * X[r, i] * X[r, i]
        out[r] = s
    return out


@njit(cache=True)
def _nb_zakharov(X):
    n, d = X.shape
    out = np.empty(n)
    for r in range(n):
        s1 = 0.0
        s2 = 0.0
        for i in range(d):
            x = X[r, i]
            s1 += x * x
            s2 += 0.5 * (i + 1.0) * x
        out[r] = s1 + s2**2 + s2**4
    return out


@njit(cache=True)
def _nb_cosmix(X):
    n, d = X.shape
    out = np.empty(n)
    for r in range(n):
        c = 0.0
        s = 0.0
        for i in range(d):
            x = X[r, i]
            c += math.cos(5.0 * math.pi * x)
            s += x * x
        out[r] = 0.1 * d - (0.1 * c - s)
    return out


@njit(cache=True)
def _nb_levymontalvo2(X):
    n, d = X.shape
    out = np.empty(n)
    for r in range(n):
        s = math.sin(3.0 * math.pi * X[r, 0]) ** 2
        for i in range(d - 1):
            s += (X[r, i] - 1.0) ** 2 * (1.0 + math.sin(3.0 * math.pi * X[r, i + 1]) ** 2)
        last = X[r, d - 1]
        s += (last - 1.0) ** 2 * (1.0 + math.sin(2.0 * math.pi * last) ** 2)
        out[r] = 0.1 * s
    return out


@njit(cache=True)
def _nb_neumaier3(X):
    n, d = X.shape
    out = np.empty(n)
    for r in range(n):
        s = 0.0
        for i in range(d):
            s += (X[r, i] - 1.0) ** 2
        for i in range(1, d):
            s -= X[r, i] * X[r, i - 1]
        out[r] = s
    return out


@njit(cache=True)
def _nb_periodic(X):
    n, d = X.shape
    out = np.empty(n)
    for r in range(n):
        s = 0.0
        q = 0.0
        for i in range(d):
            x = X[r, i]
            s += math.sin(x) ** 2
            q += x * x
        out[r] = 1.0 + s - 0.1 * math.exp(-q)
    return out


@njit(cache=True)
def _nb_michalewicz(X):
    n, d = X.shape
    out = np.empty(n)
    for r in range(n):
        s = 0.0
        for i in range(d):
            x = X[r, i]
            s += math.sin(x) * math.sin((i + 1.0) * x * x / math.pi) ** 20
        out[r] = -s
    return out


@njit(cache=True)
def _nb_alpine(X):
    n, d = X.shape
    out = np.empty(n)
    for r in range(n):
        s = 0.0
        for i in range(d):
            x = X[r, i]
            s += abs(x * math.sin(x) + 0.1 * x)
        out[r] = s
    return out


NUMBA_KERNELS: dict[str, Callable[[np.ndarray], np.ndarray]] = {
    "sphere": _nb_sphere,
    "schwefel12": _nb_schwefel12,
    "schwefel221": _nb_schwefel221,
    "griewank": _nb_griewank,
    "elliptic": _nb_elliptic,
    "zakharov": _nb_zakharov,
    "cosmix": _nb_cosmix,
    "levymontalvo2": _nb_levymontalvo2,
    "neumaier3": _nb_neumaier3,
    "periodic": _nb_periodic,
    "michalewicz": _nb_michalewicz,
    "alpine": _nb_alpine,
}

KERNELS = NUMBA_KERNELS if USE_NUMBA else NUMPY_KERNELS


# ---------------------------------------------------------------------------


def _domain(fn_id: str, d: int) -> tuple[float, float]:
    if fn_id in ("sphere", "schwefel12", "schwefel221", "elliptic"):
        return -100.0, 100.0
    if fn_id == "griewank":
        return -600.0, 600.0
    if fn_id in ("zakharov", "periodic", "alpine"):
        return -10.0, 10.0
    if fn_id == "cosmix":
        return -1.0, 1.0
    if fn_id == "levymontalvo2":
        return -5.0, 5.0
    if fn_id == "neumaier3":
        return -float(d * d), float(d * d)
    if fn_id == "michalewicz":
        return 0.0, math.pi
    raise KeyError(fn_id)


def _known_optimum(fn_id: str, d: int) -> tuple[float | None, np.ndarray | None]:
    if fn_id == "levymontalvo2":
        return 0.0, np.ones(d)
    if fn_id == "neumaier3":
        i = np.arange(1, d + 1, dtype=float)
        return -d * (d + 4) * (d - 1) / 6.0, i * (d + 1 - i)
    if fn_id == "periodic":
        return 0.9, np.zeros(d)
    if fn_id == "michalewicz":
        return _MICHALEWICZ_OPTIMA.get(d), None
    return 0.0, np.zeros(d)


@dataclass(frozen=True)
class BenchmarkFn:
    id: str
    name: str
    dimension: int
    lower_bound: np.ndarray = field(repr=False)
    upper_bound: np.ndarray = field(repr=False)
    reference_optimum: float | None
    optimizer: np.ndarray | None = field(default=None, repr=False)

    def __call__(self, x) -> float:
        return evaluate(self, x)


def get_function(fn_id: str, dimension: int) -> BenchmarkFn:
    """Build the descriptor for ``fn_id`` in ``dimension`` variables."""
    if fn_id not in FUNCTION_IDS:
        raise ContractViolation(
            f"unknown function {fn_id!r}; valid names: {', '.join(FUNCTION_IDS)}"
        )
    if dimension < 1:
        raise ContractViolation(f"dimension must be positive, got {dimension}")
    lo, hi = _domain(fn_id, dimension)
    opt, xstar = _known_optimum(fn_id, dimension)
    lb = np.full(dimension, lo)
    ub = np.full(dimension, hi)
    lb.flags.writeable = False
    ub.flags.writeable = False
    return BenchmarkFn(fn_id, _NAMES[fn_id], dimension, lb, ub, opt, xstar)


def list_functions(dimension: int = 40) -> list[BenchmarkFn]:
    return [get_function(f, dimension) for f in FUNCTION_IDS]


def bounds(fn: BenchmarkFn) -> tuple[np.ndarray, np.ndarray]:
    return fn.lower_bound, fn.upper_bound


def evaluate_batch(fn: BenchmarkFn, X, *, kernels=None) -> np.ndarray:
    """Evaluate every row of ``X``; returns a float array of length ``len(X)``."""
    X = np.ascontiguousarray(X, dtype=np.float64)
    if X.ndim != 2 or X.shape[1] != fn.dimension:
        raise ContractViolation(
            f"{fn.id}: expected shape (n, {fn.dimension}), got {X.shape}"
        )
    if not np.all(np.isfinite(X)):
        raise ContractViolation(f"{fn.id}: non-finite input component")
    return (kernels or KERNELS)[fn.id](X)


def evaluate(fn: BenchmarkFn, x) -> float:
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 1:
        raise ContractViolation(f"{fn.id}: expected a vector, got shape {x.shape}")
    return float(evaluate_batch(fn, x[None, :])[0])
