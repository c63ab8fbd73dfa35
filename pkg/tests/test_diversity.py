import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from graphea import diversity as dv
from graphea.errors import ContractViolation


def naive_diversity(X):
    pairs = list(itertools.combinations(range(len(X)), 2))
    return sum(math.dist(X[i], X[j]) for i, j in pairs) / len(pairs)


def test_examples():
    assert dv.population_diversity([[0, 0], [3, 4]]) == 5.0
    assert dv.population_diversity(np.ones((6, 3))) == 0.0
    assert dv.population_diversity([[0], [1], [2]]) == pytest.approx(4 / 3, rel=1e-15)


def test_needs_two_individuals():
    with pytest.raises(ContractViolation):
        dv.population_diversity([[1.0, 2.0]])


@pytest.mark.parametrize("kernel", [dv._nb_mean_pairwise, dv._np_mean_pairwise], ids=["numba", "numpy"])
def test_both_kernels_match_oracle(kernel, rng):
    for _ in range(50):
        n, d = rng.integers(2, 11), rng.integers(1, 6)
        X = rng.normal(size=(n, d)) * 10
        assert kernel(X) == pytest.approx(naive_diversity(X.tolist()), rel=1e-12, abs=1e-12)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**32 - 1), st.just(0.0) | st.floats(1e-6, 50))
def test_scaling_and_translation(seed, c):
    rng = np.random.default_rng(seed)
    X = rng.normal(size=(int(rng.integers(2, 12)), int(rng.integers(1, 6))))
    base = dv.population_diversity(X)
    assert dv.population_diversity(c * X) == pytest.approx(c * base, rel=1e-12, abs=1e-300)
    shift = rng.normal(size=X.shape[1]) * 100
    assert dv.population_diversity(X + shift) == pytest.approx(base, rel=1e-9)


def test_delta():
    assert dv.diversity_delta(1.0, 1.2, 1e-12) == pytest.approx(0.2)
    for x in (0.0, 1e-20, 3.0):
        assert dv.diversity_delta(x, x) == 0.0
    assert dv.diversity_delta(0.0, 0.5, 1e-12) == pytest.approx(5e11)
    assert dv.diversity_delta(2.0, 1.0) == -0.5
