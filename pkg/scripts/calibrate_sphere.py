"""Pilot run that fixes the Sphere sanity threshold used by the acceptance suite.

Runs adaptive mode on Sphere (D=10, 20,000 evaluations, pop 50) with seeds
10_000..10_029, which the acceptance test never uses, and prints the median
best fitness. The acceptance threshold is ten times this median.
"""

import numpy as np

from graphea.engine import EngineConfig, run

PILOT_SEEDS = range(10_000, 10_030)

if __name__ == "__main__":
    best = [run(EngineConfig(function="sphere", dim=10, budget=20_000, pop=50, seed=s)).best_fitness
            for s in PILOT_SEEDS]
    med = float(np.median(best))
    print(f"pilot median best_fitness: {med:.17g}")
    print(f"threshold (10x):           {10 * med:.17g}")
