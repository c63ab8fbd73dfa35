"""Compare the numba kernels against the numpy fallback.

Kernel timings call both implementations directly in one process. The
end-to-end timing runs one engine run per backend in a subprocess, since the
backend is fixed at import time by ``GRAPHEA_BACKEND``.

    python benchmarks/bench_backends.py [--repeat 200] [--no-e2e]
"""

import argparse
import os
import subprocess
import sys
import timeit

import numpy as np

from graphea import benchmarks as bm
from graphea import diversity as dv

E2E = (
    "import time; from graphea import BACKEND; from graphea.engine import EngineConfig, run;"
    "run(EngineConfig(budget=200));"
    "t = time.perf_counter(); run(EngineConfig(function='{fn}', seed=0));"
    "print(BACKEND, time.perf_counter() - t)"
)


def bench_kernels(repeat):
    rng = np.random.default_rng(0)
    print(f"{'kernel':<16} {'numpy us':>10} {'numba us':>10} {'speedup':>8}")
    for fn_id in bm.FUNCTION_IDS:
        fn = bm.get_function(fn_id, 40)
        X = fn.lower_bound + (fn.upper_bound - fn.lower_bound) * rng.random((50, 40))
        bm.NUMBA_KERNELS[fn_id](X)
        t_np = timeit.timeit(lambda: bm.NUMPY_KERNELS[fn_id](X), number=repeat) / repeat * 1e6
        t_nb = timeit.timeit(lambda: bm.NUMBA_KERNELS[fn_id](X), number=repeat) / repeat * 1e6
        print(f"{fn_id:<16} {t_np:10.1f} {t_nb:10.1f} {t_np / t_nb:8.1f}")
    X = rng.random((50, 40))
    dv._nb_mean_pairwise(X)
    t_np = timeit.timeit(lambda: dv._np_mean_pairwise(X), number=repeat) / repeat * 1e6
    t_nb = timeit.timeit(lambda: dv._nb_mean_pairwise(X), number=repeat) / repeat * 1e6
    print(f"{'diversity':<16} {t_np:10.1f} {t_nb:10.1f} {t_np / t_nb:8.1f}")


def bench_end_to_end(fn_id):
    print(f"\nend-to-end run ({fn_id}, D=40, 40,000 evaluations):")
    for backend in ("numpy", "numba"):
        env = {**os.environ, "GRAPHEA_BACKEND": backend}
        out = subprocess.run([sys.executable, "-c", E2E.format(fn=fn_id)], env=env,
                             capture_output=True, text=True, check=True)
        name, secs = out.stdout.split()
        print(f"  {name:<6} {float(secs):7.2f} s")


if __name__ == "__main__":
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=200)
    ap.add_argument("--function", default="griewank")
    ap.add_argument("--no-e2e", action="store_true")
    args = ap.parse_args()
    bench_kernels(args.repeat)
    if not args.no_e2e:
        bench_end_to_end(args.function)
