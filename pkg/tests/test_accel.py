import os
import subprocess
import sys

import pytest


def backend_under(value):
    env = {**os.environ, "GRAPHEA_BACKEND": value}
    return subprocess.run([sys.executable, "-c", "import graphea; print(graphea.BACKEND)"],
                          env=env, capture_output=True, text=True)


@pytest.mark.parametrize("value", ["numpy", "numba", "NumPy "])
def test_env_flag_selects_backend(value):
    out = backend_under(value)
    assert out.returncode == 0
    assert out.stdout.strip() == value.strip().lower()


def test_unknown_backend_rejected():
    out = backend_under("cuda")
    assert out.returncode != 0
    assert "GRAPHEA_BACKEND" in out.stderr
