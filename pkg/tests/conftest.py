from collections import deque

import numpy as np
import pytest


class ScriptedRng:
    """Stand-in for ``numpy.random.Generator`` that replays fixed draws.

    Each method pops the next queued value for that method name, so a test
    can force exactly the draws an operator will see.
    """

    def __init__(self, **queues):
        self.queues = {k: deque(v) for k, v in queues.items()}

    def _next(self, name):
        return self.queues[name].popleft()

    def random(self, size=None):
        return np.asarray(self._next("random"), dtype=float) if size is not None else float(self._next("random"))

    def standard_normal(self, size=None):
        return np.array(self._next("standard_normal"), dtype=float)

    def integers(self, low, high=None, size=None):
        return self._next("integers")

    def choice(self, a, size=None, replace=True, p=None):
        return self._next("choice")

    def permutation(self, n):
        return np.asarray(self._next("permutation"))


@pytest.fixture
def scripted():
    return ScriptedRng


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    lines = []
    for outcome in ("passed", "failed", "error"):
        for rep in terminalreporter.stats.get(outcome, []):
            nodeid = getattr(rep, "nodeid", "")
            if "test_acceptance.py" in nodeid and rep.when == "call":
                lines.append((nodeid, outcome))
    if lines:
        terminalreporter.section("acceptance criteria")
        for nodeid, outcome in sorted(lines):
            mark = "PASS" if outcome == "passed" else "FAIL"
            terminalreporter.write_line(f"{mark}  {nodeid.split('::')[-1]}")
