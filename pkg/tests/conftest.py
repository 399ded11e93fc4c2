import math

import mpmath as mp
import numpy as np
import pytest


def mp_divided_difference(y, dps=250):
    """J(y) as the divided difference of exp, in high precision (distinct nodes)."""
    with mp.workdps(dps):
        ys = sorted(mp.mpf(float(v)) for v in y)
        if len(set(ys)) != len(ys):
            raise ValueError("reference needs distinct nodes")
        tab = [mp.exp(v) for v in ys]
        n = len(ys)
        for k in range(1, n):
            tab = [(tab[i + 1] - tab[i]) / (ys[i + k] - ys[i]) for i in range(n - k)]
        return tab[0]


def rel_err(value, ref):
    return float(abs(mp.mpf(value) - ref) / abs(ref))


@pytest.fixture
def rng():
    return np.random.default_rng(20081)


@pytest.fixture
def mp_ref():
    return mp_divided_difference


E = math.e


def mle_instance_d1():
    """Single 1-simplex [0, 1] with 200 seeded uniform points."""
    from simplexj.mle import Triangulation, assign_sample

    t = Triangulation(np.array([[0.0], [1.0]]), np.array([[0, 1]]))
    pts = np.random.default_rng(7).random((200, 1))
    return t, assign_sample(t, pts)


def mle_instance_d2():
    """Unit square split into two triangles, 200 seeded Beta(2, 1.5) points."""
    from simplexj.mle import Triangulation, assign_sample

    verts = np.array([[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]])
    t = Triangulation(verts, np.array([[0, 1, 2], [0, 2, 3]]))
    pts = np.random.default_rng(11).beta(2.0, 1.5, size=(200, 2))
    return t, assign_sample(t, pts)


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
