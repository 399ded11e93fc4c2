import math

import numpy as np
import pytest

from simplexj import ToleranceNotMet, Unsupported
from simplexj.oracle import QuadConfig, adaptive_quad, fd_grad, gauss_kronrod_15, quad_j, quad_j_err

from conftest import mp_divided_difference


def _plain(fn):
    return lambda u: (fn(u), np.zeros_like(u))


class TestRule:
    def test_weights(self):
        nodes, kw, gw = gauss_kronrod_15()
        assert nodes.shape == (15,)
        assert math.fsum(kw) == pytest.approx(2.0, rel=1e-15)
        assert math.fsum(gw) == pytest.approx(2.0, rel=1e-15)
        assert np.count_nonzero(gw) == 7

    @pytest.mark.parametrize("p", range(0, 23))
    def test_kronrod_exactness(self, p):
        nodes, kw, gw = gauss_kronrod_15()
        exact = (1 - (-1) ** (p + 1)) / (p + 1)
        assert float(kw @ nodes**p) == pytest.approx(exact, abs=1e-15)
        if p <= 13:
            assert float(gw @ nodes**p) == pytest.approx(exact, abs=1e-15)


class TestAdaptive:
    def test_smooth(self):
        val, err = adaptive_quad(_plain(np.exp), 0.0, 1.0)
        assert val == pytest.approx(math.e - 1, rel=1e-15)
        assert err < 1e-12

    def test_sqrt(self):
        val, _ = adaptive_quad(_plain(np.sqrt), 0.0, 1.0)
        assert val == pytest.approx(2 / 3, rel=1e-12)

    def test_depth_limit(self):
        with pytest.raises(ToleranceNotMet):
            adaptive_quad(_plain(lambda u: 1.0 / np.sqrt(np.abs(u - 0.3) + 1e-300)), 0.0, 1.0,
                          QuadConfig(max_depth=3))

    def test_config_validation(self):
        with pytest.raises(ValueError):
            QuadConfig(rel_tol=0.0)
        with pytest.raises(ValueError):
            QuadConfig(max_depth=61)


class TestQuadJ:
    def test_frozen_values(self):
        assert quad_j((0.0, 1.0, 2.0)) == pytest.approx(1.476246221006279878, rel=1e-12)
        assert quad_j((0.0, 1.0, 1.0)) == pytest.approx(1.0, rel=1e-12)
        assert quad_j((0.0, 0.0, 0.0, 1.0)) == pytest.approx(0.2182818284590452354, rel=1e-11)

    @pytest.mark.parametrize("d", [1, 2, 3])
    def test_against_mpmath(self, d):
        rnd = np.random.default_rng(d)
        for _ in range(4):
            y = rnd.uniform(-5, 5, d + 1)
            val, err = quad_j_err(y)
            ref = mp_divided_difference(y)
            assert float(abs(val - ref) / ref) < 1e-12
            assert err < 1e-10 * abs(val)

    def test_d4(self):
        y = (0.3, -1.0, 2.0, 0.7, -2.5)
        assert quad_j(y) == pytest.approx(float(mp_divided_difference(y)), rel=1e-11)

    def test_unsupported(self):
        with pytest.raises(Unsupported):
            quad_j((1.0,))
        with pytest.raises(Unsupported):
            quad_j((0.0,) * 6)


def test_fd_grad():
    g = fd_grad(lambda v: float(v @ v), np.array([1.0, -2.0]))
    np.testing.assert_allclose(g, [2.0, -4.0], rtol=1e-9)
    with pytest.raises(ValueError):
        fd_grad(lambda v: 0.0, [1.0], h=0.0)
