import math

import numpy as np
import pytest

from simplexj import Degenerate, NotConverged, UnassignedPoint
from simplexj.mle import (
    Triangulation,
    assign_sample,
    eval_density,
    fit,
    integral_exp_psi,
    objective,
    objective_and_grad,
    simplex_det,
)
from simplexj.oracle import fd_grad

from conftest import mle_instance_d1, mle_instance_d2


def unit_triangle():
    return Triangulation(np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]]), np.array([[0, 1, 2]]))


class TestGeometry:
    def test_det(self):
        assert simplex_det([[0, 0], [1, 0], [0, 1]]) == pytest.approx(1.0)
        assert simplex_det([[0, 0], [0, 1], [1, 0]]) == pytest.approx(-1.0)
        assert simplex_det([[0.0], [2.5]]) == 2.5

    def test_degenerate(self):
        with pytest.raises(Degenerate):
            simplex_det([[0, 0], [1, 1], [2, 2]])
        with pytest.raises(Degenerate):
            Triangulation(np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]]), np.array([[0, 1, 1]]))

    def test_bad_indices(self):
        with pytest.raises(ValueError):
            Triangulation(np.array([[0.0], [1.0]]), np.array([[0, 2]]))

    def test_volume_and_locate(self):
        t, _ = mle_instance_d2()
        assert t.volume == pytest.approx(1.0)
        j, lam = t.locate([0.8, 0.1])
        assert j == 0 and lam.sum() == pytest.approx(1.0)
        # a point on the shared diagonal goes to the lower index
        assert t.locate([0.5, 0.5])[0] == 0
        assert t.locate([1.5, 0.5]) is None

    def test_barycentric_reproduces_point(self):
        t = unit_triangle()
        x = np.array([0.2, 0.3])
        lam = t.barycentric(0, x)
        np.testing.assert_allclose(lam @ t.vertices, x, atol=1e-15)


class TestSample:
    def test_outside(self):
        with pytest.raises(UnassignedPoint):
            assign_sample(unit_triangle(), [[0.9, 0.9]])

    def test_empty(self):
        with pytest.raises(UnassignedPoint):
            assign_sample(unit_triangle(), np.empty((0, 2)))

    def test_weights(self):
        s = assign_sample(unit_triangle(), [[0.1, 0.1], [0.2, 0.2]], weights=[1.0, 3.0])
        np.testing.assert_allclose(s.weights, [0.25, 0.75])
        assert s.linear.sum() == pytest.approx(1.0)
        with pytest.raises(ValueError):
            assign_sample(unit_triangle(), [[0.1, 0.1]], weights=[0.0])


class TestObjective:
    def test_integral_constant(self):
        t, _ = mle_instance_d2()
        assert integral_exp_psi(t, np.zeros(4)) == pytest.approx(1.0, rel=1e-15)
        assert integral_exp_psi(t, np.full(4, 2.0)) == pytest.approx(math.exp(2.0), rel=1e-15)

    def test_integral_linear(self):
        # psi(x) = x on [0, 1]: integral e - 1
        t = Triangulation(np.array([[0.0], [1.0]]), np.array([[0, 1]]))
        assert integral_exp_psi(t, [0.0, 1.0]) == pytest.approx(math.e - 1, rel=1e-15)

    def test_overflow(self):
        t, s = mle_instance_d1()
        assert integral_exp_psi(t, [1e4, 0.0]) == math.inf
        assert objective_and_grad(t, s, np.array([1e4, 0.0])) == (-math.inf, None)

    @pytest.mark.parametrize("instance", [mle_instance_d1, mle_instance_d2])
    def test_gradient_matches_fd(self, instance):
        t, s = instance()
        rnd = np.random.default_rng(0)
        for _ in range(3):
            psi = rnd.normal(size=t.n_vertices)
            _, g = objective_and_grad(t, s, psi)
            fd = fd_grad(lambda p: objective(t, s, p), psi)
            np.testing.assert_allclose(g, fd, rtol=1e-6, atol=1e-9)


class TestFit:
    @pytest.mark.parametrize("instance", [mle_instance_d1, mle_instance_d2])
    def test_properties(self, instance):
        t, s = instance()
        res = fit(t, s)
        assert res.converged
        assert res.grad_norm <= 1e-8
        assert abs(res.mass - 1.0) <= 1e-6
        assert all(b >= a for a, b in zip(res.trace, res.trace[1:]))
        assert res.loglik == pytest.approx(float(s.linear @ res.psi))

    def test_uniform_data_fits_near_uniform(self):
        t = Triangulation(np.array([[0.0], [1.0]]), np.array([[0, 1]]))
        s = assign_sample(t, [[0.25], [0.75]])
        res = fit(t, s)
        np.testing.assert_allclose(res.psi, 0.0, atol=1e-8)

    def test_not_converged(self):
        t, s = mle_instance_d2()
        res = fit(t, s, max_iter=2)
        assert not res.converged and res.iterations == 2
        with pytest.raises(NotConverged):
            fit(t, s, max_iter=2, strict=True)

    def test_density(self):
        t, s = mle_instance_d1()
        res = fit(t, s)
        val, inside = eval_density(t, res.psi, [0.5])
        assert inside and val == pytest.approx(math.exp(res.psi.mean()), rel=1e-12)
        assert eval_density(t, res.psi, [2.0]) == (0.0, False)
