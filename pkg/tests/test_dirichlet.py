import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from simplexj import LengthMismatch, NonPositiveParameter, Unsupported
from simplexj.dirichlet import (
    DirichletParams,
    MultiIndex,
    beta_integral,
    dirichlet_moment,
    make_rng,
    mc_estimate_j,
    sample_dirichlet,
    simplex_power_integral,
)
from simplexj.jfun import eval_j


class TestParams:
    def test_validation(self):
        with pytest.raises(NonPositiveParameter):
            DirichletParams((1.0, 0.0))
        with pytest.raises(NonPositiveParameter):
            DirichletParams((1.0, -2.0))
        with pytest.raises(ValueError):
            DirichletParams(())
        with pytest.raises(ValueError):
            MultiIndex((1, -1))

    def test_uniform(self):
        p = DirichletParams.uniform(3)
        assert p.a == (1.0,) * 4 and p.a_plus == 4.0


class TestMoments:
    def test_first_moment(self):
        for d in range(7):
            k = [1] + [0] * d
            assert dirichlet_moment(DirichletParams.uniform(d), MultiIndex(k), exact=True) == Fraction(1, d + 1)

    def test_general_parameters(self):
        p = DirichletParams((0.5, 2.5, 1.0))
        # E B_0 = a_0 / a_+
        assert dirichlet_moment(p, MultiIndex((1, 0, 0))) == pytest.approx(0.5 / 4.0, rel=1e-15)
        # E B_0 B_1 = a_0 a_1 / (a_+ (a_+ + 1))
        assert dirichlet_moment(p, MultiIndex((1, 1, 0))) == pytest.approx(0.5 * 2.5 / 20, rel=1e-15)

    def test_lgamma_path(self):
        p = DirichletParams((200.0, 100.0))
        got = dirichlet_moment(p, MultiIndex((3, 0)))
        exact = dirichlet_moment(p, MultiIndex((3, 0)), exact=True)
        assert got == pytest.approx(float(exact), rel=1e-11)

    def test_length_mismatch(self):
        with pytest.raises(LengthMismatch):
            dirichlet_moment(DirichletParams.uniform(2), MultiIndex((1, 0)))

    def test_exact_needs_integers(self):
        with pytest.raises(ValueError):
            dirichlet_moment(DirichletParams((0.5, 1.0)), MultiIndex((1, 0)), exact=True)

    @settings(max_examples=100, deadline=None)
    @given(st.lists(st.integers(1, 6), min_size=2, max_size=5), st.data())
    def test_sums_to_lower_moment(self, a, data):
        # sum_i E(B^k B_i) = E(B^k) since sum B_i = 1
        k = data.draw(st.lists(st.integers(0, 3), min_size=len(a), max_size=len(a)))
        p = DirichletParams(tuple(float(v) for v in a))
        total = 0
        for i in range(len(a)):
            k2 = list(k)
            k2[i] += 1
            total += dirichlet_moment(p, MultiIndex(k2), exact=True)
        assert total == dirichlet_moment(p, MultiIndex(k), exact=True)


class TestSimplexIntegral:
    def test_volume(self):
        for d in range(1, 8):
            assert simplex_power_integral([1] * (d + 1), exact=True) == Fraction(1, math.factorial(d))

    def test_beta(self):
        assert simplex_power_integral([3, 2], exact=True) == Fraction(2, 24)
        assert simplex_power_integral([0.5, 0.5]) == pytest.approx(math.pi, rel=1e-14)

    def test_bad(self):
        with pytest.raises(NonPositiveParameter):
            simplex_power_integral([1, 0])

    def test_beta_integral(self):
        for ell in range(8):
            for m in range(8):
                ref = math.factorial(ell) * math.factorial(m) / math.factorial(ell + m + 1)
                assert beta_integral(ell, m) == pytest.approx(ref, rel=1e-15)
        with pytest.raises(Unsupported):
            beta_integral(20, 11)


class TestSampling:
    def test_rows_sum_to_one(self):
        b = sample_dirichlet(DirichletParams((1.0, 2.0, 0.3)), 2000, seed=11)
        assert b.shape == (2000, 3)
        assert np.all(b >= 0)
        np.testing.assert_allclose(b.sum(axis=1), 1.0, atol=4e-16)

    def test_reproducible(self):
        p = DirichletParams.uniform(3)
        a = sample_dirichlet(p, 100, seed=5)
        assert np.array_equal(a, sample_dirichlet(p, 100, seed=5))
        assert not np.array_equal(a, sample_dirichlet(p, 100, seed=6))

    def test_seed_range(self):
        make_rng(2**64 - 1)
        with pytest.raises(ValueError):
            make_rng(2**64)
        with pytest.raises(ValueError):
            make_rng(-1)

    def test_mean(self):
        p = DirichletParams((1.0, 2.0, 3.0))
        b = sample_dirichlet(p, 200_000, seed=1)
        np.testing.assert_allclose(b.mean(axis=0), np.array(p.a) / 6, atol=3e-3)


class TestMcEstimate:
    def test_constant_input_exact(self):
        est = mc_estimate_j((2.0, 2.0, 2.0), 1000, seed=1)
        assert est.value == pytest.approx(math.exp(2) / 2, rel=1e-15)
        assert est.std_error == 0.0

    def test_close_to_exact(self):
        y = (0.3, -1.2, 2.0)
        est = mc_estimate_j(y, 200_000, seed=3)
        assert abs(est.value - eval_j(y)) <= 5 * est.std_error
        assert est.n_samples == 200_000 and est.seed == 3

    def test_n_validation(self):
        with pytest.raises(ValueError):
            mc_estimate_j((0.0, 1.0), 1, seed=0)
