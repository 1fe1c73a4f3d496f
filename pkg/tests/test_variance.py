"""Covariance kernel and variance estimator: hand oracles and cross-checks."""

import numpy as np
import pytest
from numpy.testing import assert_allclose

from survcmp.datasets import load_tongue
from survcmp.survival import Sample, kaplan_meier
from survcmp.variance import (
    cov_kernel,
    normalized_kernel_value,
    sigma2_jk,
    variance_estimate,
)

K = 10.0


def _random_censored(rng, n, k=K):
    times = np.round(rng.uniform(0.5, k - 0.5, n), 2)
    events = rng.random(n) < 0.6
    if not events.any():
        events[0] = True
    return Sample(times, events, k)


def _brute_force_jk(kernel_j, fit_k):
    # direct double sum over the jump pairs of the integrating curve
    sf = fit_k.survival
    total = 0.0
    for u, du in zip(sf.jump_times, sf.deltas):
        for v, dv in zip(sf.jump_times, sf.deltas):
            total += normalized_kernel_value(kernel_j, u, v) * du * dv
    return total


class TestHandOracle:
    def setup_method(self):
        self.s1 = Sample([1.0, 2.0], [True, True], 3.0)
        self.s2 = Sample([1.5], [True], 3.0)

    def test_sigma2_12_quarter_product(self):
        kernel1 = cov_kernel(self.s1)
        fit2 = kaplan_meier(self.s2)
        assert_allclose(sigma2_jk(kernel1, fit2), 0.125, atol=1e-14)

    def test_sigma2_21_vanishes_single_jump(self):
        kernel2 = cov_kernel(self.s2)
        fit1 = kaplan_meier(self.s1)
        assert_allclose(sigma2_jk(kernel2, fit1), 0.0, atol=1e-14)

    def test_combined_scaling(self):
        est = variance_estimate(self.s1, self.s2)
        assert_allclose(est.sigma2_12, 0.125, atol=1e-14)
        assert_allclose(est.sigma2_21, 0.0, atol=1e-14)
        # (n1 n2 / n) * 0.125 = (2/3) * 0.125
        assert_allclose(est.sigma2, 1.0 / 12.0, atol=1e-14)
        assert (est.n1, est.n2) == (2, 1)

    def test_normalized_kernel_point_value(self):
        kernel1 = cov_kernel(self.s1)
        assert_allclose(normalized_kernel_value(kernel1, 1.0, 1.0), 0.03125, atol=1e-14)


class TestBruteForceAgreement:
    def test_double_sum_matches_sigma2_jk(self):
        rng = np.random.default_rng(808)
        worst = 0.0
        for _ in range(40):
            s1 = _random_censored(rng, int(rng.integers(3, 20)))
            s2 = _random_censored(rng, int(rng.integers(3, 20)))
            k1, k2 = cov_kernel(s1), cov_kernel(s2)
            f1, f2 = kaplan_meier(s1), kaplan_meier(s2)
            worst = max(worst, abs(sigma2_jk(k1, f2) - _brute_force_jk(k1, f2)))
            worst = max(worst, abs(sigma2_jk(k2, f1) - _brute_force_jk(k2, f1)))
        assert worst <= 1e-12

    def test_kernel_symmetric_in_arguments(self):
        rng = np.random.default_rng(909)
        s = _random_censored(rng, 12)
        kern = cov_kernel(s)
        pts = rng.uniform(0.5, 9.5, 8)
        for u in pts:
            for v in pts:
                assert_allclose(
                    normalized_kernel_value(kern, u, v),
                    normalized_kernel_value(kern, v, u),
                    atol=1e-14,
                )


class TestProperties:
    def test_nonnegative_components(self):
        rng = np.random.default_rng(111)
        for _ in range(60):
            s1 = _random_censored(rng, int(rng.integers(3, 25)))
            s2 = _random_censored(rng, int(rng.integers(3, 25)))
            est = variance_estimate(s1, s2)
            assert est.sigma2_12 >= -1e-14
            assert est.sigma2_21 >= -1e-14
            assert est.sigma2 >= -1e-14

    def test_variance_shrinks_with_sample_size(self):
        # implied variance of p_hat should drop roughly like 1/n
        rng = np.random.default_rng(222)
        t1 = rng.exponential(2.0, 400)
        t2 = rng.exponential(3.0, 400)

        def implied(m):
            s1 = Sample(np.minimum(t1[:m], K), t1[:m] <= K, K)
            s2 = Sample(np.minimum(t2[:m], K), t2[:m] <= K, K)
            est = variance_estimate(s1, s2)
            n = est.n1 + est.n2
            return est.sigma2 / n

        v_small, v_big = implied(50), implied(400)
        assert v_big < v_small

    def test_mismatched_horizons_rejected(self):
        s1 = Sample([1.0], [True], 5.0)
        s2 = Sample([1.0], [True], 6.0)
        with pytest.raises(ValueError, match="incompatible horizons"):
            variance_estimate(s1, s2)


class TestTongueValues:
    def test_component_values_frozen(self):
        s1, s2 = load_tongue()
        est = variance_estimate(s1, s2)
        assert_allclose(est.sigma2_12, 0.0014570610156, atol=1e-10)
        assert_allclose(est.sigma2_21, 0.0026292638423, atol=1e-10)
        n1, n2 = est.n1, est.n2
        scale = n1 * n2 / (n1 + n2)
        assert_allclose(est.sigma2, scale * (est.sigma2_12 + est.sigma2_21), atol=1e-14)
        assert_allclose(np.sqrt(est.sigma2), 0.2727106752844248, atol=1e-12)
