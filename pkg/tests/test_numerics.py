"""Tests for the numerical kernel."""

import math

import numpy as np
import pytest
from scipy import integrate, stats

from irsnoma._types import ConfigError, DomainError
from irsnoma.numerics import (
    RandomStream,
    bessel_k_int,
    gamma_int,
    null_space,
    orthonormal_columns,
    sample_cn_matrix,
)


def _bessel_k_quadrature(n, z):
    """K_n(z) from its integral representation, int_0^inf exp(-z cosh t) cosh(n t) dt."""

    def integrand(t):
        damping = z * math.cosh(t)
        return 0.5 * (math.exp(n * t - damping) + math.exp(-n * t - damping))

    # the integrand peaks near sinh(t) = n / z and is negligible 8 beyond it
    peak = math.asinh(max(n, 1) / z)
    head, _ = integrate.quad(integrand, 0.0, peak, epsabs=0.0, epsrel=1e-13, limit=200)
    tail, _ = integrate.quad(integrand, peak, peak + 8.0, epsabs=0.0, epsrel=1e-13, limit=200)
    return head + tail


class TestBesselK:
    @pytest.mark.parametrize("n", range(9))
    @pytest.mark.parametrize("z", [1e-4, 1e-3, 0.01, 0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 20.0])
    def test_matches_integral_representation(self, n, z):
        assert bessel_k_int(n, z) == pytest.approx(_bessel_k_quadrature(n, z), rel=1e-10)

    @pytest.mark.parametrize("n", [2, 3, 5, 8])
    @pytest.mark.parametrize("z", [1e-3, 1e-4, 1e-6])
    def test_small_argument_power_law(self, n, z):
        # K_n(z) ~ (n - 1)! / 2 * (2 / z)^n
        ratio = bessel_k_int(n, z) * (z / 2) ** n / (math.factorial(n - 1) / 2)
        assert abs(ratio - 1.0) < 1e-2

    @pytest.mark.parametrize("z", [1e-3, 1e-4, 1e-6])
    def test_small_argument_order_one(self, z):
        expected = 1.0 / z + z / 2 * math.log(z / 2)
        assert bessel_k_int(1, z) == pytest.approx(expected, rel=1e-2)

    def test_known_values(self):
        assert bessel_k_int(0, 1.0) == pytest.approx(0.42102443824070834, rel=1e-12)
        assert bessel_k_int(1, 1.0) == pytest.approx(0.6019072301972346, rel=1e-12)

    @pytest.mark.parametrize("z", [0.05, 0.7, 3.0, 25.0])
    def test_recurrence(self, z):
        # K_{n+1}(z) = K_{n-1}(z) + (2n / z) K_n(z)
        for n in range(1, 6):
            lhs = bessel_k_int(n + 1, z)
            rhs = bessel_k_int(n - 1, z) + 2 * n / z * bessel_k_int(n, z)
            assert lhs == pytest.approx(rhs, rel=1e-10)

    def test_positive_and_decreasing(self):
        values = [bessel_k_int(2, z) for z in (0.5, 1.0, 2.0, 4.0)]
        assert all(v > 0 for v in values)
        assert values == sorted(values, reverse=True)

    @pytest.mark.parametrize("z", [0.0, -1.0, math.inf, math.nan])
    def test_rejects_bad_argument(self, z):
        with pytest.raises(DomainError):
            bessel_k_int(1, z)

    @pytest.mark.parametrize("n", [-1, 1.5, True])
    def test_rejects_bad_order(self, n):
        with pytest.raises(DomainError):
            bessel_k_int(n, 1.0)


class TestGamma:
    def test_factorials(self):
        assert gamma_int(1) == 1.0
        assert gamma_int(5) == 24.0
        assert gamma_int(21) == 2432902008176640000.0

    def test_large_argument(self):
        assert gamma_int(30) == pytest.approx(math.factorial(29), rel=1e-12)

    def test_overflow_is_inf(self):
        assert gamma_int(200) == math.inf

    @pytest.mark.parametrize("n", [0, -3])
    def test_rejects_non_positive(self, n):
        with pytest.raises(DomainError):
            gamma_int(n)


class TestRandomStream:
    def test_same_stream_same_draws(self):
        a = sample_cn_matrix(3, 2, RandomStream(5, 2))
        b = sample_cn_matrix(3, 2, RandomStream(5, 2))
        np.testing.assert_array_equal(a, b)

    def test_distinct_indices_differ(self):
        a = sample_cn_matrix(3, 2, RandomStream(5, 0))
        b = sample_cn_matrix(3, 2, RandomStream(5, 1))
        assert not np.allclose(a, b)

    def test_child(self):
        assert RandomStream(9).child(4) == RandomStream(9, 4)

    @pytest.mark.parametrize("seed", [-1, 2**64])
    def test_rejects_out_of_range_seed(self, seed):
        with pytest.raises(ConfigError):
            RandomStream(seed)

    def test_accepts_generator(self):
        rng = np.random.default_rng(0)
        assert sample_cn_matrix(2, 2, rng).shape == (2, 2)


class TestSampleCN:
    def test_moments(self, stream):
        x = sample_cn_matrix(200, 500, stream)
        assert abs(x.mean()) < 0.01
        assert np.mean(np.abs(x) ** 2) == pytest.approx(1.0, abs=0.01)
        assert np.var(x.real) == pytest.approx(0.5, abs=0.01)
        assert np.var(x.imag) == pytest.approx(0.5, abs=0.01)

    def test_power_is_exponential(self):
        x = sample_cn_matrix(1, 100_000, RandomStream(45))
        assert stats.kstest(np.abs(x.ravel()) ** 2, "expon").pvalue > 0.01

    def test_batch_shape(self, stream):
        assert sample_cn_matrix(3, 4, stream, size=6).shape == (6, 3, 4)

    def test_rejects_zero_dimension(self, stream):
        with pytest.raises(ConfigError):
            sample_cn_matrix(0, 3, stream)


class TestOrthonormalColumns:
    def test_orthonormal(self, stream):
        w = orthonormal_columns(4, 3, stream)
        np.testing.assert_allclose(w.conj().T @ w, np.eye(3), atol=1e-10)

    def test_batch_orthonormal(self, stream):
        w = orthonormal_columns(4, 2, stream, size=50)
        gram = w.conj().transpose(0, 2, 1) @ w
        np.testing.assert_allclose(gram, np.broadcast_to(np.eye(2), gram.shape), atol=1e-10)

    def test_uniform_energy_spread(self, stream):
        # Haar columns put 1/M of their energy on each coordinate on average
        w = orthonormal_columns(4, 1, stream, size=40_000)
        energy = np.mean(np.abs(w[:, :, 0]) ** 2, axis=0)
        np.testing.assert_allclose(energy, 0.25, atol=0.01)

    def test_rejects_k_above_m(self, stream):
        with pytest.raises(ConfigError):
            orthonormal_columns(2, 3, stream)


class TestNullSpace:
    def test_annihilates_columns(self, stream):
        a = sample_cn_matrix(6, 2, stream)
        v = null_space(a)
        assert v.shape == (6, 4)
        np.testing.assert_allclose(a.conj().T @ v, 0, atol=1e-10)
        np.testing.assert_allclose(v.conj().T @ v, np.eye(4), atol=1e-10)

    def test_empty_constraints_give_identity(self):
        np.testing.assert_array_equal(null_space(np.zeros((3, 0))), np.eye(3))

    def test_vector_input(self, stream):
        a = sample_cn_matrix(5, 1, stream)[:, 0]
        v = null_space(a)
        assert v.shape == (5, 4)
        np.testing.assert_allclose(a.conj() @ v, 0, atol=1e-10)

    def test_rank_deficient(self, stream):
        col = sample_cn_matrix(4, 1, stream)
        v = null_space(np.hstack([col, 2 * col]))
        assert v.shape == (4, 3)

    def test_residuals_on_many_instances(self):
        rng = np.random.default_rng(44)
        for _ in range(1000):
            n = int(rng.integers(2, 9))
            j = int(rng.integers(1, n))
            a = sample_cn_matrix(n, j, rng)
            v = null_space(a)
            assert v.shape == (n, n - j)
            assert np.max(np.abs(a.conj().T @ v)) < 1e-10
            assert np.max(np.abs(v.conj().T @ v - np.eye(n - j))) < 1e-10
