import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gaussrecovery.error_metrics import QuadratureConfig, fit_rate, weighted_lp_error
from gaussrecovery.functions import corpus_lookup
from gaussrecovery.special_functions import gaussian_density_pow
from gaussrecovery.trig_interp import (
    ApproximationParams,
    build_trig_interpolant,
    coefficients_from_samples,
    evaluate_trig,
    evaluate_trig_weighted,
    select_T,
    select_T_alpha_free,
    trig_nodes,
)

REF_PARAMS = ApproximationParams(p=1, q=2, alpha=4, epsilon=0.25)


def phi(k, x, T):
    return cmath.exp(2j * math.pi * k * (x + T) / (2 * T)) / math.sqrt(2 * T)


def direct_coefficients(samples, T):
    """Plain double loop over frequencies and nodes, Nyquist pair halved."""
    n = len(samples)
    half = n // 2
    out = []
    for k in range(-half, half + 1):
        acc = 0j
        for j in range(n):
            xi = 2 * T * j / n - T
            acc += samples[j] * phi(k, xi, T).conjugate()
        c = 2 * T / n * acc
        if n % 2 == 0 and abs(k) == half:
            c *= 0.5
        out.append(c)
    return np.array(out)


def direct_series(coeffs, x, T):
    half = (len(coeffs) - 1) // 2
    return sum(c * phi(k, x, T) for k, c in zip(range(-half, half + 1), coeffs))


class TestParams:
    def test_default_epsilon_is_midpoint(self):
        assert ApproximationParams(p=1, q=2, alpha=3).epsilon == 0.25
        assert ApproximationParams(p=1.5, q=4, alpha=1).epsilon == pytest.approx((4 - 1.5) / (2 * 6))

    @pytest.mark.parametrize(
        "kwargs",
        [dict(p=0.5, q=2), dict(p=2, q=2), dict(p=1, q=2, epsilon=0.5), dict(p=1, q=2, epsilon=0.0), dict(alpha=0)],
    )
    def test_rejects_invalid(self, kwargs):
        with pytest.raises(ValueError):
            ApproximationParams(**kwargs)


class TestCutoff:
    def test_reference_parameters(self):
        assert select_T(30, REF_PARAMS) == pytest.approx(math.sqrt(32 * math.log(30)), rel=1e-12)
        assert select_T(30, REF_PARAMS) == pytest.approx(10.4326, abs=1e-4)
        assert select_T(62, REF_PARAMS) == pytest.approx(math.sqrt(32 * math.log(62)), rel=1e-12)
        assert select_T(2, REF_PARAMS) == pytest.approx(math.sqrt(32 * math.log(2)), rel=1e-12)

    @settings(max_examples=100, deadline=None)
    @given(
        st.integers(2, 10**6),
        st.floats(1, 5),
        st.floats(0.01, 10),
        st.integers(1, 8),
        st.floats(0.01, 0.99),
    )
    def test_exceeds_one(self, n, p, dq, alpha, frac):
        q = p + dq
        params = ApproximationParams(p=p, q=q, alpha=alpha, epsilon=frac * (q - p) / (p * q))
        assert select_T(n, params) > 1

    def test_rejects_small_n(self):
        with pytest.raises(ValueError):
            select_T(1, REF_PARAMS)

    def test_alpha_free(self):
        params = ApproximationParams(p=1, q=2, epsilon=0.25)
        expected = math.sqrt(8 * math.log(math.log(30)) * math.log(30))
        assert select_T_alpha_free(30, params) == pytest.approx(expected, rel=1e-12)
        lnln16 = math.log(math.log(16))
        assert lnln16 == pytest.approx(1.0197, abs=1e-4)
        assert select_T_alpha_free(16, params) == pytest.approx(math.sqrt(8 * lnln16 * math.log(16)), rel=1e-12)
        assert select_T_alpha_free(3, params, lambda n: 1.0) == pytest.approx(math.sqrt(8 * math.log(3)), rel=1e-12)
        # the floor at one applies below n = e^e
        assert select_T_alpha_free(5, params) == pytest.approx(math.sqrt(8 * math.log(5)), rel=1e-12)

    def test_alpha_free_rejects_nonpositive_gamma(self):
        with pytest.raises(ValueError):
            select_T_alpha_free(30, REF_PARAMS, lambda n: 0.0)


class TestCoefficients:
    def test_zero_function(self):
        interp = build_trig_interpolant(lambda x: np.zeros_like(x), 12, 3.0, 1.0)
        assert np.all(interp.coeffs == 0)

    @pytest.mark.parametrize("p", [1.0, 2.0])
    def test_constant_weighted_function(self, p):
        c = 0.7
        interp = build_trig_interpolant(lambda x: c * gaussian_density_pow(x, -1 / p), 8, 1.0, p)
        expected = np.zeros(9, dtype=complex)
        expected[4] = c * math.sqrt(2.0)
        np.testing.assert_allclose(interp.coeffs, expected, atol=1e-14)
        assert np.allclose(direct_coefficients([c] * 8, 1.0), expected, atol=1e-14)

    @pytest.mark.parametrize("m", [-4, -1, 0, 3, 4])
    def test_single_mode_recovered(self, m):
        n, T, p = 9, 1.3, 1.0
        f = lambda x: gaussian_density_pow(x, -1 / p) * np.array([phi(m, t, T) for t in np.atleast_1d(x)])
        interp = build_trig_interpolant(f, n, T, p)
        expected = np.zeros(n, dtype=complex)
        expected[m + 4] = 1.0
        np.testing.assert_allclose(interp.coeffs, expected, atol=1e-13)

    @pytest.mark.parametrize("n", [8, 9, 64, 65])
    def test_fft_matches_direct_sum(self, n, rng):
        T = 2.5
        samples = rng.normal(size=n)
        fast = coefficients_from_samples(samples, T)
        slow = direct_coefficients(samples, T)
        assert np.max(np.abs(fast - slow)) <= 1e-11 * np.max(np.abs(slow))

    @pytest.mark.parametrize("n", [8, 9, 16, 33])
    def test_conjugate_symmetry_for_real_input(self, n):
        interp = build_trig_interpolant(corpus_lookup("sin"), n, 4.0, 1.0)
        c = interp.coeffs
        np.testing.assert_allclose(c[::-1], np.conj(c), rtol=0, atol=1e-12 * np.max(np.abs(c)))

    def test_linearity(self, rng):
        a, b = 1.7, -0.4
        f, h = corpus_lookup("abs3"), corpus_lookup("sin")
        combo = lambda x: a * f(x) + b * h(x)
        built = build_trig_interpolant(combo, 33, 5.0, 1.0).coeffs
        separate = a * build_trig_interpolant(f, 33, 5.0, 1.0).coeffs + b * build_trig_interpolant(h, 33, 5.0, 1.0).coeffs
        assert np.max(np.abs(built - separate)) <= 1e-12 * np.max(np.abs(built))

    def test_rejects_non_finite_samples(self):
        with pytest.raises(ValueError):
            build_trig_interpolant(lambda x: np.full_like(x, np.nan), 5, 1.0, 1.0)

    def test_rejects_bad_sizes(self):
        with pytest.raises(ValueError):
            build_trig_interpolant(np.sin, 0, 1.0, 1.0)
        with pytest.raises(ValueError):
            build_trig_interpolant(np.sin, 5, 0.0, 1.0)


class TestEvaluation:
    def test_zero_outside_cutoff(self):
        interp = build_trig_interpolant(corpus_lookup("abs"), 17, 2.0, 1.0)
        assert evaluate_trig(interp, 2.1) == 0.0
        assert evaluate_trig(interp, -50.0) == 0.0
        assert evaluate_trig_weighted(interp, 2.1) == 0.0

    def test_constant_reproduced(self):
        c, p = 0.7, 1.0
        interp = build_trig_interpolant(lambda x: c * gaussian_density_pow(x, -1 / p), 9, 1.0, p)
        assert evaluate_trig(interp, 0.3) == pytest.approx(c * gaussian_density_pow(0.3, -1.0), rel=1e-13)
        x = np.linspace(-1, 1, 11)
        np.testing.assert_allclose(evaluate_trig_weighted(interp, x), c, rtol=1e-13)

    @pytest.mark.parametrize("n", [9, 33, 129])
    @pytest.mark.parametrize("fid", ["abs", "abs3", "sin", "gauss_bump", "poly2"])
    def test_nodal_interpolation(self, n, fid):
        f = corpus_lookup(fid)
        T = 4.0
        interp = build_trig_interpolant(f, n, T, 1.0)
        xi = trig_nodes(n, T)
        g = f.derivative(0, xi) * gaussian_density_pow(xi, 1.0)
        assert np.max(np.abs(interp.weighted(xi) - g)) <= 1e-9 * np.max(np.abs(g))
        np.testing.assert_allclose(evaluate_trig(interp, xi), f.derivative(0, xi), rtol=1e-9, atol=1e-12)

    @pytest.mark.parametrize("n", [8, 30])
    def test_nodal_interpolation_even(self, n):
        f = corpus_lookup("abs3")
        interp = build_trig_interpolant(f, n, 3.0, 1.0)
        xi = trig_nodes(n, 3.0)
        g = f.derivative(0, xi) * gaussian_density_pow(xi, 1.0)
        assert np.max(np.abs(interp.weighted(xi) - g)) <= 1e-12 * np.max(np.abs(g))

    def test_matches_direct_series(self, rng):
        interp = build_trig_interpolant(corpus_lookup("gauss_bump"), 12, 2.0, 1.0)
        x = rng.uniform(-2, 2, 20)
        slow = np.array([direct_series(interp.coeffs, t, 2.0).real for t in x])
        np.testing.assert_allclose(interp.weighted(x), slow, rtol=1e-12, atol=1e-14)

    @pytest.mark.parametrize("n", [9, 33])
    def test_band_limited_exactness(self, n, rng):
        T = 1.7
        x = rng.uniform(-T, T, 100)
        for k in range(-(n - 1) // 2, (n - 1) // 2 + 1):
            mode = lambda t, k=k: np.array([phi(k, s, T) for s in np.atleast_1d(t)])
            interp = build_trig_interpolant(lambda t: gaussian_density_pow(t, -1.0) * mode(t), n, T, 1.0)
            np.testing.assert_allclose(interp.weighted(x), mode(x).real, atol=1e-10)

    def test_even_function_gives_even_interpolant(self, rng):
        interp = build_trig_interpolant(corpus_lookup("poly2"), 16, 3.0, 1.0)
        x = rng.uniform(-3, 3, 50)
        np.testing.assert_allclose(interp.weighted(x), interp.weighted(-x), atol=1e-13)

    def test_weighted_times_reweighting(self, rng):
        interp = build_trig_interpolant(corpus_lookup("abs3"), 17, 4.0, 2.0)
        x = rng.uniform(-4, 4, 30)
        np.testing.assert_allclose(
            evaluate_trig(interp, x) * gaussian_density_pow(x, 0.5), interp.weighted(x), rtol=1e-12
        )

    def test_overflow_guard(self):
        interp = build_trig_interpolant(lambda x: np.zeros_like(x), 9, 45.0, 1.0)
        assert evaluate_trig_weighted(interp, 44.0) == 0.0
        assert np.isfinite(evaluate_trig(interp, 30.0))
        with pytest.raises(OverflowError):
            evaluate_trig(interp, 44.0)


def test_convergence_rate_abs3():
    f = corpus_lookup("abs3")
    params = ApproximationParams(p=1, q=2, alpha=3)
    rows = []
    for n in [17, 33, 65, 129, 257, 513]:
        interp = build_trig_interpolant(f, n, select_T(n, params), params.p)
        rows.append((n, weighted_lp_error(f, interp, params.p, QuadratureConfig())))
    assert fit_rate(rows) <= -2.5
