import math

import numpy as np
import pytest
from scipy.stats import binom

from gtlab import concentration as conc
from gtlab import linalg, pauli
from gtlab.reports import binomial_ci
from gtlab.samplers import standard_complex
from conftest import gue


def series_of(*terms, mu=1.0, sign_kind="rademacher"):
    return conc.MatrixSeries(terms=tuple(np.asarray(t, dtype=complex)
                                         for t in terms),
                             sign_kind=sign_kind, mu=mu)


class TestCovariance:
    def test_scaled_orthonormal_columns_identity(self):
        n, k = 16, 3
        X = np.sqrt(n) * np.eye(n, k, dtype=complex)
        sigma = conc.covariance(X, check_rank_one=True)
        assert np.abs(sigma - np.eye(k)).max() == 0.0

    def test_mean_is_identity(self, stream):
        n, k, trials = 32, 2, 10000
        rng = stream.generator()
        draws = standard_complex(rng, (trials, n, k))
        sigmas = np.einsum('tpi,tpj->tij', draws.conj(), draws) / n
        mean = sigmas.mean(axis=0)
        se = sigmas.std(axis=0, ddof=1) / math.sqrt(trials)
        assert (np.abs(mean - np.eye(k)) <= 4.0 * np.maximum(se, 1e-12)).all()

    def test_rank_one_mode_agrees(self, rng):
        X = standard_complex(rng, (10, 3))
        sigma = conc.covariance(X, check_rank_one=True)
        direct = linalg.hermitize(X.conj().T @ X / 10)
        assert np.abs(sigma - direct).max() <= 1e-12

    def test_dimension_validation(self, rng):
        with pytest.raises(ValueError):
            conc.covariance(standard_complex(rng, (2, 5)))


class TestVarianceProxy:
    def test_closed_form_k_over_n(self):
        exp = conc.CovarianceExperiment(n_samples=8, dim=2, epsilon=1.0)
        assert conc.gaussian_row_sigma2(exp) == 2.0 / 8.0

    def test_scalar_closed_form_one_over_n(self):
        # k=1: S = (|x|^2 - 1)/N with E|x|^4 = 2, so E S^2 = 1/N^2 and the
        # sum over N terms is 1/N
        exp = conc.CovarianceExperiment(n_samples=16, dim=1, epsilon=1.0)
        assert conc.gaussian_row_sigma2(exp) == pytest.approx(1.0 / 16.0)

    def test_zero_summands(self, stream):
        zero = conc.variance_proxy_mc(lambda rng: np.zeros((2, 2)), 5, stream,
                                      draws=50)
        assert zero == 0.0

    def test_monte_carlo_matches_closed_form(self, stream):
        n = 16

        def draw(rng):
            x = standard_complex(rng, (1,))
            return np.array([[(abs(x[0]) ** 2 - 1.0) / n]])

        draws = 10000
        estimate = conc.variance_proxy_mc(draw, n, stream, draws=draws)
        # Var of |x|^2 - 1 for unit-variance complex Gaussian is 1
        # (|x|^2 is Exp(1)); the estimator averages (|x|^2-1)^2/n^2 whose
        # spread is of order sqrt(20)/n^2 per draw
        target = 1.0 / n
        se = n * math.sqrt(20.0) / n ** 2 / math.sqrt(draws)
        assert abs(estimate - target) <= 4.0 * se


class TestAwBound:
    def test_frozen_value(self):
        exp = conc.CovarianceExperiment(n_samples=8, dim=2, epsilon=2.0)
        assert conc.aw_bound(exp, sigma2=1.0) == pytest.approx(2.0 * math.exp(-1.0),
                                                               abs=1e-12)

    def test_zero_epsilon_vacuous(self):
        exp = conc.CovarianceExperiment(n_samples=8, dim=3, epsilon=0.0)
        assert conc.aw_bound(exp, sigma2=0.5) == pytest.approx(3.0)

    def test_nonpositive_sigma2(self):
        exp = conc.CovarianceExperiment(n_samples=8, dim=2, epsilon=1.0)
        with pytest.raises(ValueError):
            conc.aw_bound(exp, sigma2=0.0)


class TestEmpiricalTail:
    def test_zero_threshold_tail_one(self, stream):
        exp = conc.CovarianceExperiment(n_samples=8, dim=2, epsilon=0.0,
                                        trials=500)
        report = conc.empirical_tail(exp, stream, escalate=False)
        assert report.empirical_tail == 1.0

    def test_huge_threshold_tail_zero(self, stream):
        exp = conc.CovarianceExperiment(n_samples=2, dim=2, epsilon=1000.0,
                                        trials=500)
        report = conc.empirical_tail(exp, stream, escalate=False)
        assert report.empirical_tail == 0.0
        assert report.status != "fail"

    def test_union_bound_frequencies(self, stream):
        exp = conc.CovarianceExperiment(n_samples=8, dim=2, epsilon=0.5,
                                        trials=3000)
        report = conc.empirical_tail(exp, stream, escalate=False)
        assert report.empirical_tail <= (report.extras["upper_tail"]
                                         + report.extras["lower_tail"] + 1e-15)

    def test_domination_small_grid(self, stream):
        # informative-bound cells must dominate the empirical upper limit
        for i, (n, k, eps) in enumerate([(8, 1, 0.5), (16, 1, 1.0),
                                         (16, 2, 2.0), (32, 1, 2.0)]):
            exp = conc.CovarianceExperiment(n_samples=n, dim=k, epsilon=eps,
                                            trials=4000)
            report = conc.empirical_tail(exp, stream.offset(i))
            assert report.bound_value < 1.0
            assert report.status == "pass"

    def test_assumption_rate_reported(self, stream):
        exp = conc.CovarianceExperiment(n_samples=8, dim=4, epsilon=1.0,
                                        trials=1000)
        report = conc.empirical_tail(exp, stream, escalate=False)
        assert 0.0 <= report.extras["assumption_violation_rate"] <= 1.0


class TestBernsteinStep:
    def test_tail_check_passes(self, stream):
        exp = conc.CovarianceExperiment(n_samples=16, dim=2, epsilon=1.0,
                                        trials=5000)
        report = conc.bernstein_tail_check(exp, stream)
        assert report.passed

    def test_fixed_exponent(self, stream):
        exp = conc.CovarianceExperiment(n_samples=16, dim=2, epsilon=1.0,
                                        c=3.0, trials=3000)
        assert conc.bernstein_tail_check(exp, stream).passed

    def test_optimizer_returns_interior_point(self, stream):
        exp = conc.CovarianceExperiment(n_samples=16, dim=2, epsilon=1.0,
                                        trials=2000)
        c = conc.optimal_bernstein_c(exp, stream)
        assert 0.0 < c < 16.0


class TestMgfLemma:
    def test_mu_zero_exact_equality(self, stream):
        exp = conc.CovarianceExperiment(n_samples=4, dim=2, epsilon=1.0,
                                        trials=200)
        report = conc.aw_mgf_lemma_check(exp, 0.0, stream)
        assert report.lhs == pytest.approx(2.0, abs=1e-12)
        assert report.rhs == pytest.approx(2.0, abs=1e-12)
        assert report.passed

    def test_scalar_case_equality_within_error(self, stream):
        exp = conc.CovarianceExperiment(n_samples=6, dim=1, epsilon=1.0,
                                        trials=20000)
        report = conc.aw_mgf_lemma_check(exp, 0.8, stream)
        assert report.passed
        # iid factorization makes the two sides equal in expectation
        assert abs(report.margin) <= 2.0 * report.tol

    @pytest.mark.parametrize("mu", [1.0, -1.0])
    def test_small_instance_passes(self, mu, stream):
        exp = conc.CovarianceExperiment(n_samples=4, dim=2, epsilon=1.0,
                                        trials=20000)
        assert conc.aw_mgf_lemma_check(exp, mu, stream).passed

    def test_size_guard(self, stream):
        exp = conc.CovarianceExperiment(n_samples=12, dim=2, epsilon=1.0,
                                        trials=100)
        with pytest.raises(ValueError, match="restricted"):
            conc.aw_mgf_lemma_check(exp, 1.0, stream)


class TestSignSeries:
    def test_single_pauli_term_frozen(self):
        report = conc.oliveira_mgf_check(series_of(pauli.SIGMA3, mu=1.0))
        assert report.lhs == pytest.approx(2.0 * math.cosh(1.0), abs=1e-12)
        assert report.rhs == pytest.approx(2.0 * math.exp(0.5), abs=1e-12)
        assert report.passed

    def test_zero_terms_equal_dimension(self):
        report = conc.oliveira_mgf_check(series_of(np.zeros((3, 3)),
                                                   np.zeros((3, 3))))
        assert report.lhs == pytest.approx(3.0)
        assert report.rhs == pytest.approx(3.0)

    def test_commuting_diagonal_enumeration(self, rng):
        terms = [np.diag(rng.standard_normal(3)) for _ in range(10)]
        report = conc.oliveira_mgf_check(series_of(*terms, mu=1.0))
        assert report.passed
        assert report.margin >= 0.0

    def test_enumeration_guard(self, rng):
        terms = [np.eye(2) for _ in range(15)]
        with pytest.raises(conc.ResourceGuardError):
            conc.oliveira_mgf_check(series_of(*terms))

    def test_enumeration_needs_rademacher(self):
        with pytest.raises(ValueError, match="Rademacher"):
            conc.oliveira_mgf_check(series_of(pauli.SIGMA3,
                                              sign_kind="gaussian"))

    @pytest.mark.parametrize("sign_kind", ["rademacher", "gaussian"])
    def test_montecarlo_mode(self, sign_kind, stream, rng):
        series = series_of(*(gue(rng, 3) for _ in range(5)), mu=0.7,
                           sign_kind=sign_kind)
        report = conc.oliveira_mgf_check(series, mode="montecarlo",
                                         stream=stream, trials=20000)
        assert report.passed

    def test_random_enumerated_sweep(self, rng):
        for _ in range(30):
            m = int(rng.integers(1, 9))
            d = int(rng.integers(1, 5))
            mu = float(rng.choice([0.5, -0.5, 1.0, 2.0]))
            series = series_of(*(gue(rng, d) for _ in range(m)), mu=mu)
            assert conc.oliveira_mgf_check(series).passed

    def test_recursion_profile_non_increasing(self, rng):
        for _ in range(10):
            m = int(rng.integers(1, 9))
            series = series_of(*(gue(rng, 3) for _ in range(m)),
                               mu=float(rng.choice([0.5, 1.0, 2.0])))
            profile = conc.oliveira_recursion_profile(series)
            assert profile.size == m + 1
            increases = np.diff(profile) / np.maximum(1.0, profile[:-1])
            assert increases.max() <= 1e-12

    def test_recursion_endpoints_match_bound_sides(self, rng):
        series = series_of(*(gue(rng, 2) for _ in range(6)), mu=1.3)
        profile = conc.oliveira_recursion_profile(series)
        report = conc.oliveira_mgf_check(series)
        assert profile[0] == pytest.approx(report.rhs, rel=1e-12)
        assert profile[-1] == pytest.approx(report.lhs, rel=1e-12)


class TestMgfFactor:
    def test_gaussian_factor_is_one(self, rng):
        report = conc.mgf_factor_check(gue(rng, 3), 1.7, "gaussian")
        assert abs(report.lhs - 1.0) <= 1e-12

    def test_rademacher_frozen_value(self):
        report = conc.mgf_factor_check(pauli.SIGMA3, 2.0, "rademacher")
        assert report.lhs == pytest.approx(math.exp(-2.0) * math.cosh(2.0),
                                           abs=1e-12)
        assert report.passed

    def test_mu_zero(self, rng):
        report = conc.mgf_factor_check(gue(rng, 4), 0.0, "rademacher")
        assert report.lhs == pytest.approx(1.0, abs=1e-15)

    def test_sweep_bounded_by_one(self, rng):
        for _ in range(100):
            A = gue(rng, int(rng.integers(1, 5)))
            mu = float(rng.standard_normal())
            for kind in conc.SIGN_KINDS:
                assert conc.mgf_factor_check(A, mu, kind).passed


class TestSeriesVsDirectBound:
    def test_single_term_frozen(self):
        report = conc.oliveira_vs_aw(series_of(pauli.SIGMA3, mu=1.0))
        assert report.lhs == pytest.approx(2.0 * math.exp(0.5), abs=1e-12)
        assert report.rhs == pytest.approx(2.0 * math.e, abs=1e-12)
        assert report.passed

    def test_zero_series_equality(self):
        report = conc.oliveira_vs_aw(series_of(np.zeros((4, 4))))
        assert report.lhs == pytest.approx(4.0)
        assert report.rhs == pytest.approx(4.0)

    def test_random_sweep(self, rng):
        for _ in range(300):
            m = int(rng.integers(1, 7))
            d = int(rng.integers(1, 5))
            mu = float(rng.choice([0.5, -0.5, 2.0, -2.0]))
            series = series_of(*(gue(rng, d) for _ in range(m)), mu=mu)
            assert conc.oliveira_vs_aw(series).passed


class TestScalarChernoff:
    def test_zero_threshold_vacuous(self, stream):
        params = conc.ScalarChernoffParams(n_vars=20, sigma2=1.0, epsilon=0.0)
        report = conc.scalar_chernoff(params, stream, trials=20000)
        assert report.bound_value == 1.0
        assert 0.3 <= report.empirical_tail <= 0.8

    def test_exact_binomial_oracle(self, stream):
        # sum >= 3 with 20 steps of size 1/sqrt(20) means at least 17 heads
        params = conc.ScalarChernoffParams(n_vars=20, sigma2=1.0, epsilon=3.0)
        trials = 100000
        report = conc.scalar_chernoff(params, stream, trials=trials)
        exact = float(1.0 - binom.cdf(16, 20, 0.5))
        assert report.ci_low <= exact <= report.ci_high
        assert report.ci_high <= math.exp(-1.5)
        assert report.passed

    def test_degenerate_zero_variance(self, stream):
        params = conc.ScalarChernoffParams(n_vars=10, sigma2=0.0, epsilon=0.5)
        report = conc.scalar_chernoff(params, stream, trials=1000)
        assert report.empirical_tail == 0.0

    def test_unrealizable_variance(self, stream):
        params = conc.ScalarChernoffParams(n_vars=20, sigma2=50.0, epsilon=1.0)
        with pytest.raises(ValueError, match="realizable"):
            conc.scalar_chernoff(params, stream)


class TestTraceProductDominance:
    def test_random_sweep(self, rng):
        for _ in range(300):
            n = int(rng.integers(2, 6))
            P = linalg.expm_herm(gue(rng, n))
            assert conc.trace_product_dominance(P, gue(rng, n)).passed

    def test_requires_positive_definite(self, rng):
        with pytest.raises(ValueError, match="positive definite"):
            conc.trace_product_dominance(-np.eye(3), gue(rng, 3))


class TestBinomialCi:
    def test_edge_cases(self):
        low, high = binomial_ci(0, 100)
        assert low == 0.0 and 0.0 < high < 0.05
        low, high = binomial_ci(100, 100)
        assert high == 1.0 and low > 0.95

    def test_coverage_shape(self):
        low, high = binomial_ci(50, 100)
        assert low < 0.5 < high

    def test_validation(self):
        with pytest.raises(ValueError):
            binomial_ci(5, 0)
        with pytest.raises(ValueError):
            binomial_ci(7, 5)
