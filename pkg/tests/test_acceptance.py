"""Acceptance suite: one test per exit criterion, each at its stated
tolerance, printing a PASS line when it holds."""

import math
import time

import numpy as np

from gtlab import concentration as conc
from gtlab import inequalities as ineq
from gtlab import linalg, pauli, studies, suites
from gtlab.samplers import RngStream
from conftest import gue

SEED = 20650901


def stream_for(criterion: int) -> RngStream:
    return RngStream(SEED, criterion * 10_000_000)


def announce(number: int, label: str):
    print(f"ACCEPTANCE {number} ({label}): PASS")


class TestAcceptance:
    def test_01_golden_thompson_sweep(self):
        start = time.monotonic()
        base = stream_for(1)
        for j, n in enumerate(range(2, 9)):
            violations, worst = suites.gt_margin_sweep(
                n, 10000, base.offset(j * 1000), rel_tol=1e-9)
            assert violations == 0, (n, worst)
        elapsed = time.monotonic() - start
        assert elapsed < 120.0
        announce(1, f"trace-exponential sweep, 7x10^4 pairs in {elapsed:.1f}s")

    def test_02_pauli_ratio(self):
        start = time.monotonic()
        quad = studies.pauli_ratio_quadrature(tol=1e-10)
        assert abs(quad.ratio - 4.0 / 3.0) <= 1e-8
        est = studies.pauli_ratio_mc(1_000_000, stream_for(2))
        dev = abs(est.ratio - 4.0 / 3.0)
        assert dev <= 3.0 * est.ratio_se, (est.ratio, est.ratio_se)
        elapsed = time.monotonic() - start
        assert elapsed < 60.0
        announce(2, f"2x2 Gaussian ratio 4/3, mc dev {dev:.2e} in {elapsed:.1f}s")

    def test_03_hermitization_trend(self):
        target = math.sqrt(2.0)
        small = studies.hermitization_ratio(16, 200, stream_for(3))
        large = studies.hermitization_ratio(256, 200, stream_for(3).offset(5000))
        rel = abs(large.ratio - target) / target
        assert rel <= 0.08, large.ratio
        assert abs(large.ratio - target) < abs(small.ratio - target), \
            (small.ratio, large.ratio)
        announce(3, f"hermitization ratio {large.ratio:.4f} within 8% of "
                    f"sqrt(2), trend {small.ratio:.4f} -> {large.ratio:.4f}")

    def test_04_sign_series_enumeration(self):
        start = time.monotonic()
        rng = stream_for(4).generator()
        mus = (0.5, -0.5, 1.0, -1.0, 2.0, -2.0)
        checked = 0
        for _ in range(100):
            m = int(rng.integers(1, 13))
            d = int(rng.integers(1, 5))
            terms = tuple(gue(rng, d) for _ in range(m))
            for mu in mus:
                series = conc.MatrixSeries(terms=terms, sign_kind="rademacher",
                                           mu=mu)
                report = conc.oliveira_mgf_check(series, mode="enumerate")
                assert report.passed, (m, d, mu, report)
                checked += 1
        # exact enumeration: the verdict is deterministic
        repeat = conc.oliveira_mgf_check(
            conc.MatrixSeries(terms=terms, sign_kind="rademacher", mu=2.0))
        again = conc.oliveira_mgf_check(
            conc.MatrixSeries(terms=terms, sign_kind="rademacher", mu=2.0))
        assert repeat == again
        elapsed = time.monotonic() - start
        assert elapsed < 60.0
        announce(4, f"{checked} exact sign enumerations in {elapsed:.1f}s")

    def test_05_tail_domination_grid(self):
        start = time.monotonic()
        base = stream_for(5)
        informative = 0
        idx = 0
        for n in (8, 16, 32):
            for k in (1, 2, 4):
                for eps in (0.5, 1.0, 2.0):
                    report = suites.domination_cell(n, k, eps, 10000,
                                                    base.offset(idx * 100))
                    idx += 1
                    if report.bound_value < 1.0:
                        informative += 1
                        assert report.ci_high <= report.bound_value, \
                            (n, k, eps, report)
        elapsed = time.monotonic() - start
        assert elapsed < 300.0
        assert informative >= 9
        announce(5, f"tail bound dominated on {informative} informative "
                    f"cells in {elapsed:.1f}s")

    def test_06_triple_bound_kernel(self):
        rng = stream_for(6).generator()
        for _ in range(100):
            n = int(rng.integers(2, 6))
            A, B, C = gue(rng, n), gue(rng, n), gue(rng, n)
            cf = ineq.lieb_rhs_closed(A, B, C)
            qd = ineq.lieb_rhs_quadrature(A, B, C)
            assert abs(cf - qd) <= 1e-8 * max(1.0, abs(cf))
            assert ineq.lieb_triple_gap(A, B, C).passed
            reduced = ineq.lieb_rhs_closed(A, B, np.zeros_like(C))
            direct = float(np.trace(linalg.expm_herm(A)
                                    @ linalg.expm_herm(B)).real)
            assert abs(reduced - direct) <= 1e-10 * max(1.0, abs(direct))
        announce(6, "three-matrix kernel vs quadrature on 100 triples")

    def test_07_counterexample_hunts(self):
        triple = ineq.triple_gt_scan(stream_for(7), budget=100000)
        assert triple is not None
        assert triple.lhs > triple.rhs
        abc = ineq.abc_trace_scan(stream_for(7).offset(50), budget=100000, k=1)
        assert abc is not None
        assert abc.lhs > abc.rhs
        # both witnesses serialize with their evaluated sides
        for witness, tag in ((triple, "Eq.4.1d"), (abc, "ABC.trace")):
            case = suites._witness_case("hunt", tag, witness, 100000)
            assert case.extra["found"] is True
            assert case.lhs > case.rhs
            assert case.extra["matrices"]
        announce(7, f"witnesses at trials {triple.trial_index} and "
                    f"{abc.trial_index}")

    def test_08_reduction_consistency(self):
        summary = ineq.pauli_reduce_sweep(100000, stream_for(8))
        assert summary.max_route_discrepancy <= 1e-10
        assert summary.violations_cosh == 0
        assert summary.violations_law == 0
        announce(8, f"10^5 pairs, route discrepancy "
                    f"{summary.max_route_discrepancy:.2e}")

    def test_09_equality_condition(self):
        rng = stream_for(9).generator()
        for _ in range(3):
            d1 = np.diag(rng.standard_normal(4))
            d2 = np.diag(rng.standard_normal(4))
            scan = ineq.equality_order_scan(d1, d2)
            assert scan.commuting
            assert np.max(np.abs(scan.gaps)) <= 1e-12
        slopes = []
        for A, B in ((pauli.SIGMA3, pauli.SIGMA1),
                     (gue(rng, 3), gue(rng, 3)),
                     (gue(rng, 4), gue(rng, 4))):
            scan = ineq.equality_order_scan(linalg.hermitize(A),
                                            linalg.hermitize(B))
            assert not scan.commuting
            assert abs(scan.slope - 4.0) <= 0.1, scan.slope
            slopes.append(scan.slope)
        announce(9, f"commuting gap at zero, fitted orders {slopes}")

    def test_10_property_suites(self):
        rng = stream_for(10).generator()
        # product-limit convergence order
        target = linalg.expm_herm(linalg.hermitize(pauli.SIGMA3 + pauli.SIGMA1))
        ns = [2 ** j for j in range(1, 11)]
        devs = [linalg.operator_norm(
            linalg.lie_trotter_product(pauli.SIGMA3, pauli.SIGMA1, n) - target)
            for n in ns]
        slope, _ = np.polyfit(np.log(ns), np.log(devs), 1)
        assert abs(slope + 1.0) <= 0.1

        # per-trial exponential dominance inside the tail experiment
        for c in (0.5, 2.0):
            exp = conc.CovarianceExperiment(n_samples=12, dim=3, epsilon=0.5,
                                            c=c, trials=4000)
            conc.empirical_tail(exp, stream_for(10).offset(int(10 * c)),
                                escalate=False)

        # trace-product dominance
        for _ in range(500):
            n = int(rng.integers(2, 6))
            assert conc.trace_product_dominance(
                linalg.expm_herm(gue(rng, n)), gue(rng, n)).passed

        # interpolated sign-series expectation is non-increasing
        for _ in range(20):
            m = int(rng.integers(1, 11))
            d = int(rng.integers(1, 5))
            series = conc.MatrixSeries(
                terms=tuple(gue(rng, d) for _ in range(m)),
                sign_kind="rademacher", mu=float(rng.choice([0.5, 1.0, 2.0])))
            profile = conc.oliveira_recursion_profile(series)
            assert (np.diff(profile)
                    <= 1e-12 * np.maximum(1.0, profile[:-1])).all()

        # damped sign-average factor stays below one
        for _ in range(200):
            A = gue(rng, int(rng.integers(1, 5)))
            mu = float(rng.standard_normal())
            for kind in conc.SIGN_KINDS:
                assert conc.mgf_factor_check(A, mu, kind).passed

        # singular-value dominance and convex-order transfer
        for _ in range(500):
            n = int(rng.integers(2, 6))
            X = (rng.standard_normal((n, n))
                 + 1j * rng.standard_normal((n, n))) / np.sqrt(2)
            assert ineq.weyl_dominance_gap(X, s=1 + int(rng.integers(0, 2)),
                                           k=int(rng.integers(1, n + 1))).passed
            a = np.log(np.clip(linalg.singular_values(X), 1e-300, None))
            lam = np.sort(np.abs(linalg.general_eigen(X).values))[::-1]
            b = np.log(np.clip(lam, 1e-300, None))
            assert ineq.karamata_gap(a, b, omega=np.exp).passed

        # log-metric lower bound on the flat distance
        for _ in range(300):
            n = int(rng.integers(2, 6))
            assert ineq.norm_variant_gap(gue(rng, n), gue(rng, n),
                                         "log-metric").passed
        announce(10, "property suites (convergence order, per-trial "
                     "dominance, recursion, factors, dominance transfer)")
