"""Named verification suites over the checker modules.

Each suite is an ordered list of equation-tagged cases; a case runs one
checker (or a Monte Carlo sweep of it) and records both sides, the margin
and a three-valued status.  The registry below maps every equation tag to
exactly one checker operation, and the suite lists are the exhaustive
in-scope coverage the report document is built from.

All randomness is derived from the suite's base stream by fixed offsets
in registry order, so a report is a pure function of (config, seed).
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass, field
from typing import Any, Callable

import numpy as np

from . import concentration as conc
from . import inequalities as ineq
from . import pauli, studies
from .linalg import (expm_herm, frobenius_norm, general_eigen, hermitize,
                     operator_norm, singular_values, trace_expm,
                     lie_trotter_product, distance_delta2)
from .reports import GapReport, checked_real
from .samplers import RngStream, standard_complex

__all__ = [
    "CaseRecord", "SuiteParams", "REGISTRY", "SUITE_TAGS", "SUITE_NAMES",
    "run_suite", "gt_margin_sweep", "jsonify",
]


@dataclass(frozen=True)
class CaseRecord:
    """One suite case: an equation tag, both sides, margin and verdict."""

    name: str
    equation: str
    lhs: float
    rhs: float
    margin: float
    passed: bool
    status: str
    trials: int
    ci: tuple[float, float] | None = None
    extra: dict[str, Any] = field(default_factory=dict)


@dataclass(frozen=True)
class SuiteParams:
    """Per-suite execution parameters (config-level overrides applied).

    ``series_length`` caps the random sign-series length; values above the
    enumeration guard trip the resource-guard error by design.
    """

    seed: int
    trials: int = 1000
    dims: tuple[int, ...] = (2, 3, 4)
    tolerances: dict[str, float] = field(default_factory=dict)
    series_length: int = 10


def jsonify(obj):
    """Recursively convert numpy/complex payloads to JSON-native values;
    complex numbers become [real, imag] pairs."""
    if isinstance(obj, dict):
        return {str(k): jsonify(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonify(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return jsonify(obj.tolist())
    if isinstance(obj, (complex, np.complexfloating)):
        z = complex(obj)
        return [z.real, z.imag]
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    return obj


def _gap_case(name: str, tag: str, report: GapReport, trials: int = 1,
              extra: dict | None = None) -> CaseRecord:
    status = "pass" if report.passed else "fail"
    return CaseRecord(name=name, equation=tag, lhs=report.lhs, rhs=report.rhs,
                      margin=report.margin, passed=report.passed, status=status,
                      trials=trials, extra=jsonify(extra or {}))


def _residual_case(name: str, tag: str, residual: float, threshold: float,
                   trials: int, extra: dict | None = None) -> CaseRecord:
    passed = residual <= threshold
    return CaseRecord(name=name, equation=tag, lhs=float(residual),
                      rhs=float(threshold), margin=float(threshold - residual),
                      passed=bool(passed), status="pass" if passed else "fail",
                      trials=trials, extra=jsonify(extra or {}))


def _worst_case(name: str, tag: str, worst: tuple[float, float, float],
                violations: int, trials: int, tol: float,
                extra: dict | None = None) -> CaseRecord:
    """Aggregate sweep case: records the worst instance's sides and the
    violation count (pass means zero violations)."""
    lhs, rhs, margin = worst
    passed = violations == 0
    payload = {"violations": violations}
    payload.update(extra or {})
    return CaseRecord(name=name, equation=tag, lhs=float(lhs), rhs=float(rhs),
                      margin=float(margin), passed=passed,
                      status="pass" if passed else "fail", trials=trials,
                      ci=None, extra=jsonify(payload))


class _WorstTracker:
    """Track the instance with the smallest relative margin in a sweep."""

    def __init__(self, rel_tol: float = 1e-9):
        self.rel_tol = rel_tol
        self.violations = 0
        self.worst = (math.nan, math.nan, math.inf)
        self._worst_rel = math.inf

    def update(self, report: GapReport):
        rel = report.margin / max(1.0, abs(report.lhs), abs(report.rhs))
        if rel < self._worst_rel:
            self._worst_rel = rel
            self.worst = (report.lhs, report.rhs, report.margin)
        if rel < -self.rel_tol:
            self.violations += 1

    def update_arrays(self, lhs: np.ndarray, rhs: np.ndarray):
        margin = rhs - lhs
        rel = margin / np.maximum(1.0, np.maximum(np.abs(lhs), np.abs(rhs)))
        i = int(np.argmin(rel))
        if rel[i] < self._worst_rel:
            self._worst_rel = float(rel[i])
            self.worst = (float(lhs[i]), float(rhs[i]), float(margin[i]))
        self.violations += int(np.count_nonzero(rel < -self.rel_tol))


def _gue(rng: np.random.Generator, n: int) -> np.ndarray:
    X = standard_complex(rng, (n, n))
    return (X + X.conj().T) / 2.0


def _gue_batch(rng: np.random.Generator, count: int, n: int) -> np.ndarray:
    X = standard_complex(rng, (count, n, n))
    return (X + np.conj(np.swapaxes(X, 1, 2))) / 2.0


def _ginibre(rng: np.random.Generator, n: int) -> np.ndarray:
    return standard_complex(rng, (n, n))


# ---------------------------------------------------------------------------
# vectorized sweeps reused by the acceptance tests

def gt_margin_sweep(n: int, trials: int, stream: RngStream,
                    rel_tol: float = 1e-9, chunk: int = 8192):
    """Batched Golden-Thompson sweep over GUE pairs of size ``n``;
    returns (violations, worst (lhs, rhs, margin))."""
    tracker = _WorstTracker(rel_tol)
    done = 0
    block = 0
    while done < trials:
        count = min(chunk, trials - done)
        rng = stream.offset(block).generator()
        A = _gue_batch(rng, count, n)
        B = _gue_batch(rng, count, n)
        lhs = np.exp(np.linalg.eigvalsh(A + B)).sum(axis=1)
        wa, Va = np.linalg.eigh(A)
        wb, Vb = np.linalg.eigh(B)
        eA = np.einsum('tik,tk,tjk->tij', Va, np.exp(wa), Va.conj())
        eB = np.einsum('tik,tk,tjk->tij', Vb, np.exp(wb), Vb.conj())
        prod = np.einsum('tij,tji->t', eA, eB)
        if np.abs(prod.imag).max(initial=0.0) > 1e-10 * max(1.0, np.abs(prod).max()):
            raise RuntimeError("imaginary residue on a real product trace")
        tracker.update_arrays(lhs, prod.real)
        done += count
        block += 1
    return tracker.violations, tracker.worst


def domination_cell(n: int, k: int, eps: float, trials: int,
                    stream: RngStream):
    """One tail-domination cell: empirical tail report at the closed-form
    variance proxy (pass applies only when the bound is informative)."""
    exp = conc.CovarianceExperiment(n_samples=n, dim=k, epsilon=eps,
                                    trials=trials)
    return conc.empirical_tail(exp, stream)


# ---------------------------------------------------------------------------
# inequalities suite runners

def _run_pauli_param(params, stream, tol):
    rng = stream.generator()
    a = rng.standard_normal((params.trials, 3))
    residual = pauli.squared_norm_identity_residual(a)
    return [_residual_case("pauli-parametrization", "Eq.AB", residual,
                           tol if tol is not None else 1e-12, params.trials)]


def _run_gt(params, stream, tol):
    cases = []
    rel = tol if tol is not None else 1e-9
    for j, n in enumerate(params.dims):
        violations, worst = gt_margin_sweep(n, params.trials, stream.offset(j * 100),
                                            rel_tol=rel)
        cases.append(_worst_case(f"gt-sweep-n{n}", "Eq.1", worst, violations,
                                 params.trials, rel))
    return cases


def _run_pauli_reduce(params, stream, tol):
    summary = ineq.pauli_reduce_sweep(params.trials, stream)
    consistency_ok = summary.max_route_discrepancy <= 1e-10
    cosh = CaseRecord(
        name="pauli-2x2-cosh", equation="Eq.1a",
        lhs=math.nan, rhs=math.nan, margin=summary.worst_margin_cosh,
        passed=summary.violations_cosh == 0 and consistency_ok,
        status="pass" if summary.violations_cosh == 0 and consistency_ok else "fail",
        trials=params.trials,
        extra=jsonify({"violations": summary.violations_cosh,
                       "max_route_discrepancy": summary.max_route_discrepancy}))
    law = CaseRecord(
        name="pauli-law-of-cosines", equation="Eq.1aA",
        lhs=math.nan, rhs=math.nan, margin=summary.worst_margin_law,
        passed=summary.violations_law == 0,
        status="pass" if summary.violations_law == 0 else "fail",
        trials=params.trials,
        extra=jsonify({"violations": summary.violations_law}))
    return [cosh, law]


def _run_oscillator(params, stream, tol):
    tracker = _WorstTracker(tol if tol is not None else 1e-9)
    betas = (1e-6, 0.5, 1.0, 2.0, 10.0, 100.0)
    for beta in betas:
        tracker.update(ineq.oscillator_bound(beta))
    return [_worst_case("oscillator-bound", "Eq.1b", tracker.worst,
                        tracker.violations, len(betas),
                        tol if tol is not None else 1e-9)]


def _run_lie_trotter(params, stream, tol):
    A = pauli.SIGMA3.copy()
    B = pauli.SIGMA1.copy()
    target = expm_herm(hermitize(A + B))
    ns = [2 ** j for j in range(1, 11)]
    devs = [operator_norm(lie_trotter_product(A, B, n) - target) for n in ns]
    slope, _ = np.polyfit(np.log(ns), np.log(devs), 1)
    # commuting pairs reproduce the exponential of the sum at every n
    D1, D2 = np.diag([0.7, -0.3, 0.1]), np.diag([1.1, 0.2, -0.5])
    comm_dev = max(operator_norm(lie_trotter_product(D1, D2, n)
                                 - expm_herm(D1 + D2)) for n in (1, 3, 8))
    threshold = tol if tol is not None else 0.1
    return [_residual_case("lie-trotter-order", "Eq.LT", abs(slope + 1.0),
                           threshold, len(ns),
                           extra={"fitted_slope": float(slope),
                                  "commuting_deviation": comm_dev})]


def _instance_sweep(params, stream, tol, tag, name, builder):
    """Generic per-instance sweep: ``builder(rng, n, i) -> GapReport``."""
    tracker = _WorstTracker(tol if tol is not None else 1e-9)
    trials = params.trials
    for i in range(trials):
        n = params.dims[i % len(params.dims)]
        rng = stream.offset(i).generator()
        tracker.update(builder(rng, n, i))
    return [_worst_case(name, tag, tracker.worst, tracker.violations, trials,
                        tol if tol is not None else 1e-9)]


def _run_cauchy(params, stream, tol):
    def builder(rng, n, i):
        return ineq.cauchy_trace_gap(_ginibre(rng, n), _ginibre(rng, n))
    return _instance_sweep(params, stream, tol, "Lemma.1", "cauchy-trace", builder)


def _run_word_bound(params, stream, tol):
    def builder(rng, n, i):
        half = int(rng.integers(1, 5))
        word = ["X" if b else "X*" for b in rng.integers(0, 2, size=2 * half)]
        return ineq.word_trace_bound(_ginibre(rng, n), word)
    return _instance_sweep(params, stream, tol, "Lemma.2", "word-trace", builder)


def _run_dyadic(params, stream, tol):
    def builder(rng, n, i):
        k = 1 + i % 3
        return ineq.dyadic_power_gap(_gue(rng, n), _gue(rng, n), k)
    return _instance_sweep(params, stream, tol, "Lemma.3", "dyadic-power", builder)


def _run_weyl(params, stream, tol):
    def builder(rng, n, i):
        s = 1 + i % 2
        k = int(rng.integers(1, n + 1))
        return ineq.weyl_dominance_gap(_ginibre(rng, n), s=s, k=k)
    return _instance_sweep(params, stream, tol, "Eq.2.6", "weyl-dominance", builder)


def _run_spectral_chain(params, stream, tol):
    def builder(rng, n, i):
        s = 1 + i % 2
        X = _ginibre(rng, n)
        mu = singular_values(X)
        lam = np.abs(general_eigen(X).values)
        lam_pow = np.sort(lam)[::-1] ** (2 * s)
        first = GapReport.from_sides(lam_pow.sum(), (mu ** (2 * s)).sum())
        power_trace = abs(np.trace(np.linalg.matrix_power(X, 2 * s)))
        second = GapReport.from_sides(power_trace, lam_pow.sum())
        return first if first.margin / max(1.0, first.rhs) \
            <= second.margin / max(1.0, second.rhs) else second
    return _instance_sweep(params, stream, tol, "Eq.H", "spectral-chain", builder)


def _run_power_trace(params, stream, tol):
    def builder(rng, n, i):
        return ineq.power_trace_gap(_ginibre(rng, n), s=1 + i % 3)
    return _instance_sweep(params, stream, tol, "Eq.W2", "power-trace", builder)


_ALT_PARAMS = ((2.0, 1.0), (2.0, 3.0), (3.0, 0.5))


def _run_alt(params, stream, tol):
    def builder(rng, n, i):
        r, s = _ALT_PARAMS[i % len(_ALT_PARAMS)]
        return ineq.norm_variant_gap(_gue(rng, n), _gue(rng, n), "alt", r=r, s=s)
    return _instance_sweep(params, stream, tol, "Eq.ALT", "araki-lieb-thirring",
                           builder)


def _run_karamata(params, stream, tol):
    def builder(rng, n, i):
        X = _ginibre(rng, n)
        a = np.log(np.clip(singular_values(X), 1e-300, None))
        lam = np.sort(np.abs(general_eigen(X).values))[::-1]
        b = np.log(np.clip(lam, 1e-300, None))
        return ineq.karamata_gap(a, b, omega=np.exp)
    return _instance_sweep(params, stream, tol, "Lemma.5", "karamata", builder)


def _run_phi_premise(params, stream, tol):
    def builder(rng, n, i):
        s = 1 + i % 2
        k = n if i % 4 < 2 else 1
        return ineq.phi_power_premise_gap(_ginibre(rng, n), s=s, k=k)
    return _instance_sweep(params, stream, tol, "Eq.4", "phi-power-premise",
                           builder)


def _run_phi_functional(params, stream, tol):
    worst = 0.0
    trials = max(1, min(params.trials, 500))
    for i in range(trials):
        n = params.dims[i % len(params.dims)]
        rng = stream.offset(i).generator()
        P = expm_herm(_gue(rng, n))
        top = ineq.top_k_abs_eigensum(P, n)
        s1 = float(singular_values(P).sum())
        worst = max(worst, abs(top - s1) / max(1.0, s1))
    return [_residual_case("top-k-functional-consistency", "Eq.4.2", worst,
                           tol if tol is not None else 1e-9, trials)]


def _run_phi_exp(params, stream, tol):
    def builder(rng, n, i):
        return ineq.phi_exp_gap(_gue(rng, n), _gue(rng, n), k=1 + i % n)
    return _instance_sweep(params, stream, tol, "Eq.4.1", "phi-exponential",
                           builder)


def _run_weak_majorization(params, stream, tol):
    def builder(rng, n, i):
        return ineq.norm_variant_gap(_gue(rng, n), _gue(rng, n),
                                     "weak-majorization")
    return _instance_sweep(params, stream, tol, "Eq.4.1w", "weak-majorization",
                           builder)


_SCHATTEN_PS = (1.0, 2.0, 4.0, np.inf)


def _run_schatten(params, stream, tol):
    def builder(rng, n, i):
        p = _SCHATTEN_PS[i % len(_SCHATTEN_PS)]
        return ineq.norm_variant_gap(_gue(rng, n), _gue(rng, n), "schatten", p=p)
    return _instance_sweep(params, stream, tol, "Eq.5", "schatten-norm", builder)


def _run_symmetrized(params, stream, tol):
    def builder(rng, n, i):
        p = (1.0, 2.0, 4.0)[i % 3]
        return ineq.norm_variant_gap(_gue(rng, n), _gue(rng, n),
                                     "symmetrized", p=p)
    return _instance_sweep(params, stream, tol, "Eq.5a", "symmetrized-trace",
                           builder)


def _run_log_metric(params, stream, tol):
    def builder(rng, n, i):
        return ineq.norm_variant_gap(_gue(rng, n), _gue(rng, n), "log-metric")
    return _instance_sweep(params, stream, tol, "Eq.Sn", "log-metric", builder)


def _run_delta2_identity(params, stream, tol):
    worst = 0.0
    trials = max(1, min(params.trials, 500))
    for i in range(trials):
        n = params.dims[i % len(params.dims)]
        rng = stream.offset(i).generator()
        A = _gue(rng, n)
        d = distance_delta2(A, np.zeros_like(A))
        f = frobenius_norm(A)
        worst = max(worst, abs(d - f) / max(1.0, f))
    return [_residual_case("delta2-identity", "Eq.Sn1", worst,
                           tol if tol is not None else 1e-10, trials)]


def _run_nonhermitian(params, stream, tol):
    def builder(rng, n, i):
        k = 1 if i % 2 else n
        return ineq.nonhermitian_phi_gap(_ginibre(rng, n), _ginibre(rng, n), k=k)
    return _instance_sweep(params, stream, tol, "Eq.4.1a", "nonhermitian-phi",
                           builder)


def _run_hermitian_part(params, stream, tol):
    def builder(rng, n, i):
        return ineq.hermitian_part_dominance(_ginibre(rng, n))
    return _instance_sweep(params, stream, tol, "Eq.4.1b", "hermitian-part",
                           builder)


def _run_lieb(params, stream, tol):
    dims = tuple(n for n in params.dims if n <= 5) or (min(params.dims),)
    tracker = _WorstTracker(tol if tol is not None else 1e-9)
    agreement = 0.0
    reduction = 0.0
    for i in range(params.trials):
        n = dims[i % len(dims)]
        rng = stream.offset(i).generator()
        A, B, C = _gue(rng, n), _gue(rng, n), _gue(rng, n)
        cross = i < 20
        tracker.update(ineq.lieb_triple_gap(A, B, C, cross_check=cross))
        if cross:
            cf = ineq.lieb_rhs_closed(A, B, C)
            qd = ineq.lieb_rhs_quadrature(A, B, C)
            agreement = max(agreement, abs(cf - qd) / max(1.0, abs(cf)))
            direct = checked_real(np.einsum('ij,ji->', expm_herm(A), expm_herm(B)))
            reduced = ineq.lieb_rhs_closed(A, B, np.zeros_like(C))
            reduction = max(reduction, abs(reduced - direct) / max(1.0, direct))
    extra = {"closed_vs_quadrature": agreement, "c_zero_reduction": reduction}
    case = _worst_case("lieb-triple", "Eq.4.1c", tracker.worst,
                       tracker.violations, params.trials,
                       tol if tol is not None else 1e-9, extra=extra)
    if agreement > 1e-8 or reduction > 1e-10:
        case = dataclasses.replace(case, passed=False, status="fail")
    return [case]


def _run_equality_order(params, stream, tol):
    rng = stream.generator()
    n = max(params.dims)
    d1 = np.diag(rng.standard_normal(n))
    d2 = np.diag(rng.standard_normal(n))
    comm = ineq.equality_order_scan(d1, d2)
    comm_residual = float(np.max(np.abs(comm.gaps)))
    cases = [_residual_case("equality-commuting", "EqualityOrder",
                            comm_residual, 1e-12, comm.gaps.size,
                            extra={"commuting_flag": comm.commuting})]
    worst_slope = 0.0
    details = {}
    for label, A, B in (("sigma", pauli.SIGMA3, pauli.SIGMA1),
                        ("gue", _gue(rng, n), _gue(rng, n))):
        scan = ineq.equality_order_scan(hermitize(A), hermitize(B))
        worst_slope = max(worst_slope, abs(scan.slope - 4.0))
        details[f"slope_{label}"] = scan.slope
        details[f"coefficient_{label}"] = scan.coefficient
    cases.append(_residual_case("equality-order-fit", "EqualityOrder",
                                worst_slope, tol if tol is not None else 0.1,
                                2, extra=details))
    return cases


# ---------------------------------------------------------------------------
# concentration suite runners

def _run_covariance_identity(params, stream, tol):
    n, k = 32, 2
    X = np.sqrt(n) * np.eye(n, k, dtype=np.complex128)
    exact = conc.covariance(X, check_rank_one=True)
    exact_residual = float(np.abs(exact - np.eye(k)).max())
    trials = max(params.trials, 2000)
    rng = stream.generator()
    draws = standard_complex(rng, (trials, n, k))
    sigmas = np.einsum('tpi,tpj->tij', draws.conj(), draws) / n
    mean = sigmas.mean(axis=0)
    se = sigmas.std(axis=0, ddof=1) / math.sqrt(trials)
    dev_units = float((np.abs(mean - np.eye(k)) / np.maximum(se, 1e-30)).max())
    residual = max(exact_residual, 0.0)
    passed = exact_residual <= 1e-12 and dev_units <= 4.0
    return [CaseRecord(name="covariance-mean", equation="Eq.S",
                       lhs=dev_units, rhs=4.0, margin=4.0 - dev_units,
                       passed=passed, status="pass" if passed else "fail",
                       trials=trials,
                       extra=jsonify({"constructed_identity_residual": residual}))]


def _run_rank_one(params, stream, tol):
    worst = 0.0
    trials = min(params.trials, 200)
    for i in range(trials):
        rng = stream.offset(i).generator()
        n = int(rng.integers(4, 24))
        k = int(rng.integers(1, min(n, 5) + 1))
        X = standard_complex(rng, (n, k))
        sigma = conc.covariance(X, check_rank_one=True)
        direct = X.conj().T @ X / n
        worst = max(worst, float(np.abs(sigma - hermitize(direct)).max()))
    return [_residual_case("rank-one-decomposition", "Eq.S3", worst,
                           tol if tol is not None else 1e-12, trials)]


def _run_opnorm_identity(params, stream, tol):
    worst = 0.0
    trials = min(params.trials, 300)
    for i in range(trials):
        n = params.dims[i % len(params.dims)]
        rng = stream.offset(i).generator()
        M = _gue(rng, n)
        w = np.linalg.eigvalsh(M)
        eig_route = max(-w[0], w[-1])
        sv_route = operator_norm(M)
        worst = max(worst, abs(eig_route - sv_route) / max(1.0, sv_route))
    return [_residual_case("operator-norm-identity", "Eq.SP", worst,
                           tol if tol is not None else 1e-12, trials)]


def _run_scalar_chernoff(params, stream, tol):
    p = conc.ScalarChernoffParams(n_vars=20, sigma2=1.0, epsilon=3.0)
    trials = max(params.trials, 10000)
    report = conc.scalar_chernoff(p, stream, trials=trials)
    vacuous = conc.scalar_chernoff(
        conc.ScalarChernoffParams(n_vars=20, sigma2=1.0, epsilon=0.0),
        stream.offset(1), trials=2000)
    return [CaseRecord(name="scalar-chernoff", equation="Eq.C",
                       lhs=report.ci_high, rhs=report.bound_value,
                       margin=report.bound_value - report.ci_high,
                       passed=report.passed, status=report.status,
                       trials=trials, ci=(report.ci_low, report.ci_high),
                       extra=jsonify({"empirical": report.empirical_tail,
                                      "zero_eps_bound": vacuous.bound_value,
                                      "zero_eps_tail": vacuous.empirical_tail}))]


def _run_union_bound(params, stream, tol):
    exp = conc.CovarianceExperiment(n_samples=16, dim=2, epsilon=0.5,
                                    trials=min(params.trials, 4000))
    report = conc.empirical_tail(exp, stream, escalate=False)
    lhs = report.empirical_tail
    rhs = report.extras["upper_tail"] + report.extras["lower_tail"]
    passed = lhs <= rhs + 1e-15
    return [CaseRecord(name="tail-union-bound", equation="Eq.rf",
                       lhs=lhs, rhs=rhs, margin=rhs - lhs, passed=passed,
                       status="pass" if passed else "fail", trials=exp.trials,
                       extra=jsonify(report.extras))]


def _run_bernstein(params, stream, tol):
    exp = conc.CovarianceExperiment(n_samples=16, dim=2, epsilon=1.0,
                                    trials=min(max(params.trials, 2000), 20000))
    report = conc.bernstein_tail_check(exp, stream)
    return [_gap_case("bernstein-chebyshev", "Eq.rf1", report, exp.trials)]


def _run_trace_dominance_per_trial(params, stream, tol):
    exp = conc.CovarianceExperiment(n_samples=12, dim=3, epsilon=0.5, c=2.0,
                                    trials=min(params.trials, 4000))
    try:
        conc.empirical_tail(exp, stream, escalate=False)
        passed, message = True, ""
    except RuntimeError as err:
        passed, message = False, str(err)
    return [CaseRecord(name="per-trial-exponential-dominance", equation="Eq.J",
                       lhs=0.0 if passed else 1.0, rhs=0.0,
                       margin=0.0 if passed else -1.0, passed=passed,
                       status="pass" if passed else "fail", trials=exp.trials,
                       extra={"error": message} if message else {})]


def _run_mgf_lemma(params, stream, tol):
    trials = min(max(params.trials, 4000), 40000)
    cases = []
    for j, mu in enumerate((1.0, -1.0)):
        exp = conc.CovarianceExperiment(n_samples=4, dim=2, epsilon=1.0,
                                        trials=trials)
        report = conc.aw_mgf_lemma_check(exp, mu, stream.offset(j))
        cases.append(_gap_case(f"mgf-lemma-mu{mu:+g}", "Eq.GTE", report, trials))
    return cases


def _run_trace_product(params, stream, tol):
    def builder(rng, n, i):
        return conc.trace_product_dominance(expm_herm(_gue(rng, n)),
                                            _gue(rng, n))
    return _instance_sweep(params, stream, tol, "Eq.4.29",
                           "trace-product-dominance", builder)


def _run_domination_grid(params, stream, tol):
    cases = []
    trials = min(max(params.trials, 1000), 20000)
    idx = 0
    for n in (8, 16):
        for k in (1, 2):
            for eps in (0.5, 1.0, 2.0):
                report = domination_cell(n, k, eps, trials, stream.offset(idx))
                idx += 1
                cases.append(CaseRecord(
                    name=f"tail-domination-N{n}-k{k}-eps{eps:g}",
                    equation="Eq.RU", lhs=report.ci_high,
                    rhs=report.bound_value,
                    margin=report.bound_value - report.ci_high,
                    passed=report.passed, status=report.status,
                    trials=report.trials,
                    ci=(report.ci_low, report.ci_high),
                    extra=jsonify(report.extras)))
    return cases


def _random_series(rng: np.random.Generator, max_len: int = 10,
                   max_dim: int = 4, mu: float = 1.0,
                   sign_kind: str = "rademacher") -> conc.MatrixSeries:
    m = int(rng.integers(1, max_len + 1))
    d = int(rng.integers(1, max_dim + 1))
    terms = tuple(_gue(rng, d) for _ in range(m))
    return conc.MatrixSeries(terms=terms, sign_kind=sign_kind, mu=mu)


def _run_oliveira(params, stream, tol):
    tracker = _WorstTracker(tol if tol is not None else 1e-9)
    n_series = min(max(params.trials // 20, 10), 100)
    mus = (0.5, -0.5, 1.0, -1.0, 2.0, -2.0)
    count = 0
    for i in range(n_series):
        rng = stream.offset(i).generator()
        # the first series is pinned at the configured length so oversized
        # requests hit the enumeration guard deterministically
        if i == 0:
            d = int(rng.integers(1, 5))
            base = conc.MatrixSeries(terms=tuple(_gue(rng, d) for _ in
                                                 range(params.series_length)),
                                     sign_kind="rademacher", mu=1.0)
        else:
            base = _random_series(rng, max_len=min(params.series_length, 10),
                                  max_dim=4)
        for mu in mus:
            series = conc.MatrixSeries(terms=base.terms, sign_kind="rademacher",
                                       mu=mu)
            tracker.update(conc.oliveira_mgf_check(series, mode="enumerate"))
            count += 1
    enum_case = _worst_case("sign-series-enumerate", "Eq.OB", tracker.worst,
                            tracker.violations, count,
                            tol if tol is not None else 1e-9)
    rng = stream.offset(10_000).generator()
    gaussian = _random_series(rng, max_len=6, max_dim=3, mu=1.0,
                              sign_kind="gaussian")
    mc = conc.oliveira_mgf_check(gaussian, mode="montecarlo",
                                 stream=stream.offset(10_001),
                                 trials=max(params.trials, 10000))
    mc_case = _gap_case("sign-series-montecarlo", "Eq.OB", mc,
                        max(params.trials, 10000))
    return [enum_case, mc_case]


def _run_recursion_profile(params, stream, tol):
    worst_increase = -math.inf
    profiles = min(20, max(params.trials // 100, 5))
    for i in range(profiles):
        rng = stream.offset(i).generator()
        series = _random_series(rng, max_len=8, max_dim=4,
                                mu=float(rng.choice((0.5, 1.0, 2.0))))
        profile = conc.oliveira_recursion_profile(series)
        increases = np.diff(profile) / np.maximum(1.0, profile[:-1])
        worst_increase = max(worst_increase, float(increases.max()))
    return [_residual_case("recursion-non-increasing", "Eq.DDN",
                           worst_increase, tol if tol is not None else 1e-12,
                           profiles)]


def _run_mgf_factor(params, stream, tol):
    tracker = _WorstTracker(1e-15)
    count = 0
    for i in range(min(params.trials, 300)):
        n = params.dims[i % len(params.dims)]
        rng = stream.offset(i).generator()
        A = _gue(rng, n)
        for mu in (0.0, 0.5, -0.5, 2.0):
            for kind in conc.SIGN_KINDS:
                tracker.update(conc.mgf_factor_check(A, mu, kind))
                count += 1
    return [_worst_case("mgf-factor-bound", "Eq.DD1", tracker.worst,
                        tracker.violations, count, 1e-12)]


def _run_oliveira_vs_aw(params, stream, tol):
    tracker = _WorstTracker(tol if tol is not None else 1e-9)
    count = min(max(params.trials, 200), 1000)
    for i in range(count):
        rng = stream.offset(i).generator()
        series = _random_series(rng, max_len=6, max_dim=4,
                                mu=float(rng.choice((0.5, -0.5, 2.0, -2.0))))
        tracker.update(conc.oliveira_vs_aw(series))
    return [_worst_case("series-vs-direct-bound", "Eq.RUvsOB", tracker.worst,
                        tracker.violations, count,
                        tol if tol is not None else 1e-9)]


# ---------------------------------------------------------------------------
# studies suite runners

def _run_ratio_quadrature(params, stream, tol):
    result = studies.pauli_ratio_quadrature(tol=1e-10)
    residual = abs(result.ratio - 4.0 / 3.0)
    return [_residual_case("pauli-ratio-quadrature", "Eq.R", residual,
                           tol if tol is not None else 1e-8, 1,
                           extra={"ratio": result.ratio,
                                  "numerator": result.numerator,
                                  "denominator": result.denominator})]


def _run_ratio_mc(params, stream, tol):
    trials = max(params.trials, 10000)
    est = studies.pauli_ratio_mc(trials, stream, matrix_check=min(trials, 1000))
    target = 4.0 / 3.0
    dev = abs(est.ratio - target)
    allowed = 3.0 * est.ratio_se
    passed = dev <= allowed
    cross_se = est.extras["cross_term_se"]
    cross_ok = abs(est.extras["cross_term_mean"]) <= 4.0 * cross_se
    matrix_ok = est.extras["matrix_route_max_discrepancy"] <= 1e-10
    trial_ok = est.extras["trialwise_violations"] == 0
    all_ok = passed and cross_ok and matrix_ok and trial_ok
    return [CaseRecord(name="pauli-ratio-montecarlo", equation="Eq.R",
                       lhs=est.ratio, rhs=target, margin=allowed - dev,
                       passed=all_ok, status="pass" if all_ok else "fail",
                       trials=trials, ci=(est.ci_low, est.ci_high),
                       extra=jsonify(est.extras))]


def _run_hermitization(params, stream, tol):
    n = max(16, max(params.dims))
    trials = min(max(params.trials // 10, 20), 200)
    est = studies.hermitization_ratio(n, trials, stream)
    target = math.sqrt(2.0)
    rel_dev = abs(est.ratio - target) / target
    threshold = tol if tol is not None else 0.10
    passed = rel_dev <= threshold
    return [CaseRecord(name=f"hermitization-ratio-n{n}", equation="Limit.sqrt2",
                       lhs=est.ratio, rhs=target,
                       margin=threshold - rel_dev, passed=passed,
                       status="pass" if passed else "fail", trials=trials,
                       ci=(est.ci_low, est.ci_high), extra=jsonify(est.extras))]


# ---------------------------------------------------------------------------
# counter-example suite runners

def _witness_case(name, tag, witness, budget) -> CaseRecord:
    if witness is None:
        return CaseRecord(name=name, equation=tag, lhs=math.nan, rhs=math.nan,
                          margin=math.nan, passed=False, status="fail",
                          trials=budget, extra={"found": False})
    extra = {"found": True, "trial_index": witness.trial_index,
             "matrices": witness.matrices,
             "context": witness.context}
    if witness.vectors is not None:
        extra["vectors"] = witness.vectors
    return CaseRecord(name=name, equation=tag, lhs=witness.lhs, rhs=witness.rhs,
                      margin=witness.lhs - witness.rhs, passed=True,
                      status="pass", trials=witness.trial_index + 1,
                      extra=jsonify(extra))


def _run_hunt_triple(params, stream, tol):
    budget = max(params.trials, 100000)
    witness = ineq.triple_gt_scan(stream, budget)
    return [_witness_case("hunt-triple-exponential", "Eq.4.1d", witness, budget)]


def _run_hunt_abc(params, stream, tol):
    budget = max(params.trials, 100000)
    witness = ineq.abc_trace_scan(stream, budget, k=1)
    return [_witness_case("hunt-abc-trace", "ABC.trace", witness, budget)]


# ---------------------------------------------------------------------------
# registry

#: equation tag -> (suite, checker operation, runner)
REGISTRY: dict[str, tuple[str, str, Callable]] = {
    "Eq.AB": ("inequalities", "pauli.squared_norm_identity_residual", _run_pauli_param),
    "Eq.1": ("inequalities", "inequalities.gt_gap", _run_gt),
    "Eq.1a": ("inequalities", "inequalities.pauli_reduce", _run_pauli_reduce),
    "Eq.1aA": ("inequalities", "inequalities.pauli_reduce", None),
    "Eq.1b": ("inequalities", "inequalities.oscillator_bound", _run_oscillator),
    "Eq.LT": ("inequalities", "linalg.lie_trotter_product", _run_lie_trotter),
    "Lemma.1": ("inequalities", "inequalities.cauchy_trace_gap", _run_cauchy),
    "Lemma.2": ("inequalities", "inequalities.word_trace_bound", _run_word_bound),
    "Lemma.3": ("inequalities", "inequalities.dyadic_power_gap", _run_dyadic),
    "Eq.2.6": ("inequalities", "inequalities.weyl_dominance_gap", _run_weyl),
    "Eq.H": ("inequalities", "inequalities.weyl_dominance_gap", _run_spectral_chain),
    "Eq.W2": ("inequalities", "inequalities.power_trace_gap", _run_power_trace),
    "Eq.ALT": ("inequalities", "inequalities.alt_trace_gap", _run_alt),
    "Lemma.5": ("inequalities", "inequalities.karamata_gap", _run_karamata),
    "Eq.4": ("inequalities", "inequalities.phi_power_premise_gap", _run_phi_premise),
    "Eq.4.2": ("inequalities", "inequalities.top_k_abs_eigensum", _run_phi_functional),
    "Eq.4.1": ("inequalities", "inequalities.phi_exp_gap", _run_phi_exp),
    "Eq.4.1w": ("inequalities", "inequalities.norm_variant_gap", _run_weak_majorization),
    "Eq.5": ("inequalities", "inequalities.norm_variant_gap", _run_schatten),
    "Eq.5a": ("inequalities", "inequalities.norm_variant_gap", _run_symmetrized),
    "Eq.Sn": ("inequalities", "inequalities.norm_variant_gap", _run_log_metric),
    "Eq.Sn1": ("inequalities", "linalg.distance_delta2", _run_delta2_identity),
    "Eq.4.1a": ("inequalities", "inequalities.nonhermitian_phi_gap", _run_nonhermitian),
    "Eq.4.1b": ("inequalities", "inequalities.hermitian_part_dominance",
                _run_hermitian_part),
    "Eq.4.1c": ("inequalities", "inequalities.lieb_triple_gap", _run_lieb),
    "EqualityOrder": ("inequalities", "inequalities.equality_order_scan",
                      _run_equality_order),
    "Eq.S": ("concentration", "concentration.covariance", _run_covariance_identity),
    "Eq.S3": ("concentration", "concentration.covariance", _run_rank_one),
    "Eq.SP": ("concentration", "linalg.operator_norm", _run_opnorm_identity),
    "Eq.C": ("concentration", "concentration.scalar_chernoff", _run_scalar_chernoff),
    "Eq.rf": ("concentration", "concentration.empirical_tail", _run_union_bound),
    "Eq.rf1": ("concentration", "concentration.bernstein_tail_check", _run_bernstein),
    "Eq.J": ("concentration", "concentration.empirical_tail",
             _run_trace_dominance_per_trial),
    "Eq.GTE": ("concentration", "concentration.aw_mgf_lemma_check", _run_mgf_lemma),
    "Eq.4.29": ("concentration", "concentration.trace_product_dominance",
                _run_trace_product),
    "Eq.RU": ("concentration", "concentration.aw_bound", _run_domination_grid),
    "Eq.OB": ("concentration", "concentration.oliveira_mgf_check", _run_oliveira),
    "Eq.DDN": ("concentration", "concentration.oliveira_recursion_profile",
               _run_recursion_profile),
    "Eq.DD1": ("concentration", "concentration.mgf_factor_check", _run_mgf_factor),
    "Eq.RUvsOB": ("concentration", "concentration.oliveira_vs_aw",
                  _run_oliveira_vs_aw),
    "Eq.R": ("studies", "studies.pauli_ratio_mc", _run_ratio_mc),
    "Eq.R.quadrature": ("studies", "studies.pauli_ratio_quadrature",
                        _run_ratio_quadrature),
    "Limit.sqrt2": ("studies", "studies.hermitization_ratio", _run_hermitization),
    "Eq.4.1d": ("counterexamples", "inequalities.triple_gt_scan", _run_hunt_triple),
    "ABC.trace": ("counterexamples", "inequalities.abc_trace_scan", _run_hunt_abc),
}

SUITE_NAMES = ("inequalities", "concentration", "studies", "counterexamples")

SUITE_TAGS: dict[str, tuple[str, ...]] = {
    suite: tuple(tag for tag, (s, _, runner) in REGISTRY.items()
                 if s == suite and runner is not None)
    for suite in SUITE_NAMES
}


def run_suite(name: str, params: SuiteParams) -> list[CaseRecord]:
    """Execute one named suite; case streams are derived from the seed by
    the registry position, making the output deterministic."""
    if name not in SUITE_TAGS:
        raise ValueError(f"unknown suite {name!r}")
    cases: list[CaseRecord] = []
    positions = {tag: j for j, tag in enumerate(REGISTRY)}
    for tag in SUITE_TAGS[name]:
        _, _, runner = REGISTRY[tag]
        stream = RngStream(params.seed, (positions[tag] + 1) * 100_000)
        tol = params.tolerances.get(tag)
        cases.extend(runner(params, stream, tol))
    return cases
