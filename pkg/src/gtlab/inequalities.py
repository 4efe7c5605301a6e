"""Checkers for the trace inequalities, lemmas and identities.

Every checker evaluates both sides of one inequality instance and returns
a :class:`~gtlab.reports.GapReport`.  The statements are exact theorems,
so the default tolerance only admits floating-point slack; a failing
report on valid input is an implementation bug by definition.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy.integrate import quad

from . import pauli
from .linalg import (as_complex_matrix, distance_delta2, expm, expm_herm,
                     frobenius_norm, general_eigen, herm_fn, hermitize,
                     operator_norm, psd_power, require_hermitian,
                     schatten_norm, singular_values, trace_expm)
from .reports import GapReport, checked_real, inequality_tol
from .samplers import RngStream

__all__ = [
    "MajorizationError", "LiebKernelMismatchError", "ScanConfig",
    "OrderScanResult", "Witness", "PauliReduceReport", "PauliSweepSummary",
    "gt_gap", "cauchy_trace_gap", "word_trace_bound", "dyadic_power_gap",
    "weyl_dominance_gap", "power_trace_gap", "phi_power_premise_gap",
    "phi_exp_gap", "top_k_abs_eigensum", "karamata_gap",
    "norm_variant_gap", "alt_trace_gap", "nonhermitian_phi_gap",
    "hermitian_part_dominance", "lieb_triple_gap", "lieb_rhs_closed",
    "lieb_rhs_quadrature", "counterexample_search", "triple_gt_scan",
    "abc_trace_scan", "pauli_reduce", "pauli_reduce_sweep",
    "equality_order_scan", "oscillator_bound",
]

WORD_TOKENS = ("X", "X*")


class MajorizationError(ValueError):
    """A sequence pair violates the descending/prefix-sum precondition;
    distinct from an inequality violation."""


class LiebKernelMismatchError(RuntimeError):
    """Closed-form kernel and quadrature disagree beyond the bug threshold."""


def _pair(A, B, what: str):
    Ah = require_hermitian(A, f"{what} first argument")
    Bh = require_hermitian(B, f"{what} second argument")
    if Ah.shape != Bh.shape:
        raise ValueError(f"{what} arguments must have equal dimension")
    return Ah, Bh


# ---------------------------------------------------------------------------
# trace inequality of exponentials

def gt_gap(A, B, tol: float | None = None) -> GapReport:
    """Golden-Thompson gap: ``Tr e^(A+B) <= Tr(e^A e^B)`` for Hermitian A, B.

    Equality holds exactly when A and B commute.
    """
    Ah, Bh = _pair(A, B, "gt_gap")
    lhs = trace_expm(Ah + Bh)
    rhs = checked_real(np.einsum('ij,ji->', expm_herm(Ah), expm_herm(Bh)),
                       "product trace in gt_gap")
    return GapReport.from_sides(lhs, rhs, context=f"gt_gap dim={Ah.shape[0]}",
                                tol=tol)


# ---------------------------------------------------------------------------
# word bounds on mixed products

def cauchy_trace_gap(X, Y) -> GapReport:
    """``|Tr(XY)|^2 <= Tr(X†X) Tr(Y†Y)`` for any square X, Y."""
    Xm, Ym = as_complex_matrix(X), as_complex_matrix(Y)
    if Xm.shape != Ym.shape:
        raise ValueError("cauchy_trace_gap arguments must have equal dimension")
    lhs = abs(np.einsum('ij,ji->', Xm, Ym)) ** 2
    rhs = checked_real(np.einsum('ij,ij->', Xm.conj(), Xm)
                       * np.einsum('ij,ij->', Ym.conj(), Ym),
                       "gram traces in cauchy_trace_gap")
    return GapReport.from_sides(lhs, rhs, context="cauchy_trace_gap")


def _validate_word(word: Sequence[str]) -> list[str]:
    letters = list(word)
    if len(letters) == 0 or len(letters) % 2 != 0:
        raise ValueError("word length must be even and positive")
    for token in letters:
        if token not in WORD_TOKENS:
            raise ValueError(f"word letters must be in {WORD_TOKENS}, got {token!r}")
    return letters


def word_trace_bound(X, word: Sequence[str]) -> GapReport:
    """``|Tr P| <= Tr (XX†)^n`` for P any product of ``2n`` factors X, X†.

    ``word`` lists the factors in order, e.g. ``("X", "X*", "X", "X*")``.
    """
    Xm = as_complex_matrix(X)
    letters = _validate_word(word)
    n = len(letters) // 2
    Xh = Xm.conj().T
    P = np.eye(Xm.shape[0], dtype=np.complex128)
    for token in letters:
        P = P @ (Xm if token == "X" else Xh)
    G = Xm @ Xh
    Gn = np.eye(Xm.shape[0], dtype=np.complex128)
    for _ in range(n):
        Gn = Gn @ G
    lhs = abs(np.trace(P))
    rhs = checked_real(np.trace(Gn), "gram power trace in word_trace_bound")
    return GapReport.from_sides(lhs, rhs, context=f"word_trace_bound 2n={2 * n}")


def dyadic_power_gap(A, B, k: int) -> GapReport:
    """``|Tr (AB)^(2^k)| <= Tr(A^(2^k) B^(2^k))`` for Hermitian A, B.

    The word-bound route with ``X = AB``, iterated ``k`` times.
    """
    if k < 1:
        raise ValueError("k must be a positive integer")
    Ah, Bh = _pair(A, B, "dyadic_power_gap")
    M = Ah @ Bh
    P = M
    for _ in range(k):
        P = P @ P
    Ap, Bp = Ah, Bh
    for _ in range(k):
        Ap, Bp = Ap @ Ap, Bp @ Bp
    lhs = abs(np.trace(P))
    rhs = checked_real(np.einsum('ij,ji->', Ap, Bp),
                       "power trace in dyadic_power_gap")
    return GapReport.from_sides(lhs, rhs, context=f"dyadic_power_gap k={k}")


# ---------------------------------------------------------------------------
# singular values against eigenvalues

def _abs_eigen_desc(X) -> np.ndarray:
    lam = np.abs(general_eigen(X).values)
    return np.sort(lam)[::-1]


def weyl_dominance_gap(X, s: int = 1, k: int | None = None) -> GapReport:
    """``sum_{i<=k} mu_i^(2s) >= sum_{i<=k} |lambda_i|^(2s)``.

    Singular values dominate absolute eigenvalues under any increasing
    ``w`` with ``w(exp(.))`` convex; the built-in family is ``w(x) = x^(2s)``.
    """
    if s < 1 or int(s) != s:
        raise ValueError("the built-in dominance family requires integer s >= 1")
    Xm = as_complex_matrix(X)
    n = Xm.shape[0]
    k = n if k is None else k
    if not 1 <= k <= n:
        raise ValueError("k must satisfy 1 <= k <= N")
    mu = singular_values(Xm)
    lam = _abs_eigen_desc(Xm)
    lhs = float((lam[:k] ** (2 * s)).sum())
    rhs = float((mu[:k] ** (2 * s)).sum())
    return GapReport.from_sides(lhs, rhs, context=f"weyl_dominance_gap s={s} k={k}")


def power_trace_gap(X, s: int = 1) -> GapReport:
    """``Tr (X†X)^s >= |Tr X^(2s)|``: the full-trace power specialization
    combined with the triangle inequality over the spectrum."""
    if s < 1 or int(s) != s:
        raise ValueError("s must be a positive integer")
    Xm = as_complex_matrix(X)
    P = np.linalg.matrix_power(Xm, 2 * s)
    G = np.linalg.matrix_power(Xm.conj().T @ Xm, s)
    lhs = abs(np.trace(P))
    rhs = checked_real(np.trace(G), "gram power trace in power_trace_gap")
    return GapReport.from_sides(lhs, rhs, context=f"power_trace_gap s={s}")


def top_k_abs_eigensum(X, k: int) -> float:
    """``sum of the k largest |eigenvalues|`` of a square matrix."""
    Xm = as_complex_matrix(X)
    if not 1 <= k <= Xm.shape[0]:
        raise ValueError("k must satisfy 1 <= k <= N")
    return float(_abs_eigen_desc(Xm)[:k].sum())


def phi_power_premise_gap(X, s: int = 1, k: int = 1) -> GapReport:
    """``phi((X†X)^s) >= |phi(X^(2s))|`` for the top-k absolute eigenvalue
    sum, evaluated on the powered matrices themselves."""
    if s < 1 or int(s) != s:
        raise ValueError("s must be a positive integer")
    Xm = as_complex_matrix(X)
    lhs = top_k_abs_eigensum(np.linalg.matrix_power(Xm, 2 * s), k)
    gram = np.linalg.matrix_power(hermitize(Xm.conj().T @ Xm), s)
    rhs = top_k_abs_eigensum(gram, k)
    return GapReport.from_sides(lhs, rhs,
                                context=f"phi_power_premise_gap s={s} k={k}")


def phi_exp_gap(A, B, k: int = 1) -> GapReport:
    """``phi(e^(A+B)) <= phi(e^A e^B)`` for the top-k absolute eigenvalue sum
    and Hermitian A, B."""
    Ah, Bh = _pair(A, B, "phi_exp_gap")
    n = Ah.shape[0]
    if not 1 <= k <= n:
        raise ValueError("k must satisfy 1 <= k <= N")
    lam_sum = np.exp(np.linalg.eigvalsh(Ah + Bh))[::-1]
    half = herm_fn(Bh, lambda w: np.exp(w / 2.0))
    prod_eigs = np.linalg.eigvalsh(hermitize(half @ expm_herm(Ah) @ half))[::-1]
    lhs = float(lam_sum[:k].sum())
    rhs = float(prod_eigs[:k].sum())
    return GapReport.from_sides(lhs, rhs, context=f"phi_exp_gap k={k}")


# ---------------------------------------------------------------------------
# convex-order transfer for sequences

def validate_majorization_pair(a, b) -> tuple[np.ndarray, np.ndarray]:
    """Check ``b`` descending with every prefix sum of ``b`` at most the
    matching prefix sum of ``a``; raises :class:`MajorizationError`."""
    av = np.asarray(a, dtype=np.float64)
    bv = np.asarray(b, dtype=np.float64)
    if av.shape != bv.shape or av.ndim != 1 or av.size == 0:
        raise MajorizationError("sequences must be 1-d and of equal positive length")
    if np.any(np.diff(bv) > 1e-15):
        raise MajorizationError("b must be sorted descending")
    # rounding slack: prefix conditions often hold with exact equality
    # (e.g. at the determinant endpoint of spectral sequences), so admit
    # accumulation noise proportional to the summand magnitudes
    cum_a = np.cumsum(av)
    cum_b = np.cumsum(bv)
    scale = np.maximum.accumulate(np.maximum(np.abs(av), np.abs(bv)))
    guard = 1e-10 * np.maximum(1.0, np.maximum(np.abs(cum_a), scale))
    if np.any(cum_a - cum_b < -guard):
        raise MajorizationError("prefix sums of b must not exceed those of a")
    return av, bv


def karamata_gap(a, b, omega: Callable[[np.ndarray], np.ndarray] = np.exp) -> GapReport:
    """``sum omega(b_i) <= sum omega(a_i)`` for convex increasing ``omega``
    whenever ``b`` is descending with dominated prefix sums."""
    av, bv = validate_majorization_pair(a, b)
    lhs = float(np.sum(omega(bv)))
    rhs = float(np.sum(omega(av)))
    return GapReport.from_sides(lhs, rhs, context=f"karamata_gap m={av.size}")


# ---------------------------------------------------------------------------
# norm variants of the exponential trace bound

def alt_trace_gap(P, Q, r: float, s: float) -> GapReport:
    """``Tr (P^(1/2) Q P^(1/2))^(rs) <= Tr (P^(r/2) Q^r P^(r/2))^s`` for
    positive definite P, Q and ``r >= 1, s > 0``."""
    if r < 1 or s <= 0:
        raise ValueError("requires r >= 1 and s > 0")
    Ph = require_hermitian(P, "alt_trace_gap first argument")
    Qh = require_hermitian(Q, "alt_trace_gap second argument")
    if Ph.shape != Qh.shape:
        raise ValueError("alt_trace_gap arguments must have equal dimension")
    for name, M in (("P", Ph), ("Q", Qh)):
        if np.linalg.eigvalsh(M)[0] <= 0:
            raise ValueError(f"alt_trace_gap requires positive definite input ({name})")
    sq = psd_power(Ph, 0.5)
    inner = hermitize(sq @ Qh @ sq)
    lhs = float((np.clip(np.linalg.eigvalsh(inner), 0.0, None) ** (r * s)).sum())
    rh = psd_power(Ph, r / 2.0)
    outer = hermitize(rh @ psd_power(Qh, r) @ rh)
    rhs = float((np.clip(np.linalg.eigvalsh(outer), 0.0, None) ** s).sum())
    return GapReport.from_sides(lhs, rhs, context=f"alt_trace_gap r={r} s={s}")


def norm_variant_gap(A, B, variant: str, p: float | None = None,
                     r: float | None = None, s: float | None = None,
                     k: int | None = None) -> GapReport:
    """Norm-level variants of the exponential trace bound for Hermitian A, B.

    * ``"schatten"``: ``||e^(A+B)||_p <= ||e^A e^B||_p`` (p >= 1 or inf).
    * ``"symmetrized"``: ``Tr e^(A+B) <= Tr (e^(pB/2) e^(pA) e^(pB/2))^(1/p)``.
    * ``"log-metric"``: ``||A - B||_2 <= delta_2(e^A, e^B)``.
    * ``"alt"``: the positive-power bound applied to ``(e^A, e^B)``.
    * ``"weak-majorization"``: worst partial-sum margin of the eigenvalues
      of ``e^(A+B)`` against the singular values of ``e^A e^B``.
    """
    Ah, Bh = _pair(A, B, "norm_variant_gap")
    if variant == "schatten":
        if p is None:
            raise ValueError("schatten variant requires p")
        # the product norm is taken on the positive definite carrier
        # e^(B/2) e^A e^(B/2), whose spectrum is the eigenvalue moduli of
        # e^A e^B; at p=1 this reduces exactly to the trace check
        lhs = schatten_norm(expm_herm(Ah + Bh), p)
        half = herm_fn(Bh, lambda w: np.exp(w / 2.0))
        rhs = schatten_norm(hermitize(half @ expm_herm(Ah) @ half), p)
        return GapReport.from_sides(lhs, rhs, context=f"norm_variant schatten p={p}")
    if variant == "symmetrized":
        if p is None or p == np.inf or p < 1:
            raise ValueError("symmetrized variant requires finite p >= 1")
        lhs = trace_expm(Ah + Bh)
        half = herm_fn(Bh, lambda w: np.exp(p * w / 2.0))
        inner = hermitize(half @ expm_herm(p * Ah) @ half)
        rhs = float((np.clip(np.linalg.eigvalsh(inner), 0.0, None)
                     ** (1.0 / p)).sum())
        return GapReport.from_sides(lhs, rhs, context=f"norm_variant symmetrized p={p}")
    if variant == "log-metric":
        lhs = frobenius_norm(Ah - Bh)
        rhs = distance_delta2(Ah, Bh)
        return GapReport.from_sides(lhs, rhs, context="norm_variant log-metric")
    if variant == "alt":
        if r is None or s is None:
            raise ValueError("alt variant requires r and s")
        report = alt_trace_gap(expm_herm(Ah), expm_herm(Bh), r, s)
        return GapReport.from_sides(report.lhs, report.rhs,
                                    context=f"norm_variant alt r={r} s={s}")
    if variant == "weak-majorization":
        n = Ah.shape[0]
        lam = np.exp(np.linalg.eigvalsh(Ah + Bh))[::-1]
        mu = singular_values(expm_herm(Ah) @ expm_herm(Bh))
        margins = np.cumsum(mu) - np.cumsum(lam)
        ks = range(1, n + 1) if k is None else [k]
        worst = min(ks, key=lambda kk: margins[kk - 1])
        return GapReport.from_sides(float(np.cumsum(lam)[worst - 1]),
                                    float(np.cumsum(mu)[worst - 1]),
                                    context=f"norm_variant weak-majorization k={worst}")
    raise ValueError(f"unknown variant {variant!r}")


# ---------------------------------------------------------------------------
# non-Hermitian extension

def nonhermitian_phi_gap(A, B=None, k: int = 1) -> GapReport:
    """``|phi(e^(A+B))| <= phi(e^((A+A†)/2) e^((B+B†)/2))`` for the top-k
    absolute eigenvalue sum; A, B need not be Hermitian (B may be None)."""
    Am = as_complex_matrix(A)
    Bm = np.zeros_like(Am) if B is None else as_complex_matrix(B)
    if Am.shape != Bm.shape:
        raise ValueError("nonhermitian_phi_gap arguments must have equal dimension")
    n = Am.shape[0]
    if not 1 <= k <= n:
        raise ValueError("k must satisfy 1 <= k <= N")
    lhs = top_k_abs_eigensum(expm(Am + Bm), k)
    HA = hermitize((Am + Am.conj().T) / 2.0)
    HB = hermitize((Bm + Bm.conj().T) / 2.0)
    half = herm_fn(HB, lambda w: np.exp(w / 2.0))
    prod_eigs = np.linalg.eigvalsh(hermitize(half @ expm_herm(HA) @ half))[::-1]
    rhs = float(prod_eigs[:k].sum())
    return GapReport.from_sides(lhs, rhs, context=f"nonhermitian_phi_gap k={k}")


def hermitian_part_dominance(A) -> GapReport:
    """``lambda_1((A+A†)/2) >= Re lambda_1(A)`` for any square A."""
    Am = as_complex_matrix(A)
    lhs = float(general_eigen(Am).values.real.max())
    rhs = float(np.linalg.eigvalsh(hermitize((Am + Am.conj().T) / 2.0))[-1])
    return GapReport.from_sides(lhs, rhs, context="hermitian_part_dominance")


# ---------------------------------------------------------------------------
# three-matrix bound with resolvent kernel

def _lieb_kernel(gamma: np.ndarray) -> np.ndarray:
    """``(log g_i - log g_j)/(g_i - g_j)`` with a series for nearly equal
    eigenvalues (relative gap below 1e-8) to avoid cancellation."""
    gi = gamma[:, None]
    gj = gamma[None, :]
    x = (gi - gj) / gj
    near = np.abs(x) < 1e-8
    with np.errstate(divide='ignore', invalid='ignore'):
        exact = (np.log(gi) - np.log(gj)) / (gi - gj)
    series = (1.0 - x / 2.0 + x * x / 3.0) / gj
    return np.where(near, series, exact)


def lieb_rhs_closed(A, B, C) -> float:
    """Closed form of ``int_0^inf Tr(e^A (t+e^-C)^-1 e^B (t+e^-C)^-1) dt``
    through the eigendecomposition of ``e^-C``."""
    Ah = require_hermitian(A, "lieb_rhs_closed A")
    Bh = require_hermitian(B, "lieb_rhs_closed B")
    Ch = require_hermitian(C, "lieb_rhs_closed C")
    if not Ah.shape == Bh.shape == Ch.shape:
        raise ValueError("lieb_rhs_closed arguments must have equal dimension")
    w, W = np.linalg.eigh(-Ch)
    gamma = np.exp(w)
    M = W.conj().T @ expm_herm(Ah) @ W
    N = W.conj().T @ expm_herm(Bh) @ W
    value = np.einsum('ij,ji,ij->', M, N, _lieb_kernel(gamma))
    return checked_real(value, "closed-form kernel sum in lieb_rhs_closed")


def lieb_rhs_quadrature(A, B, C, tol: float = 1e-10) -> float:
    """The same integral by adaptive quadrature on ``(0, T]`` (through a
    Moebius change of variables) plus an analytic bound on the ``t > T``
    tail; the matrix inverse is evaluated by linear solves at each node,
    independently of the closed-form kernel."""
    Ah = require_hermitian(A, "lieb_rhs_quadrature A")
    Bh = require_hermitian(B, "lieb_rhs_quadrature B")
    Ch = require_hermitian(C, "lieb_rhs_quadrature C")
    n = Ah.shape[0]
    eA, eB, emC = expm_herm(Ah), expm_herm(Bh), expm_herm(-Ch)
    eye = np.eye(n)

    def integrand(t: float) -> float:
        R = np.linalg.solve(t * eye + emC, eye)
        return float(np.einsum('ij,jk,kl,li->', eA, R, eB, R).real)

    tr_eA = float(np.trace(eA).real)
    norm_eB = float(np.linalg.eigvalsh(eB)[-1])
    gmin = float(np.linalg.eigvalsh(emC)[0])
    scale = max(1.0, abs(integrand(0.0)) * gmin)
    # tail:  integrand(t) <= Tr(e^A) ||e^B||_op / (t + gmin)^2,  so the
    # mass beyond T is at most Tr(e^A) ||e^B||_op / (T + gmin) <= tol/2
    T = 2.0 * tr_eA * norm_eB / (tol * scale) + 1.0
    s0 = float(np.trace(emC).real / n)
    u_max = T / (T + s0)

    def transformed(u: float) -> float:
        t = s0 * u / (1.0 - u)
        return integrand(t) * s0 / (1.0 - u) ** 2

    value, _ = quad(transformed, 0.0, u_max,
                    epsabs=0.25 * tol * scale, epsrel=0.25 * tol, limit=400)
    return float(value)


def lieb_triple_gap(A, B, C, cross_check: bool = False,
                    quad_tol: float = 1e-10) -> GapReport:
    """``Tr e^(A+B+C)`` against the resolvent-kernel upper bound for three
    Hermitian matrices; reduces to the two-matrix bound at ``C = 0``.

    With ``cross_check`` the closed-form kernel is verified against the
    quadrature route; disagreement beyond 1e-6 relative flags a bug.
    """
    Ah = require_hermitian(A, "lieb_triple_gap A")
    Bh = require_hermitian(B, "lieb_triple_gap B")
    Ch = require_hermitian(C, "lieb_triple_gap C")
    if not Ah.shape == Bh.shape == Ch.shape:
        raise ValueError("lieb_triple_gap arguments must have equal dimension")
    rhs = lieb_rhs_closed(Ah, Bh, Ch)
    if cross_check:
        qd = lieb_rhs_quadrature(Ah, Bh, Ch, tol=quad_tol)
        if abs(rhs - qd) > 1e-6 * max(1.0, abs(rhs)):
            raise LiebKernelMismatchError(
                f"kernel {rhs!r} vs quadrature {qd!r} disagree beyond 1e-6")
    lhs = trace_expm(Ah + Bh + Ch)
    return GapReport.from_sides(lhs, rhs, context=f"lieb_triple_gap dim={Ah.shape[0]}")


# ---------------------------------------------------------------------------
# counter-example hunts

@dataclass(frozen=True)
class Witness:
    """A found counter-example: both sides evaluated on concrete matrices."""

    target: str
    trial_index: int
    lhs: float
    rhs: float
    matrices: tuple
    vectors: tuple | None = None
    context: str = ""


def triple_gt_scan(stream: RngStream, budget: int, zero_c: bool = False,
                   chunk: int = 8192) -> Witness | None:
    """Search Gaussian 2x2 traceless triples for
    ``Tr e^(A+B+C) > |Tr(e^A e^B e^C)|``; None when the budget is spent.

    With ``zero_c`` the third matrix is pinned to zero, which reduces the
    statement to the two-matrix theorem, so no witness can exist.
    """
    if budget < 1:
        raise ValueError("budget must be positive")
    done = 0
    block = 0
    while done < budget:
        count = min(chunk, budget - done)
        rng = stream.offset(block).generator()
        a = rng.standard_normal((count, 3))
        b = rng.standard_normal((count, 3))
        c = np.zeros((count, 3)) if zero_c else rng.standard_normal((count, 3))
        lhs = pauli.trace_exp_sum(a, b + c)
        rhs = np.abs(pauli.trace_exp_triple(a, b, c))
        tol = 1e-9 * np.maximum(1.0, np.maximum(lhs, rhs))
        hits = np.nonzero(lhs > rhs + tol)[0]
        for idx in hits:
            av, bv, cv = a[idx], b[idx], c[idx]
            Am, Bm, Cm = pauli.to_matrix(av), pauli.to_matrix(bv), pauli.to_matrix(cv)
            lhs_m = trace_expm(Am + Bm + Cm)
            rhs_m = abs(np.trace(expm_herm(Am) @ expm_herm(Bm) @ expm_herm(Cm)))
            if lhs_m > rhs_m + inequality_tol(lhs_m, rhs_m):
                return Witness(target="triple-gt", trial_index=done + int(idx),
                               lhs=lhs_m, rhs=rhs_m, matrices=(Am, Bm, Cm),
                               vectors=(av, bv, cv),
                               context="Tr e^(A+B+C) exceeds |Tr(e^A e^B e^C)|")
        done += count
        block += 1
    return None


def abc_trace_scan(stream: RngStream, budget: int, k: int = 1,
                   chunk: int = 4096) -> Witness | None:
    """Search Gaussian 3x3 real symmetric triples for
    ``|Tr (ABC)^(2^k)| > Tr(A^(2^k) B^(2^k) C^(2^k))``."""
    if budget < 1:
        raise ValueError("budget must be positive")
    if k < 1:
        raise ValueError("k must be a positive integer")
    done = 0
    block = 0
    while done < budget:
        count = min(chunk, budget - done)
        rng = stream.offset(block).generator()
        G = rng.standard_normal((count, 3, 3, 3))
        sym = (G + np.swapaxes(G, 2, 3)) / 2.0
        A, B, C = sym[:, 0], sym[:, 1], sym[:, 2]
        P = A @ B @ C
        for _ in range(k):
            P = P @ P
        Ap, Bp, Cp = A, B, C
        for _ in range(k):
            Ap, Bp, Cp = Ap @ Ap, Bp @ Bp, Cp @ Cp
        lhs = np.abs(np.einsum('tii->t', P))
        rhs = np.einsum('tij,tjk,tki->t', Ap, Bp, Cp)
        tol = 1e-9 * np.maximum(1.0, np.maximum(lhs, np.abs(rhs)))
        hits = np.nonzero(lhs > rhs + tol)[0]
        if hits.size:
            idx = int(hits[0])
            return Witness(target="abc-trace", trial_index=done + idx,
                           lhs=float(lhs[idx]), rhs=float(rhs[idx]),
                           matrices=(A[idx].copy(), B[idx].copy(), C[idx].copy()),
                           context=f"|Tr (ABC)^(2^k)| exceeds the power bound, k={k}")
        done += count
        block += 1
    return None


def counterexample_search(target: str, stream: RngStream, budget: int,
                          k: int = 1) -> Witness | None:
    """Dispatch on the hunt target: ``"triple-gt"`` or ``"abc-trace"``.

    A ``None`` result means the budget was exhausted without a witness;
    that is a result, not an error.
    """
    if target == "triple-gt":
        return triple_gt_scan(stream, budget)
    if target == "abc-trace":
        return abc_trace_scan(stream, budget, k=k)
    raise ValueError(f"unknown counter-example target {target!r}")


# ---------------------------------------------------------------------------
# 2x2 reduction

@dataclass(frozen=True)
class PauliReduceReport:
    """Both reduced forms of the 2x2 case, from the vector data alone."""

    cosh_gap: GapReport
    law_of_cosines_gap: GapReport


_PAULI_CONSISTENCY_TOL = 1e-10


def pauli_reduce(a, b) -> PauliReduceReport:
    """2x2 reduction of the exponential trace bound.

    Checks ``cosh|a+b| <= cosh|a| cosh|b| - cos(theta) sinh|a| sinh|b|``
    from the vector data, cross-validating both sides against the matrix
    traces, and restates it as the hyperbolic law of cosines
    ``|c|^2 >= |a|^2 + |b|^2 - 2|a||b| cos(theta)`` with
    ``|c| = arccosh`` of the right side.
    """
    av, bv = pauli.as_vector(a), pauli.as_vector(b)
    lhs = 0.5 * pauli.trace_exp_sum(av, bv)
    rhs = 0.5 * pauli.trace_exp_product(av, bv)
    Am, Bm = pauli.to_matrix(av), pauli.to_matrix(bv)
    lhs_m = 0.5 * trace_expm(Am + Bm)
    rhs_m = 0.5 * checked_real(np.trace(expm_herm(Am) @ expm_herm(Bm)),
                               "matrix route in pauli_reduce")
    for vec_side, mat_side, side in ((lhs, lhs_m, "lhs"), (rhs, rhs_m, "rhs")):
        if abs(vec_side - mat_side) > _PAULI_CONSISTENCY_TOL * max(1.0, abs(vec_side)):
            raise RuntimeError(
                f"vector and matrix evaluations of the {side} disagree: "
                f"{vec_side!r} vs {mat_side!r}")
    cosh_gap = GapReport.from_sides(lhs, rhs, context="pauli_reduce cosh form")
    c = float(np.arccosh(max(rhs, 1.0)))
    sq_lhs = float(np.sum((av + bv) ** 2))
    law = GapReport.from_sides(sq_lhs, c * c, context="pauli_reduce law of cosines")
    return PauliReduceReport(cosh_gap=cosh_gap, law_of_cosines_gap=law)


@dataclass(frozen=True)
class PauliSweepSummary:
    trials: int
    violations_cosh: int
    violations_law: int
    worst_margin_cosh: float
    worst_margin_law: float
    max_route_discrepancy: float


def pauli_reduce_sweep(trials: int, stream: RngStream,
                       chunk: int = 65536) -> PauliSweepSummary:
    """Vectorized sweep of :func:`pauli_reduce` over Gaussian pairs.

    The matrix-route comparison goes through batched eigendecompositions
    of the represented 2x2 matrices, not the closed forms.
    """
    if trials < 1:
        raise ValueError("trials must be positive")
    done = 0
    block = 0
    viol_cosh = viol_law = 0
    worst_cosh = worst_law = np.inf
    max_disc = 0.0
    while done < trials:
        count = min(chunk, trials - done)
        rng = stream.offset(block).generator()
        a = rng.standard_normal((count, 3))
        b = rng.standard_normal((count, 3))
        lhs = 0.5 * pauli.trace_exp_sum(a, b)
        rhs = 0.5 * pauli.trace_exp_product(a, b)
        tol = 1e-9 * np.maximum(1.0, np.maximum(np.abs(lhs), np.abs(rhs)))
        margins = rhs - lhs
        viol_cosh += int(np.count_nonzero(margins < -tol))
        worst_cosh = min(worst_cosh, float(margins.min()))
        c = np.arccosh(np.maximum(rhs, 1.0))
        sq_lhs = np.sum((a + b) ** 2, axis=-1)
        law_margins = c * c - sq_lhs
        law_tol = 1e-9 * np.maximum(1.0, np.maximum(sq_lhs, c * c))
        viol_law += int(np.count_nonzero(law_margins < -law_tol))
        worst_law = min(worst_law, float(law_margins.min()))
        # independent matrix route, batched through LAPACK
        wa, Va = np.linalg.eigh(pauli.to_matrix(a))
        wb, Vb = np.linalg.eigh(pauli.to_matrix(b))
        eA = np.einsum('tik,tk,tjk->tij', Va, np.exp(wa), Va.conj())
        eB = np.einsum('tik,tk,tjk->tij', Vb, np.exp(wb), Vb.conj())
        lhs_m = 0.5 * np.exp(np.linalg.eigvalsh(
            pauli.to_matrix(a + b))).sum(axis=-1)
        rhs_m = 0.5 * np.einsum('tij,tji->t', eA, eB).real
        disc = np.maximum(np.abs(lhs - lhs_m) / np.maximum(1.0, np.abs(lhs)),
                          np.abs(rhs - rhs_m) / np.maximum(1.0, np.abs(rhs)))
        max_disc = max(max_disc, float(disc.max()))
        done += count
        block += 1
    return PauliSweepSummary(trials=trials, violations_cosh=viol_cosh,
                             violations_law=viol_law,
                             worst_margin_cosh=worst_cosh,
                             worst_margin_law=worst_law,
                             max_route_discrepancy=max_disc)


# ---------------------------------------------------------------------------
# equality order scan

@dataclass(frozen=True)
class ScanConfig:
    """Scale grid for the equality-order scan and the oscillator parameter."""

    epsilon_grid: tuple[float, ...]
    beta: float = 1.0

    def __post_init__(self):
        grid = tuple(float(e) for e in self.epsilon_grid)
        if len(grid) == 0 or any(e <= 0 for e in grid):
            raise ValueError("epsilon grid must be positive")
        if any(b <= a for a, b in zip(grid, grid[1:])):
            raise ValueError("epsilon grid must be strictly increasing")
        if self.beta <= 0:
            raise ValueError("beta must be positive")
        object.__setattr__(self, "epsilon_grid", grid)


def default_scan_config() -> ScanConfig:
    return ScanConfig(epsilon_grid=tuple(np.geomspace(1e-3, 1e-1, 13)))


@dataclass(frozen=True)
class OrderScanResult:
    epsilons: np.ndarray
    gaps: np.ndarray
    commuting: bool
    slope: float | None
    coefficient: float


def equality_order_scan(A, B, cfg: ScanConfig | None = None) -> OrderScanResult:
    """Leading order of ``g(eps) = Tr(e^(eps A) e^(eps B)) - Tr e^(eps(A+B))``.

    Commuting pairs give ``g = 0`` on the whole grid; otherwise the log-log
    slope is fitted (expected 4) and ``g/eps^4`` is extrapolated to zero by
    a linear fit in ``eps^2`` over the lower half of the grid.
    """
    cfg = cfg or default_scan_config()
    Ah, Bh = _pair(A, B, "equality_order_scan")
    eps = np.asarray(cfg.epsilon_grid)
    if eps.size < 4 or eps[-1] / eps[0] < 10.0:
        raise ValueError("grid too coarse for a stable fit: need at least "
                         "4 points spanning a decade")
    gaps = np.empty(eps.size)
    scale = 1.0
    for i, e in enumerate(eps):
        lhs = checked_real(np.einsum('ij,ji->', expm_herm(e * Ah), expm_herm(e * Bh)),
                           "product trace in equality_order_scan")
        rhs = trace_expm(e * (Ah + Bh))
        gaps[i] = lhs - rhs
        scale = max(scale, abs(lhs), abs(rhs))
    if np.max(np.abs(gaps)) <= 1e-12 * scale:
        return OrderScanResult(epsilons=eps, gaps=gaps, commuting=True,
                               slope=None, coefficient=0.0)
    usable = gaps > 0
    if np.count_nonzero(usable) < 4:
        raise ValueError("grid too coarse for a stable fit: fewer than 4 "
                         "positive gap values")
    slope, _ = np.polyfit(np.log(eps[usable]), np.log(gaps[usable]), 1)
    low = usable & (eps <= eps[usable][np.count_nonzero(usable) // 2])
    y = gaps[low] / eps[low] ** 4
    x = eps[low] ** 2
    if np.count_nonzero(low) >= 2:
        _, intercept = np.polyfit(x, y, 1)
    else:
        intercept = float(y[0])
    return OrderScanResult(epsilons=eps, gaps=gaps, commuting=False,
                           slope=float(slope), coefficient=float(intercept))


# ---------------------------------------------------------------------------
# scalar oscillator bound

def oscillator_bound(beta: float) -> GapReport:
    """``1/sinh(beta) <= 1/beta`` for positive beta."""
    beta = float(beta)
    if beta <= 0:
        raise ValueError("beta must be positive")
    lhs = 0.0 if beta > 700 else 1.0 / np.sinh(beta)
    rhs = 1.0 / beta
    return GapReport.from_sides(lhs, rhs, context=f"oscillator_bound beta={beta}")
