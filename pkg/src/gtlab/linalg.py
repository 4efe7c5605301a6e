"""Dense complex linear algebra used by every checker.

All routines operate on square ``complex128`` arrays.  Eigenvalue and
singular-value factorizations are delegated to LAPACK through
``numpy.linalg`` behind the contracts below (descending order, validated
reconstruction); matrix exponentials, the log-metric distance and the
Lie-Trotter product are implemented here.

Conventions:

* Hermitian carriers are produced by :func:`hermitize`, which symmetrizes
  ``(M + M†)/2`` so downstream code never sees drift-generated asymmetry.
* Spectra are sorted descending by real part, then by absolute value.
* Singular values are the square roots of the eigenvalues of ``X†X``,
  clamped at zero.
"""

from __future__ import annotations

import numbers
from typing import Callable, NamedTuple

import numpy as np

from .reports import checked_real

__all__ = [
    "EigenSolverError", "Spectrum",
    "as_complex_matrix", "hermitize", "is_hermitian", "require_hermitian",
    "herm_eigen", "general_eigen", "singular_values",
    "herm_fn", "expm", "expm_herm", "psd_power",
    "schatten_norm", "operator_norm", "frobenius_norm", "norm",
    "distance_delta2", "lie_trotter_product", "trace_expm",
]

#: Tolerance on ``|M - M†|`` accepted when a Hermitian argument is required.
HERMITIAN_ATOL = 1e-12


class EigenSolverError(RuntimeError):
    """Raised when a factorization does not converge within LAPACK's budget."""

    def __init__(self, message: str, matrix=None):
        super().__init__(message)
        self.matrix = matrix


class Spectrum(NamedTuple):
    """Eigenvalues sorted descending (by real part, then absolute value),
    with the unitary eigenvector basis when one is available."""

    values: np.ndarray
    basis: np.ndarray | None = None


def as_complex_matrix(M) -> np.ndarray:
    """Validate and return ``M`` as a square, finite complex128 array."""
    A = np.asarray(M, dtype=np.complex128)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {A.shape}")
    if A.shape[0] == 0:
        raise ValueError("matrix dimension must be positive")
    if not np.all(np.isfinite(A.view(np.float64))):
        raise ValueError("matrix entries must be finite")
    return A


def hermitize(M) -> np.ndarray:
    """Construct a Hermitian carrier: ``(M + M†)/2`` of a square matrix."""
    A = as_complex_matrix(M)
    return (A + A.conj().T) / 2.0


def is_hermitian(M, atol: float = HERMITIAN_ATOL) -> bool:
    A = np.asarray(M)
    scale = max(1.0, float(np.abs(A).max(initial=0.0)))
    return bool(np.abs(A - A.conj().T).max(initial=0.0) <= atol * scale)


def require_hermitian(M, what: str = "argument") -> np.ndarray:
    """Return the symmetrized matrix, rejecting genuinely non-Hermitian input."""
    A = as_complex_matrix(M)
    if not is_hermitian(A):
        raise ValueError(f"{what} must be Hermitian")
    return (A + A.conj().T) / 2.0


def _sort_descending(values: np.ndarray) -> np.ndarray:
    order = np.lexsort((-np.abs(values), -values.real))
    return order


def herm_eigen(M) -> Spectrum:
    """Eigendecomposition of a Hermitian matrix, values descending.

    The returned basis ``U`` satisfies ``U diag(values) U† = M`` up to
    rounding (columns are eigenvectors in the same order as ``values``).
    """
    A = require_hermitian(M, "herm_eigen input")
    try:
        w, U = np.linalg.eigh(A)
    except np.linalg.LinAlgError as exc:
        raise EigenSolverError(
            f"Hermitian eigensolver did not converge within the LAPACK "
            f"iteration budget on a {A.shape[0]}x{A.shape[0]} matrix: {exc}",
            matrix=A) from exc
    return Spectrum(values=w[::-1].copy(), basis=U[:, ::-1].copy())


def general_eigen(M) -> Spectrum:
    """All complex eigenvalues of a square matrix (no eigenvectors)."""
    A = as_complex_matrix(M)
    try:
        w = np.linalg.eigvals(A)
    except np.linalg.LinAlgError as exc:
        raise EigenSolverError(
            f"general eigensolver did not converge within the LAPACK "
            f"iteration budget on a {A.shape[0]}x{A.shape[0]} matrix: {exc}",
            matrix=A) from exc
    return Spectrum(values=w[_sort_descending(w)], basis=None)


def singular_values(M) -> np.ndarray:
    """Singular values ``mu_1 >= ... >= mu_N >= 0`` of a square matrix,
    computed as clamped square roots of the eigenvalues of ``M†M``."""
    A = as_complex_matrix(M)
    w = herm_eigen(A.conj().T @ A).values
    return np.sqrt(np.clip(w, 0.0, None))


def herm_fn(M, fn: Callable[[np.ndarray], np.ndarray]) -> np.ndarray:
    """Apply a scalar function to a Hermitian matrix through its spectrum."""
    w, U = herm_eigen(M)
    return (U * fn(w)) @ U.conj().T


def expm_herm(M) -> np.ndarray:
    """Exponential of a Hermitian matrix via its eigendecomposition."""
    return herm_fn(M, np.exp)


def _expm_general(A: np.ndarray, tol: float = 1e-12) -> np.ndarray:
    """Scaling-and-squaring with a truncated Taylor series on the scaled
    matrix; the series is summed until terms fall below ``tol`` relative."""
    n = A.shape[0]
    norm1 = float(np.abs(A).sum(axis=0).max(initial=0.0))
    squarings = max(0, int(np.ceil(np.log2(norm1 / 0.5))) if norm1 > 0.5 else 0)
    T = A / (2.0 ** squarings)
    result = np.eye(n, dtype=np.complex128)
    term = np.eye(n, dtype=np.complex128)
    scale = 1.0
    for k in range(1, 40):
        term = term @ T / k
        result = result + term
        scale = max(scale, float(np.abs(result).max()))
        if float(np.abs(term).max()) <= 1e-4 * tol * scale:
            break
    for _ in range(squarings):
        result = result @ result
    return result


def expm(M) -> np.ndarray:
    """Matrix exponential.

    Accepts a square complex matrix, or a real 3-vector ``a`` interpreted
    as the traceless 2x2 Hermitian matrix ``a1*s1 + a2*s2 + a3*s3`` (then
    the closed form ``cosh|a| I + sinh|a|/|a| A`` is used).  Hermitian
    matrices go through the eigendecomposition route, everything else
    through scaling-and-squaring.
    """
    A = np.asarray(M)
    if A.ndim == 1 and A.shape == (3,) and not np.iscomplexobj(A):
        from . import pauli
        return pauli.expm_vector(A)
    A = as_complex_matrix(A)
    if is_hermitian(A):
        return expm_herm(A)
    return _expm_general(A)


def psd_power(M, p: float) -> np.ndarray:
    """Real power of a positive semidefinite Hermitian matrix (eigenvalues
    are clamped at zero before the power is taken)."""
    return herm_fn(M, lambda w: np.power(np.clip(w, 0.0, None), p))


def trace_expm(M) -> float:
    """``Tr exp(M)`` for Hermitian ``M``, summed over the spectrum."""
    A = require_hermitian(M, "trace_expm input")
    return float(np.exp(np.linalg.eigvalsh(A)).sum())


def schatten_norm(M, p) -> float:
    """Schatten p-norm ``(sum mu_i^p)^(1/p)``; ``p=inf`` is the operator norm."""
    if p != np.inf and (not isinstance(p, numbers.Real) or p < 1):
        raise ValueError(f"Schatten order must satisfy p >= 1 or be inf, got {p}")
    mu = singular_values(M)
    if p == np.inf:
        return float(mu[0])
    return float((mu ** p).sum() ** (1.0 / p))


def operator_norm(M) -> float:
    """Largest singular value."""
    return float(singular_values(M)[0])


def frobenius_norm(M) -> float:
    return float(np.linalg.norm(as_complex_matrix(M)))


def norm(M, kind: str, p: float | None = None) -> float:
    """Dispatch on a norm tag: ``schatten`` (requires ``p``), ``operator``,
    ``frobenius``, or ``log-metric`` (geodesic distance from the identity,
    positive definite Hermitian input only)."""
    if kind == "schatten":
        if p is None:
            raise ValueError("schatten norm requires the order p")
        return schatten_norm(M, p)
    if kind == "operator":
        return operator_norm(M)
    if kind == "frobenius":
        return frobenius_norm(M)
    if kind == "log-metric":
        Mh = require_hermitian(M, "log-metric norm input")
        lam = np.linalg.eigvalsh(Mh)
        if lam[0] <= 0:
            raise ValueError("log-metric norm requires positive definite input")
        return float(np.sqrt((np.log(lam) ** 2).sum()))
    raise ValueError(f"unknown norm kind {kind!r}")


def distance_delta2(A, B) -> float:
    """Geodesic distance between ``exp(A)`` and ``exp(B)`` on positive
    definite matrices: ``sqrt(sum log^2 lambda_i(e^A e^-B))``.

    The eigenvalues of ``e^A e^-B`` are computed as those of the positive
    definite matrix ``e^(-B/2) e^A e^(-B/2)``; they are clamped at 1e-300
    before the log as a guard against underflow, not a semantics change.
    """
    Ah = require_hermitian(A, "distance_delta2 first argument")
    Bh = require_hermitian(B, "distance_delta2 second argument")
    if Ah.shape != Bh.shape:
        raise ValueError("distance_delta2 arguments must have equal dimension")
    half = herm_fn(Bh, lambda w: np.exp(-w / 2.0))
    P = hermitize(half @ expm_herm(Ah) @ half)
    lam = np.clip(np.linalg.eigvalsh(P), 1e-300, None)
    return float(np.sqrt((np.log(lam) ** 2).sum()))


def lie_trotter_product(A, B, n: int) -> np.ndarray:
    """``(e^(A/n) e^(B/n))^n`` by explicit repeated multiplication."""
    if n < 1:
        raise ValueError("n must be a positive integer")
    Ah = require_hermitian(A, "lie_trotter_product first argument")
    Bh = require_hermitian(B, "lie_trotter_product second argument")
    step = expm_herm(Ah / n) @ expm_herm(Bh / n)
    result = step
    for _ in range(n - 1):
        result = result @ step
    return result


def trace_of_product(A, B, context: str = "") -> float:
    """``Tr(AB)`` with the imaginary-residue check applied."""
    return checked_real(np.einsum('ij,ji->', A, B), context)
