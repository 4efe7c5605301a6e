"""Traceless 2x2 Hermitian matrices as real 3-vectors.

A vector ``a = (a1, a2, a3)`` represents ``A = a1*s1 + a2*s2 + a3*s3`` in
the standard Pauli basis.  Because ``A^2 = |a|^2 I``, exponentials and
trace products have closed forms in the vector data; every function here
accepts batched input of shape ``(..., 3)``.
"""

from __future__ import annotations

import numpy as np

SIGMA1 = np.array([[0, 1], [1, 0]], dtype=np.complex128)
SIGMA2 = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)
SIGMA3 = np.array([[1, 0], [0, -1]], dtype=np.complex128)
SIGMA = np.stack([SIGMA1, SIGMA2, SIGMA3])

#: Below this radius ``sinh(r)/r`` is evaluated by series to avoid
#: cancellation in the closed-form exponential.
_SINHC_SERIES_CUTOFF = 1e-4


def as_vector(a) -> np.ndarray:
    v = np.asarray(a, dtype=np.float64)
    if v.shape[-1] != 3:
        raise ValueError(f"expected trailing dimension 3, got shape {v.shape}")
    if not np.all(np.isfinite(v)):
        raise ValueError("vector entries must be finite")
    return v


def to_matrix(a) -> np.ndarray:
    """``(..., 3) -> (..., 2, 2)``: the represented Hermitian matrix."""
    v = as_vector(a)
    return np.einsum('...k,kij->...ij', v, SIGMA)


def sinhc(r):
    """``sinh(r)/r`` with the series limit 1 + r^2/6 + r^4/120 near zero."""
    r = np.asarray(r, dtype=np.float64)
    small = np.abs(r) < _SINHC_SERIES_CUTOFF
    safe = np.where(small, 1.0, r)
    out = np.where(small, 1.0 + r * r / 6.0 + r**4 / 120.0, np.sinh(safe) / safe)
    return out if out.ndim else float(out)


def expm_vector(a) -> np.ndarray:
    """Closed-form exponential ``cosh|a| I + (sinh|a|/|a|) A``, batched."""
    v = as_vector(a)
    r = np.linalg.norm(v, axis=-1)
    ch = np.asarray(np.cosh(r))
    sc = np.asarray(sinhc(r))
    eye = np.broadcast_to(np.eye(2, dtype=np.complex128), v.shape[:-1] + (2, 2))
    return ch[..., None, None] * eye + sc[..., None, None] * to_matrix(v)


def trace_exp_sum(a, b):
    """``Tr exp(A+B) = 2 cosh |a+b|``, batched."""
    v = as_vector(a) + as_vector(b)
    out = 2.0 * np.cosh(np.linalg.norm(v, axis=-1))
    return out if np.ndim(out) else float(out)


def trace_exp_product(a, b):
    """``Tr(e^A e^B) = 2 (cosh|a| cosh|b| + (a.b) sinhc|a| sinhc|b|)``.

    The dot-product term equals ``-cos(theta) sinh|a| sinh|b|`` in the
    angle convention ``cos(theta) = -(a.b)/(|a||b|)``, written divisionless
    so that zero vectors are handled exactly.
    """
    va, vb = as_vector(a), as_vector(b)
    ra = np.linalg.norm(va, axis=-1)
    rb = np.linalg.norm(vb, axis=-1)
    dot = np.sum(va * vb, axis=-1)
    out = 2.0 * (np.cosh(ra) * np.cosh(rb) + dot * sinhc(ra) * sinhc(rb))
    return out if np.ndim(out) else float(out)


def trace_exp_triple(a, b, c):
    """``Tr(e^A e^B e^C)`` in closed form; complex in general, batched.

    The imaginary part is ``2 ((a x b).c) sinhc|a| sinhc|b| sinhc|c|``, the
    source of the triple-product counter-examples.
    """
    va, vb, vc = as_vector(a), as_vector(b), as_vector(c)
    ra = np.linalg.norm(va, axis=-1)
    rb = np.linalg.norm(vb, axis=-1)
    rc = np.linalg.norm(vc, axis=-1)
    cha, chb, chc = np.cosh(ra), np.cosh(rb), np.cosh(rc)
    sha, shb, shc = sinhc(ra), sinhc(rb), sinhc(rc)
    re = cha * chb * chc \
        + cha * np.sum(vb * vc, axis=-1) * shb * shc \
        + chb * np.sum(va * vc, axis=-1) * sha * shc \
        + chc * np.sum(va * vb, axis=-1) * sha * shb
    im = np.sum(np.cross(va, vb) * vc, axis=-1) * sha * shb * shc
    out = 2.0 * (re + 1j * im)
    return out if np.ndim(out) else complex(out)


def squared_norm_identity_residual(a) -> float:
    """``| |a|^2 - Tr(A^2)/2 |`` for the represented matrix; zero in exact
    arithmetic, used to validate the parametrization."""
    v = as_vector(a)
    A = to_matrix(v)
    tr = np.einsum('...ij,...ji->...', A, A).real / 2.0
    return float(np.max(np.abs(tr - np.sum(v * v, axis=-1))))
