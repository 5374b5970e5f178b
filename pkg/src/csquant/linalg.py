"""Dense complex matrix helpers and Hermitian eigensolvers.

Matrices are plain ``numpy`` ``complex128`` arrays.  The default
eigensolver is LAPACK ``zheevd`` through :func:`numpy.linalg.eigh`; a
self-contained cyclic complex Jacobi solver is available with
``method="jacobi"`` and is bit-reproducible because its sweep order is
fixed.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, DomainError

__all__ = [
    "EigenReport",
    "as_matrix",
    "matmul",
    "commutator",
    "max_abs",
    "is_hermitian",
    "hermitian_eigen",
    "anti_hermitian_eigen",
    "jacobi_eigen",
    "spectral_norm",
]

HERMITIAN_RTOL = 1e-10


@dataclass(frozen=True)
class EigenReport:
    """Spectrum of a Hermitian matrix.

    Attributes
    ----------
    eigenvalues : ndarray
        Real eigenvalues in ascending order.
    eigenvectors : ndarray or None
        Matching eigenvectors as columns.
    residual : float
        ``max_k ||A v_k - lambda_k v_k||`` (``nan`` if vectors were not kept).
    sweeps : int
        Jacobi sweeps used (0 for LAPACK).
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray | None
    residual: float
    sweeps: int = 0


def as_matrix(a) -> np.ndarray:
    """Validate and convert to a square finite ``complex128`` array."""
    m = np.asarray(a, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 1:
        raise DomainError(f"expected a non-empty square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise DomainError("matrix has non-finite entries")
    return m


def _same_dim(a: np.ndarray, b: np.ndarray) -> None:
    if a.shape != b.shape:
        raise DomainError(f"dimension mismatch: {a.shape} vs {b.shape}")


def matmul(a, b) -> np.ndarray:
    """Matrix product of two square matrices of equal size."""
    a, b = as_matrix(a), as_matrix(b)
    _same_dim(a, b)
    return a @ b


def commutator(a, b) -> np.ndarray:
    """``AB - BA``."""
    a, b = as_matrix(a), as_matrix(b)
    _same_dim(a, b)
    return a @ b - b @ a


def max_abs(a) -> float:
    a = np.asarray(a)
    return float(np.max(np.abs(a))) if a.size else 0.0


def is_hermitian(a, rtol: float = HERMITIAN_RTOL) -> bool:
    a = np.asarray(a)
    return max_abs(a - a.conj().T) <= rtol * max(max_abs(a), np.finfo(float).tiny)


def _residual(a: np.ndarray, w: np.ndarray, v: np.ndarray) -> float:
    return float(np.max(np.linalg.norm(a @ v - v * w[None, :], axis=0)))


def jacobi_eigen(a, tol: float = 1e-14, max_sweeps: int = 60) -> tuple[np.ndarray, np.ndarray, int]:
    """Cyclic complex Jacobi diagonalisation of a Hermitian matrix.

    Each rotation acts on the pair ``(p, q)`` as
    ``G = [[c, s], [-s conj(u), c conj(u)]]`` where ``u`` is the phase of
    ``A[p, q]``; this first makes the pivot real, then applies the usual
    real rotation.

    Returns
    -------
    w, v, sweeps
        Unsorted eigenvalues, eigenvector columns and sweep count.
    """
    m = np.array(a, dtype=complex)
    n = m.shape[0]
    v = np.eye(n, dtype=complex)
    scale = max(max_abs(m), np.finfo(float).tiny)
    for sweep in range(1, max_sweeps + 1):
        off = np.sqrt(np.sum(np.abs(m - np.diag(np.diag(m))) ** 2))
        if off <= tol * scale:
            return np.real(np.diag(m)).copy(), v, sweep - 1
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = m[p, q]
                mag = abs(apq)
                if mag <= 1e-300 or mag <= 1e-18 * scale:
                    continue
                u = apq / mag
                app, aqq = m[p, p].real, m[q, q].real
                theta = (aqq - app) / (2.0 * mag)
                t = 1.0 / (abs(theta) + np.sqrt(theta * theta + 1.0))
                if theta < 0:
                    t = -t
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                uc = np.conj(u)
                # columns: M <- M G
                mp_, mq_ = m[:, p].copy(), m[:, q]
                m[:, p] = c * mp_ - s * uc * mq_
                m[:, q] = s * mp_ + c * uc * mq_
                # rows: M <- G^H M
                rp, rq = m[p, :].copy(), m[q, :]
                m[p, :] = c * rp - s * u * rq
                m[q, :] = s * rp + c * u * rq
                m[p, q] = m[q, p] = 0.0
                m[p, p] = m[p, p].real
                m[q, q] = m[q, q].real
                vp, vq = v[:, p].copy(), v[:, q]
                v[:, p] = c * vp - s * uc * vq
                v[:, q] = s * vp + c * uc * vq
    raise ConvergenceError(f"Jacobi did not converge in {max_sweeps} sweeps")


def hermitian_eigen(a, vectors: bool = True, method: str = "lapack") -> EigenReport:
    """Full spectrum of a Hermitian matrix.

    Parameters
    ----------
    a : array_like
        Hermitian up to ``1e-10 * max|a|``; it is symmetrised before solving.
    vectors : bool
        Keep eigenvectors and compute the residual.
    method : {"lapack", "jacobi"}
    """
    m = as_matrix(a)
    if not is_hermitian(m):
        raise DomainError("matrix is not Hermitian within tolerance")
    m = 0.5 * (m + m.conj().T)
    if method == "lapack":
        if vectors:
            w, v = np.linalg.eigh(m)
        else:
            return EigenReport(np.linalg.eigvalsh(m), None, float("nan"))
        sweeps = 0
    elif method == "jacobi":
        w, v, sweeps = jacobi_eigen(m)
        order = np.argsort(w, kind="stable")
        w, v = w[order], v[:, order]
    else:
        raise DomainError(f"unknown eigensolver {method!r}")
    if not vectors:
        return EigenReport(w, None, float("nan"), sweeps)
    return EigenReport(w, v, _residual(m, w, v), sweeps)


def anti_hermitian_eigen(a, vectors: bool = False, method: str = "lapack") -> EigenReport:
    """Spectrum of an anti-Hermitian matrix ``A``, reported as imaginary parts.

    ``A = -i H`` with ``H = iA`` Hermitian, so the eigenvalues of ``A`` are
    ``-i`` times those of ``H``; the returned values are their imaginary
    parts in ascending order.
    """
    m = as_matrix(a)
    rep = hermitian_eigen(1j * m, vectors=vectors, method=method)
    w = -rep.eigenvalues[::-1]
    v = None if rep.eigenvectors is None else rep.eigenvectors[:, ::-1]
    return EigenReport(w, v, rep.residual, rep.sweeps)


def spectral_norm(a) -> float:
    """Largest singular value.

    Hermitian and anti-Hermitian inputs use the largest ``|eigenvalue|``;
    anything else goes through the eigenvalues of ``A^H A``.
    """
    m = as_matrix(a)
    if is_hermitian(m):
        return float(np.max(np.abs(hermitian_eigen(m, vectors=False).eigenvalues)))
    if is_hermitian(1j * m):
        return float(np.max(np.abs(hermitian_eigen(1j * m, vectors=False).eigenvalues)))
    g = m.conj().T @ m
    return float(np.sqrt(max(np.max(hermitian_eigen(g, vectors=False).eigenvalues), 0.0)))
