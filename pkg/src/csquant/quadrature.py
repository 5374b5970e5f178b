"""Gaussian quadrature rules used by the quantization and symbol routines.

Hermite and Legendre rules come from :mod:`numpy.polynomial`.  Laguerre
nodes are eigenvalues of the Jacobi matrix polished by Newton steps, and
the weights are computed here in *scaled* form
``W_j = w_j * exp(u_j)`` because the plain weights underflow for a few
hundred nodes, which is exactly the regime a coherent-state integral
over ``|z|^2`` needs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .errors import DomainError

__all__ = [
    "QuadratureRule",
    "gauss_laguerre_scaled",
    "gauss_hermite",
    "gauss_legendre",
    "composite_gauss_legendre",
]


@dataclass(frozen=True)
class QuadratureRule:
    """Nodes and weights of a one-dimensional rule."""

    nodes: np.ndarray
    weights: np.ndarray

    def __len__(self) -> int:
        return len(self.nodes)

    def integrate(self, values: np.ndarray) -> complex:
        return np.sum(self.weights * values)


def _readonly(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=float)
    a.flags.writeable = False
    return a


def _laguerre_scaled(n: int, u: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Return ``(L_n, L_{n-1}, log_scale)`` with both values divided by ``exp(log_scale)``.

    ``log_scale`` starts at ``-u/2`` so that the scaled Laguerre function
    ``exp(-u/2) L_n(u)`` never leaves double range.
    """
    lm1 = np.zeros_like(u)
    l0 = np.ones_like(u)
    log_scale = -0.5 * u
    for k in range(n):
        lp1 = ((2 * k + 1 - u) * l0 - k * lm1) / (k + 1)
        lm1, l0 = l0, lp1
        big = np.abs(l0) > 1e100
        if np.any(big):
            f = np.where(big, 1e-100, 1.0)
            l0 = l0 * f
            lm1 = lm1 * f
            log_scale = log_scale + np.where(big, 100.0 * math.log(10.0), 0.0)
    return l0, lm1, log_scale


@lru_cache(maxsize=32)
def gauss_laguerre_scaled(n: int) -> QuadratureRule:
    r"""Gauss-Laguerre rule with weights multiplied by ``exp(u_j)``.

    ``sum_j W_j exp(-u_j) g(u_j)`` approximates
    :math:`\int_0^\infty e^{-u} g(u)\,du`.  The scaled weights are
    :math:`W_j = u_j / ((n+1)^2 [e^{-u_j/2} L_{n+1}(u_j)]^2)` with the
    Laguerre polynomial evaluated by a rescaled three-term recurrence.
    """
    if n < 1:
        raise DomainError("need at least one node")
    k = np.arange(n, dtype=float)
    u = eigh_tridiagonal(2.0 * k + 1.0, k[1:], eigvals_only=True)
    for _ in range(3):
        ln, lnm1, _ = _laguerre_scaled(n, u)
        # L_n' = n (L_n - L_{n-1}) / u ; the common scale cancels
        u = u - ln * u / (n * (ln - lnm1))
    lnp1, _, log_scale = _laguerre_scaled(n + 1, u)
    log_abs = np.log(np.abs(lnp1)) + log_scale
    w = u / ((n + 1) ** 2) * np.exp(-2.0 * log_abs)
    return QuadratureRule(_readonly(u), _readonly(w))


@lru_cache(maxsize=32)
def gauss_hermite(n: int) -> QuadratureRule:
    """Gauss-Hermite rule for weight ``exp(-x^2)`` on the real line."""
    if n < 1:
        raise DomainError("need at least one node")
    x, w = np.polynomial.hermite.hermgauss(n)
    return QuadratureRule(_readonly(x), _readonly(w))


@lru_cache(maxsize=64)
def _leggauss(n: int) -> tuple[np.ndarray, np.ndarray]:
    return np.polynomial.legendre.leggauss(n)


def gauss_legendre(n: int, a: float = -1.0, b: float = 1.0) -> QuadratureRule:
    """Gauss-Legendre rule mapped to ``[a, b]``."""
    if n < 1:
        raise DomainError("need at least one node")
    x, w = _leggauss(n)
    half = 0.5 * (b - a)
    return QuadratureRule(_readonly(half * x + 0.5 * (a + b)), _readonly(half * w))


def composite_gauss_legendre(edges, n: int = 20) -> QuadratureRule:
    """Gauss-Legendre with ``n`` nodes on each panel ``[edges[i], edges[i+1]]``."""
    edges = np.asarray(edges, dtype=float)
    if edges.ndim != 1 or len(edges) < 2 or np.any(np.diff(edges) <= 0):
        raise DomainError("panel edges must be strictly increasing")
    x, w = _leggauss(n)
    a = edges[:-1, None]
    half = 0.5 * np.diff(edges)[:, None]
    nodes = (a + half * (x[None, :] + 1.0)).ravel()
    weights = (half * w[None, :]).ravel()
    return QuadratureRule(_readonly(nodes), _readonly(weights))
