r"""Coherent-state quantization :math:`f \mapsto A_f`.

For a classical observable :math:`f(z, \bar z)` the operator

.. math::
    A_f = \frac{1}{\pi}\int f(z,\bar z)\,|z\rangle\langle z|\,d^2z

has Fock matrix elements

.. math::
    (A_f)_{nn'} = \frac{1}{\pi\sqrt{n!\,n'!}}
        \int e^{-|z|^2} z^{n}\bar z^{n'} f(z,\bar z)\,d^2z .

Three evaluation paths are provided:

* :func:`quantize_general` -- Gauss-Laguerre in :math:`u = |z|^2` times a
  uniform rule in the angle.  The discrete operator is a positive
  combination of coherent projectors, so Hermiticity and positivity are
  preserved to rounding.
* :func:`quantize_isotropic` -- the diagonal gamma transform for
  :math:`f = h(|z|^2)`, exact for polynomial ``h``.
* :func:`quantize_angular` -- the closed form for :math:`f = g(\theta)`
  from the Fourier coefficients of ``g``.

Closed-form builders for the angle, time and Hamiltonian operators are
included, plus :func:`fourier_coeffs_pv` for angular functions with poles.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence, Union

import numpy as np
from numpy.polynomial import Polynomial
from scipy import special as _sp
from scipy.optimize import brentq, minimize_scalar

from .errors import ConvergenceError, DomainError, QuadratureError
from .fock import FockOperator, position_momentum
from .quadrature import composite_gauss_legendre, gauss_laguerre_scaled

__all__ = [
    "AngularFourierCoeffs",
    "QuadratureSpec",
    "General",
    "Isotropic",
    "Angular",
    "Monomial",
    "Builtin",
    "Observable",
    "BUILTINS",
    "quantize",
    "quantize_general",
    "quantize_isotropic",
    "quantize_angular",
    "fourier_coeffs_pv",
    "angle_fourier_coeffs",
    "cot_fourier_coeffs",
    "find_poles",
    "build_angle_operator",
    "build_time_operator",
    "build_free_hamiltonian",
    "build_harmonic_hamiltonian",
    "monomial",
]


# ---------------------------------------------------------------------------
# Data types
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AngularFourierCoeffs:
    r"""Fourier coefficients :math:`c_m = \frac1{2\pi}\int_0^{2\pi} g(\theta)e^{-im\theta}d\theta`.

    Parameters
    ----------
    values : array_like
        ``2*m_max + 1`` complex values ordered ``c_{-m_max} .. c_{m_max}``.
    """

    values: np.ndarray

    def __post_init__(self):
        v = np.array(self.values, dtype=complex)
        if v.ndim != 1 or len(v) % 2 != 1:
            raise DomainError("need an odd number of coefficients c_{-M}..c_M")
        if not np.all(np.isfinite(v)):
            raise DomainError("Fourier coefficients must be finite")
        v.flags.writeable = False
        object.__setattr__(self, "values", v)

    @property
    def m_max(self) -> int:
        return (len(self.values) - 1) // 2

    def __getitem__(self, m: int) -> complex:
        if abs(m) > self.m_max:
            return 0.0j
        return complex(self.values[m + self.m_max])

    @classmethod
    def from_function(cls, m_max: int, coeff: Callable[[int], complex]) -> AngularFourierCoeffs:
        return cls(np.array([coeff(m) for m in range(-m_max, m_max + 1)], dtype=complex))

    def is_real_symbol(self, atol: float = 1e-12) -> bool:
        """``c_{-m} == conj(c_m)``, i.e. the underlying ``g`` is real."""
        v = self.values
        return bool(np.max(np.abs(v - v[::-1].conj()), initial=0.0) <= atol * max(1.0, np.max(np.abs(v))))

    def evaluate(self, theta) -> np.ndarray:
        """Partial Fourier sum at ``theta``."""
        m = np.arange(-self.m_max, self.m_max + 1)
        th = np.asarray(theta, dtype=float)
        return np.exp(1j * np.multiply.outer(th, m)) @ self.values


@dataclass(frozen=True)
class QuadratureSpec:
    """Discretisation for :func:`quantize_general`.

    Attributes
    ----------
    radial : int or None
        Gauss-Laguerre nodes in ``u = |z|^2``; default ``order + 40``.
    angular : int or None
        Uniform angular nodes; default ``max(4*order, 64)``.
    pv_epsilon : float or None
        Largest exclusion half-width for principal-value integrals.
    check_tol : float or None
        If set, the rule is doubled and the two results must agree to
        this tolerance (relative to the largest entry).
    """

    radial: int | None = None
    angular: int | None = None
    pv_epsilon: float | None = None
    check_tol: float | None = None

    def resolved(self, order: int) -> tuple[int, int]:
        n_r = self.radial if self.radial is not None else order + 40
        n_t = self.angular if self.angular is not None else max(4 * order, 64)
        if n_r < 1 or n_t < 2 * order - 1:
            raise DomainError(f"quadrature ({n_r}, {n_t}) too small for order {order}")
        return n_r, n_t

    def doubled(self, order: int) -> QuadratureSpec:
        n_r, n_t = self.resolved(order)
        return QuadratureSpec(2 * n_r, 2 * n_t, self.pv_epsilon, None)


@dataclass(frozen=True)
class General:
    """Arbitrary ``f(z)`` evaluated on complex arrays."""

    f: Callable[[np.ndarray], np.ndarray]
    name: str = "f"


@dataclass(frozen=True)
class Isotropic:
    """``h(|z|^2)``; ``h`` is a callable of ``u`` or a :class:`~numpy.polynomial.Polynomial`."""

    h: Union[Callable[[np.ndarray], np.ndarray], Polynomial]
    name: str = "h"


@dataclass(frozen=True)
class Angular:
    """``g(theta)`` given by its Fourier coefficients."""

    coeffs: AngularFourierCoeffs
    name: str = "g"


@dataclass(frozen=True)
class Monomial:
    """``z**a * conj(z)**b``."""

    a: int
    b: int


BUILTINS = ("angle", "time", "free_hamiltonian", "harmonic_hamiltonian", "q", "p", "modulus_squared")


@dataclass(frozen=True)
class Builtin:
    """One of the named observables in :data:`BUILTINS`."""

    name: str
    hbar: float = field(default=1.0)

    def __post_init__(self):
        if self.name not in BUILTINS:
            raise DomainError(f"unknown builtin observable {self.name!r}; choose from {BUILTINS}")

    def classical(self, z) -> np.ndarray:
        """Classical function behind the builtin, on complex ``z``."""
        z = np.asarray(z, dtype=complex)
        theta = np.mod(np.angle(z), 2.0 * np.pi)
        if self.name == "angle":
            return theta
        if self.name == "time":
            return 1.0 / np.tan(theta)
        if self.name == "free_hamiltonian":
            return z.imag**2
        if self.name == "harmonic_hamiltonian":
            return self.hbar * np.abs(z) ** 2
        if self.name == "q":
            return math.sqrt(2.0) * z.real
        if self.name == "p":
            return math.sqrt(2.0) * z.imag
        return np.abs(z) ** 2


Observable = Union[General, Isotropic, Angular, Monomial, Builtin]


# ---------------------------------------------------------------------------
# Helpers
# ---------------------------------------------------------------------------


def _check_order(order: int) -> None:
    if not isinstance(order, (int, np.integer)) or order < 1:
        raise DomainError(f"order must be a positive integer, got {order!r}")


def _half_lgamma(order: int) -> np.ndarray:
    return 0.5 * _sp.gammaln(np.arange(order) + 1.0)


def _coherent_radial(order: int, u: np.ndarray) -> np.ndarray:
    """``V[n, j] = exp(-u_j/2) u_j^{n/2} / sqrt(n!)``."""
    n = np.arange(order, dtype=float)[:, None]
    logv = -0.5 * u[None, :] + 0.5 * n * np.log(u)[None, :] - _half_lgamma(order)[:, None]
    return np.exp(logv)


def _call_vectorized(f: Callable, z: np.ndarray) -> np.ndarray:
    try:
        out = np.asarray(f(z), dtype=complex)
        if out.shape != z.shape:
            out = np.broadcast_to(out, z.shape).astype(complex)
    except (TypeError, ValueError):
        out = np.vectorize(lambda w: complex(f(w)), otypes=[complex])(z)
    return out


# ---------------------------------------------------------------------------
# Quantization paths
# ---------------------------------------------------------------------------


def _quantize_general_once(f: Callable, order: int, n_r: int, n_t: int) -> tuple[np.ndarray, bool]:
    rule = gauss_laguerre_scaled(n_r)
    u = np.asarray(rule.nodes)
    theta = 2.0 * np.pi * np.arange(n_t) / n_t
    z = np.sqrt(u)[:, None] * np.exp(1j * theta)[None, :]
    with np.errstate(all="ignore"):
        vals = _call_vectorized(f, z)
    if not np.all(np.isfinite(vals)):
        raise DomainError("observable returned non-finite values on the quadrature grid")
    real = bool(np.all(vals.imag == 0.0))
    # c_m(u_j) for every node, m taken modulo n_t
    cm = np.fft.fft(vals, axis=1) / n_t
    v = _coherent_radial(order, u)
    w = np.asarray(rule.weights)
    out = np.zeros((order, order), dtype=complex)
    idx = np.arange(order)
    for m in range(-(order - 1), order):
        k = abs(m)
        rows = idx[: order - k] if m >= 0 else idx[k:]
        cols = rows + m
        out[rows, cols] = (v[rows] * v[cols]) @ (w * cm[:, m % n_t])
    if real:
        out = 0.5 * (out + out.conj().T)
    return out, real


def quantize_general(f: Callable, order: int, quad: QuadratureSpec | None = None, name: str = "f") -> FockOperator:
    """Quantize an arbitrary observable by product quadrature.

    Parameters
    ----------
    f : callable
        ``f(z)`` for complex ``z`` (vectorised calls are attempted first).
    order : int
        Truncation order.
    quad : QuadratureSpec, optional
        Node counts; by default ``order + 40`` radial and ``4*order`` angular.

    Raises
    ------
    DomainError
        If ``f`` yields non-finite values.
    QuadratureError
        If ``quad.check_tol`` is set and doubling the rule changes the result.
    """
    _check_order(order)
    quad = quad or QuadratureSpec()
    n_r, n_t = quad.resolved(order)
    mat, real = _quantize_general_once(f, order, n_r, n_t)
    if quad.check_tol is not None:
        n_r2, n_t2 = quad.doubled(order).resolved(order)
        mat2, _ = _quantize_general_once(f, order, n_r2, n_t2)
        scale = max(float(np.max(np.abs(mat2))), 1.0)
        diff = float(np.max(np.abs(mat - mat2)))
        if diff > quad.check_tol * scale:
            raise QuadratureError(f"quadrature for {name} not converged: doubling changed entries by {diff:.3e}")
        mat = mat2
    return FockOperator(mat, real, f"quantize_general({name}, n_r={n_r}, n_theta={n_t})")


def _polynomial_coeffs(h) -> np.ndarray | None:
    if isinstance(h, Polynomial):
        return np.asarray(h.coef)
    if isinstance(h, (list, tuple, np.ndarray)):
        return np.asarray(h)
    return None


def quantize_isotropic(h, order: int, n_radial: int | None = None, name: str = "h") -> FockOperator:
    r"""Diagonal operator :math:`(A)_{nn} = \frac1{n!}\int_0^\infty e^{-u}u^n h(u)\,du`.

    A :class:`~numpy.polynomial.Polynomial` (or a coefficient sequence
    ``c_0, c_1, ...`` in ``u``) is transformed exactly using
    :math:`\int e^{-u}u^{n+k}du / n! = (n+k)!/n!`.  Any other callable is
    integrated with scaled Gauss-Laguerre nodes.
    """
    _check_order(order)
    coeffs = _polynomial_coeffs(h)
    if coeffs is not None:
        diag = np.zeros(order, dtype=complex)
        for k, c in enumerate(coeffs):
            if c != 0:
                diag += c * np.array([float(math.perm(n + k, k)) for n in range(order)])
        real = bool(np.all(np.imag(coeffs) == 0))
        return FockOperator(np.diag(diag), real, f"quantize_isotropic({name}, exact polynomial)")
    rule = gauss_laguerre_scaled(n_radial or order + 60)
    u = np.asarray(rule.nodes)
    with np.errstate(all="ignore"):
        vals = np.asarray(h(u), dtype=complex)
    if not np.all(np.isfinite(vals)):
        raise DomainError("isotropic observable returned non-finite values")
    v = _coherent_radial(order, u)
    diag = (v * v) @ (np.asarray(rule.weights) * vals)
    real = bool(np.all(vals.imag == 0.0))
    return FockOperator(np.diag(diag), real, f"quantize_isotropic({name}, n_r={len(u)})")


def _angular_prefactor(order: int) -> np.ndarray:
    """``Gamma((n+n')/2 + 1) / sqrt(n! n'!)``."""
    n = np.arange(order, dtype=float)
    s = 0.5 * (n[:, None] + n[None, :]) + 1.0
    return np.exp(_sp.gammaln(s) - _half_lgamma(order)[:, None] - _half_lgamma(order)[None, :])


def quantize_angular(coeffs: AngularFourierCoeffs, order: int, name: str = "g") -> FockOperator:
    r"""Quantize :math:`g(\theta)` from its Fourier coefficients.

    :math:`(A)_{nn'} = \Gamma(\tfrac{n+n'}2+1)\,c_{n'-n}/\sqrt{n!\,n'!}`;
    coefficients beyond ``m_max`` are taken as zero.
    """
    _check_order(order)
    n = np.arange(order)
    diff = n[None, :] - n[:, None]
    c = np.zeros((order, order), dtype=complex)
    mask = np.abs(diff) <= coeffs.m_max
    c[mask] = coeffs.values[diff[mask] + coeffs.m_max]
    mat = _angular_prefactor(order) * c
    herm = coeffs.is_real_symbol()
    if herm:
        mat = 0.5 * (mat + mat.conj().T)
    return FockOperator(mat, herm, f"quantize_angular({name}, m_max={coeffs.m_max})")


def monomial(a: int, b: int, order: int) -> FockOperator:
    r"""Quantization of :math:`z^a\bar z^b`.

    Nonzero entries sit at ``n + a == n' + b`` with value
    :math:`(n+a)!/\sqrt{n!\,n'!}`.
    """
    _check_order(order)
    if a < 0 or b < 0:
        raise DomainError("monomial powers must be non-negative")
    mat = np.zeros((order, order), dtype=complex)
    lg = _sp.gammaln(np.arange(order + max(a, b)) + 1.0)
    for n in range(order):
        n2 = n + a - b
        if 0 <= n2 < order:
            mat[n, n2] = math.exp(lg[n + a] - 0.5 * (lg[n] + lg[n2]))
    return FockOperator(mat, a == b, f"z^{a} zbar^{b}")


# ---------------------------------------------------------------------------
# Principal-value Fourier coefficients
# ---------------------------------------------------------------------------

_TWO_PI = 2.0 * math.pi
_POLE_GRID = 4096


def _safe_eval(g: Callable, t: float) -> complex:
    try:
        return complex(g(t))
    except (ZeroDivisionError, OverflowError, ValueError):
        return complex(np.inf)


def find_poles(g: Callable, grid: int = _POLE_GRID, check_order: bool = True) -> list[float]:
    """Locate simple poles of a ``2*pi``-periodic ``g`` on ``[0, 2*pi)``.

    A pole is a sign change of ``g`` between neighbouring grid points where
    ``|g|`` is large; it is refined as a root of ``1/g``.

    Raises
    ------
    ConvergenceError
        If ``check_order`` and a singularity grows faster than ``1/|t - t0|^1.5``
        (double poles and worse, with or without a sign change).
    """
    offset = 0.5 * _TWO_PI / grid * (math.sqrt(5.0) - 1.0)
    th = offset + _TWO_PI * np.arange(grid + 1) / grid
    with np.errstate(all="ignore"):
        vals = np.real(np.asarray([_safe_eval(g, t) for t in th]))
    finite = np.abs(vals[np.isfinite(vals)])
    big = 10.0 * (np.median(finite) if finite.size else 1.0) + 10.0

    def inv(t):
        v = _safe_eval(g, t).real
        return 0.0 if not np.isfinite(v) or v == 0.0 else 1.0 / v

    poles: list[float] = []
    for k in range(grid):
        a, b = vals[k], vals[k + 1]
        if not (np.isfinite(a) and np.isfinite(b)):
            continue
        if a * b < 0 and max(abs(a), abs(b)) > big:
            try:
                root = brentq(inv, th[k], th[k + 1], xtol=1e-15, rtol=1e-15)
            except RuntimeError:
                root = 0.5 * (th[k] + th[k + 1])
            root = float(np.mod(root, _TWO_PI))
            if _TWO_PI - root < 1e-12:
                root = 0.0
            if all(abs(root - p) > 1e-9 for p in poles):
                poles.append(root)
    if check_order:
        _check_singularities(g, th, np.abs(vals), big, poles)
    return sorted(poles)


def _singularity_order(g: Callable, t0: float) -> float:
    """Growth exponent ``k`` of ``|g| ~ |t - t0|^-k`` measured at distances 1e-3 and 1e-4."""
    def size(d):
        return abs(_safe_eval(g, t0 + d)) + abs(_safe_eval(g, t0 - d))

    with np.errstate(all="ignore"):
        near, far = size(1e-4), size(1e-3)
    if not (np.isfinite(near) and np.isfinite(far)) or far == 0.0:
        return math.inf
    return math.log10(near / far)


def _check_singularities(g: Callable, th: np.ndarray, mags: np.ndarray, big: float, poles: list[float]) -> None:
    """Reject singularities stronger than a simple pole (no principal value exists)."""
    candidates = list(poles)
    n = len(th) - 1
    for k in range(1, n):
        m = mags[k]
        if not np.isfinite(m):
            candidates.append(float(th[k]))
        elif m > big and m >= mags[k - 1] and m >= mags[k + 1]:
            res = minimize_scalar(
                lambda t: 1.0 / max(abs(_safe_eval(g, t)), 1e-300),
                bounds=(th[k - 1], th[k + 1]),
                method="bounded",
                options={"xatol": 1e-12},
            )
            candidates.append(float(res.x))
    for t0 in candidates:
        order = _singularity_order(g, t0)
        if order >= 1.5:
            raise ConvergenceError(
                f"singularity of order {order:.2f} near theta = {t0:.6g}; principal value needs simple poles"
            )


def _pv_rule(poles: Sequence[float], eps: float, width: float, nodes: int) -> tuple[np.ndarray, np.ndarray]:
    """Composite rule on the circle with ``(p - eps, p + eps)`` removed around each pole.

    Panels grow geometrically away from each excluded gap and are capped at ``width``.
    """
    ps = sorted(poles)
    all_x, all_w = [], []
    for i, p in enumerate(ps):
        q = ps[(i + 1) % len(ps)] + (_TWO_PI if i + 1 == len(ps) else 0.0)
        lo, hi = p + eps, q - eps
        if hi <= lo:
            raise DomainError("exclusion width exceeds the gap between poles")
        mid = 0.5 * (lo + hi)
        left = [lo]
        step = eps
        while left[-1] < mid:
            left.append(min(left[-1] + min(step, width), mid))
            step *= 2.0
        right = [hi]
        step = eps
        while right[-1] > mid:
            right.append(max(right[-1] - min(step, width), mid))
            step *= 2.0
        edges = np.array(left + right[::-1][1:])
        rule = composite_gauss_legendre(edges, nodes)
        all_x.append(np.asarray(rule.nodes))
        all_w.append(np.asarray(rule.weights))
    return np.concatenate(all_x), np.concatenate(all_w)


def fourier_coeffs_pv(
    g: Callable,
    m_max: int,
    pv_epsilon: float | None = None,
    poles: Sequence[float] | None = None,
    levels: int = 7,
    nodes: int = 20,
    tol: float = 1e-9,
) -> AngularFourierCoeffs:
    r"""Fourier coefficients of ``g`` on ``[0, 2*pi)``, as principal values if ``g`` has poles.

    For each exclusion half-width :math:`\epsilon_k = \epsilon_0 2^{-k}` the
    integral outside the gaps is computed with graded Gauss-Legendre panels.
    Around a simple pole the excluded-gap error is odd in :math:`\epsilon`,
    so the sequence is Richardson-extrapolated in powers
    :math:`\epsilon, \epsilon^3, \epsilon^5, \dots`.

    Parameters
    ----------
    g : callable
        Scalar function of ``theta``.
    m_max : int
        Highest harmonic.
    pv_epsilon : float, optional
        Starting half-width ``epsilon_0``; default
        ``min(0.5, 2/(m_max+1))`` limited by the pole spacing.
    poles : sequence of float, optional
        Pole locations; detected automatically when omitted.
    levels : int
        Number of halvings of ``epsilon``.
    tol : float
        Required agreement of the last two Richardson estimates.

    Raises
    ------
    ConvergenceError
        If the extrapolation does not settle (e.g. a double pole).
    """
    if m_max < 0:
        raise DomainError("m_max must be non-negative")
    if levels < 2:
        raise DomainError("need at least two extrapolation levels")
    ms = np.arange(-m_max, m_max + 1)
    width = min(0.5, _TWO_PI / (m_max + 1))
    if poles is None:
        poles = find_poles(g)
    poles = [float(np.mod(p, _TWO_PI)) for p in poles]

    def evaluate(x, w):
        vals = np.asarray([_safe_eval(g, t) for t in x])
        if not np.all(np.isfinite(vals)):
            raise DomainError("g is not finite at a quadrature node")
        return (np.exp(-1j * np.multiply.outer(ms, x)) * (w * vals)[None, :]).sum(axis=1) / _TWO_PI

    if not poles:
        edges = np.linspace(0.0, _TWO_PI, int(math.ceil(_TWO_PI / width)) + 1)
        rule = composite_gauss_legendre(edges, nodes)
        return AngularFourierCoeffs(evaluate(np.asarray(rule.nodes), np.asarray(rule.weights)))

    ps = sorted(poles)
    gaps = np.diff(ps + [ps[0] + _TWO_PI])
    eps0 = pv_epsilon if pv_epsilon is not None else min(0.5, 2.0 / (m_max + 1))
    eps0 = min(eps0, 0.25 * float(np.min(gaps)))
    table: list[list[np.ndarray]] = []
    for k in range(levels):
        eps = eps0 * 0.5**k
        x, w = _pv_rule(ps, eps, width, nodes)
        row = [evaluate(x, w)]
        for j in range(1, k + 1):
            factor = 2.0 ** (2 * j - 1)
            row.append(row[j - 1] + (row[j - 1] - table[k - 1][j - 1]) / (factor - 1.0))
        table.append(row)
    # error of each diagonal entry estimated against the previous column
    errs = [float(np.max(np.abs(row[-1] - row[-2]))) for row in table[1:]]
    k_best = int(np.argmin(errs)) + 1
    best, err = table[k_best][-1], errs[k_best - 1]
    if not err <= tol * max(1.0, float(np.max(np.abs(best)))):
        raise ConvergenceError(f"principal-value extrapolation did not settle (change {err:.2e})")
    return AngularFourierCoeffs(best)


def angle_fourier_coeffs(m_max: int) -> AngularFourierCoeffs:
    """Exact coefficients of ``g(theta) = theta`` on ``[0, 2*pi)``: ``c_0 = pi``, ``c_m = i/m``."""
    return AngularFourierCoeffs.from_function(m_max, lambda m: math.pi if m == 0 else 1j / m)


def cot_fourier_coeffs(m_max: int) -> AngularFourierCoeffs:
    """Exact principal-value coefficients of ``cot(theta)``: ``c_m = -i sign(m)`` for even ``m != 0``."""
    return AngularFourierCoeffs.from_function(
        m_max, lambda m: (-1j * np.sign(m)) if (m != 0 and m % 2 == 0) else 0.0
    )


# ---------------------------------------------------------------------------
# Closed-form builders
# ---------------------------------------------------------------------------


def build_angle_operator(order: int) -> FockOperator:
    r"""Quantized angle :math:`\theta \in [0, 2\pi)`.

    :math:`A = \pi I + i\sum_{n\ne n'} \frac{\Gamma(\frac{n+n'}2+1)}{\sqrt{n!n'!}\,(n'-n)}|n\rangle\langle n'|`.
    """
    _check_order(order)
    n = np.arange(order)
    diff = (n[None, :] - n[:, None]).astype(float)
    off = np.divide(1j, diff, out=np.zeros_like(diff, dtype=complex), where=diff != 0)
    mat = _angular_prefactor(order) * off + math.pi * np.eye(order)
    return FockOperator(mat, True, "angle")


def build_time_operator(order: int) -> FockOperator:
    r"""Time operator for the free particle.

    :math:`A_t = i\sum_{n\ge0,k\ge1}\frac{(n+k)!}{\sqrt{n!(n+2k)!}}
    \left(|n\rangle\langle n+2k| - |n+2k\rangle\langle n|\right)`.
    This equals ``-quantize_angular(cot)`` with the principal-value
    coefficients of :math:`\cot\theta`.
    """
    _check_order(order)
    lg = _sp.gammaln(np.arange(order) + 1.0)
    mat = np.zeros((order, order), dtype=complex)
    for k in range(1, (order - 1) // 2 + 1):
        n = np.arange(order - 2 * k)
        val = np.exp(lg[n + k] - 0.5 * (lg[n] + lg[n + 2 * k]))
        mat[n, n + 2 * k] = 1j * val
        mat[n + 2 * k, n] = -1j * val
    return FockOperator(mat, True, "time")


def build_free_hamiltonian(order: int, include_vacuum_term: bool = False) -> FockOperator:
    r"""Free-particle Hamiltonian :math:`p^2/2 = (\mathrm{Im}\,z)^2`.

    The default is the normal-ordered form with diagonal ``n/2`` and
    ``(n, n+2)`` entries :math:`-\sqrt{(n+1)(n+2)}/4`; its lower symbol
    is exactly :math:`r^2\sin^2\theta`.  With ``include_vacuum_term`` the
    diagonal is ``(n+1)/2``, the quadrature value of :math:`A_{(\mathrm{Im}\,z)^2}`,
    whose lower symbol is :math:`r^2\sin^2\theta + 1/2`.  Commutators do not
    depend on the choice.
    """
    _check_order(order)
    n = np.arange(order, dtype=float)
    shift = 1.0 if include_vacuum_term else 0.0
    mat = np.diag((n + shift) / 2.0).astype(complex)
    off = -np.sqrt((n[:-2] + 1.0) * (n[:-2] + 2.0)) / 4.0
    idx = np.arange(order - 2)
    mat[idx, idx + 2] = off
    mat[idx + 2, idx] = off
    label = "free_hamiltonian" + ("+vacuum" if include_vacuum_term else "")
    return FockOperator(mat, True, label)


def build_harmonic_hamiltonian(order: int, hbar: float = 1.0) -> FockOperator:
    """``hbar * (N + I)``, the quantization of ``hbar |z|^2``."""
    _check_order(order)
    if not hbar > 0:
        raise DomainError("hbar must be positive")
    return FockOperator(np.diag(hbar * (np.arange(order) + 1.0)), True, f"harmonic_hamiltonian(hbar={hbar:g})")


# ---------------------------------------------------------------------------
# Dispatcher
# ---------------------------------------------------------------------------


def _builtin(obs: Builtin, order: int) -> FockOperator:
    name = obs.name
    if name == "angle":
        return build_angle_operator(order)
    if name == "time":
        return build_time_operator(order)
    if name == "free_hamiltonian":
        return build_free_hamiltonian(order)
    if name == "harmonic_hamiltonian":
        return build_harmonic_hamiltonian(order, obs.hbar)
    if name == "modulus_squared":
        return quantize_isotropic(Polynomial([0.0, 1.0]), order, name="|z|^2")
    if order < 2:
        raise DomainError("position/momentum need order >= 2")
    q, p = position_momentum(order)
    return q if name == "q" else p


def quantize(obs: Observable, order: int, quad: QuadratureSpec | None = None) -> FockOperator:
    """Quantize any :data:`Observable` variant through its natural path."""
    if isinstance(obs, General):
        return quantize_general(obs.f, order, quad, obs.name)
    if isinstance(obs, Isotropic):
        n_r = quad.radial if quad is not None else None
        return quantize_isotropic(obs.h, order, n_r, obs.name)
    if isinstance(obs, Angular):
        return quantize_angular(obs.coeffs, order, obs.name)
    if isinstance(obs, Monomial):
        return monomial(obs.a, obs.b, order)
    if isinstance(obs, Builtin):
        return _builtin(obs, order)
    raise TypeError(f"not an observable: {obs!r}")

