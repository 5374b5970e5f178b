r"""Lower symbols :math:`\langle z|A|z\rangle` and their closed-form series.

Matrix route
    :func:`lower_symbol` contracts a truncated operator with a truncated
    coherent vector at :math:`z/\sqrt\hbar`.

Series route
    The angle, time and commutator symbols are Fourier series in
    :math:`\theta` whose coefficients are exponentially scaled Bessel or
    Kummer functions of :math:`r^2`; see :func:`angle_symbol_series`,
    :func:`time_symbol_series` and :func:`commutator_symbol_series`.

Oracle route
    :func:`gaussian_convolution_oracle` integrates the classical function
    against the Gaussian kernel
    :math:`\frac1\pi e^{-|z-z'|^2}` without ever forming a matrix.
"""

from __future__ import annotations

import csv
import io
import math
import warnings
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy import special as _sp

from . import specfun
from .errors import DomainError, TruncationError
from .fock import COHERENT_LOSS_WARN, FockOperator, TruncationWarning, coherent_vector
from .quadrature import composite_gauss_legendre, gauss_hermite

__all__ = [
    "SymbolGrid",
    "TRUNCATION_LOSS_MAX",
    "lower_symbol",
    "lower_symbol_grid",
    "angle_coefficients",
    "angle_coefficients_hypergeometric",
    "time_coefficients",
    "time_coefficients_hypergeometric",
    "time_hamiltonian_coefficients",
    "angle_symbol_series",
    "time_symbol_series",
    "commutator_symbol_series",
    "cesaro_commutator_symbol",
    "series_theta_derivative",
    "angle_symbol_integral",
    "gaussian_convolution_oracle",
    "smoothness_probe",
    "lower_symbol_derivative",
]

TRUNCATION_LOSS_MAX = 1e-6
SERIES_TOL = 1e-8
_Q_START = 32
_Q_LIMIT = 1 << 16


# ---------------------------------------------------------------------------
# Matrix route
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SymbolGrid:
    """Symbol values on a tensor grid ``values[i, j] = s(r_i, theta_j)``."""

    r_values: np.ndarray
    theta_values: np.ndarray
    values: np.ndarray
    hbar: float = 1.0
    source: str = ""
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        r = np.asarray(self.r_values, dtype=float)
        t = np.asarray(self.theta_values, dtype=float)
        v = np.asarray(self.values)
        if v.shape != (len(r), len(t)):
            raise DomainError(f"values shape {v.shape} does not match grid {(len(r), len(t))}")
        object.__setattr__(self, "r_values", r)
        object.__setattr__(self, "theta_values", t)
        object.__setattr__(self, "values", v)

    def is_real(self, tol: float = 1e-10) -> bool:
        return bool(np.max(np.abs(np.imag(self.values)), initial=0.0) <= tol)

    def to_csv(self, header_comment: str | None = None) -> str:
        """CSV with columns ``r, theta, value`` (plus ``imag`` for complex data)."""
        buf = io.StringIO()
        if header_comment:
            for line in header_comment.splitlines():
                buf.write(f"# {line}\n")
        real = self.is_real()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["r", "theta", "value"] if real else ["r", "theta", "value", "imag"])
        for i, r in enumerate(self.r_values):
            for j, t in enumerate(self.theta_values):
                v = complex(self.values[i, j])
                row = [f"{r:.17g}", f"{t:.17g}", f"{v.real:.17g}"]
                if not real:
                    row.append(f"{v.imag:.17g}")
                w.writerow(row)
        return buf.getvalue()


def lower_symbol(op: FockOperator, z: complex, hbar: float = 1.0, force: bool = False) -> complex:
    r"""``<w|A|w>`` with :math:`w = z/\sqrt\hbar`.

    Raises
    ------
    TruncationError
        If the coherent vector loses more than :data:`TRUNCATION_LOSS_MAX`
        of its norm at the operator's order (unless ``force``).
    """
    if not hbar > 0:
        raise DomainError("hbar must be positive")
    w = complex(z) / math.sqrt(hbar)
    cv = coherent_vector(w, op.order, warn=False)
    if cv.loss > TRUNCATION_LOSS_MAX and not force:
        raise TruncationError(
            f"order {op.order} too small for |z|^2/hbar = {abs(w) ** 2:.3g} (norm loss {cv.loss:.2e})"
        )
    if cv.loss > COHERENT_LOSS_WARN:
        warnings.warn(f"coherent vector norm loss {cv.loss:.2e}", TruncationWarning, stacklevel=2)
    v = cv.amplitudes
    return complex(np.vdot(v, op.matrix @ v))


def lower_symbol_grid(op: FockOperator, r_values, theta_values, hbar: float = 1.0, force: bool = False) -> SymbolGrid:
    r = np.asarray(r_values, dtype=float)
    t = np.asarray(theta_values, dtype=float)
    vals = np.empty((len(r), len(t)), dtype=complex)
    for i, ri in enumerate(r):
        for j, tj in enumerate(t):
            vals[i, j] = lower_symbol(op, ri * np.exp(1j * tj), hbar, force)
    if op.hermitian:
        vals = vals.real
    return SymbolGrid(r, t, vals, hbar, op.provenance)


# ---------------------------------------------------------------------------
# Series coefficients
# ---------------------------------------------------------------------------


def _check_r(r: float) -> float:
    r = float(r)
    if not r >= 0.0:
        raise DomainError(f"r must be non-negative, got {r}")
    return r


def angle_coefficients(r: float, q_max: int) -> np.ndarray:
    r"""``c_q(r)`` for ``q = 1..q_max`` of the angle symbol.

    :math:`c_q = \frac{\sqrt\pi r}{q}\left(\tilde I_{(q-1)/2} + \tilde I_{(q+1)/2}\right)(r^2/2)`,
    with :math:`\tilde I_\nu(x) = e^{-x}I_\nu(x)`.
    """
    r = _check_r(r)
    if r == 0.0:
        return np.zeros(q_max)
    i_half = specfun.bessel_i_scaled_half_orders(q_max + 1, 0.5 * r * r)
    q = np.arange(1, q_max + 1)
    return math.sqrt(math.pi) * r / q * (i_half[q - 1] + i_half[q + 1])


def angle_coefficients_hypergeometric(r: float, q_max: int) -> np.ndarray:
    r""":math:`c_q = \frac{2r^q}{q}\frac{\Gamma(q/2+1)}{\Gamma(q+1)}\,e^{-r^2}{}_1F_1(q/2+1; q+1; r^2)`."""
    r = _check_r(r)
    if r == 0.0:
        return np.zeros(q_max)
    out = np.empty(q_max)
    for q in range(1, q_max + 1):
        pref = math.exp(q * math.log(r) + math.lgamma(q / 2 + 1) - math.lgamma(q + 1))
        out[q - 1] = 2.0 / q * pref * specfun.kummer_1f1_scaled(q / 2 + 1, q + 1, r * r)
    return out


def time_coefficients(r: float, q_max: int) -> np.ndarray:
    r"""``c_q(r)`` of the time symbol :math:`\sum c_q \sin 2q\theta`.

    :math:`c_q = \sqrt\pi\,r\left(\tilde I_{q-1/2} + \tilde I_{q+1/2}\right)(r^2/2)`;
    ``c_q -> 2`` as ``r -> infinity``.
    """
    r = _check_r(r)
    if r == 0.0:
        return np.zeros(q_max)
    i_half = specfun.bessel_i_scaled_half_orders(2 * q_max + 1, 0.5 * r * r)
    q = np.arange(1, q_max + 1)
    return math.sqrt(math.pi) * r * (i_half[2 * q - 1] + i_half[2 * q + 1])


def time_coefficients_hypergeometric(r: float, q_max: int) -> np.ndarray:
    r""":math:`c_q = 2\sqrt\pi\,(r/2)^{2q} e^{-r^2}{}_1F_1(q+1; 2q+1; r^2)/\Gamma(q+1/2)`."""
    r = _check_r(r)
    if r == 0.0:
        return np.zeros(q_max)
    out = np.empty(q_max)
    for q in range(1, q_max + 1):
        pref = math.exp(2 * q * math.log(r / 2) - math.lgamma(q + 0.5))
        out[q - 1] = 2.0 * math.sqrt(math.pi) * pref * specfun.kummer_1f1_scaled(q + 1, 2 * q + 1, r * r)
    return out


def time_hamiltonian_coefficients(r: float, q_max: int) -> np.ndarray:
    r""":math:`c_q = e^{-r^2} r^{2q}\frac{q!}{(2q)!}{}_1F_1(q; 2q+1; r^2)`, ``q = 1..q_max``."""
    r = _check_r(r)
    if r == 0.0:
        return np.zeros(q_max)
    out = np.empty(q_max)
    for q in range(1, q_max + 1):
        pref = math.exp(2 * q * math.log(r) + math.lgamma(q + 1) - math.lgamma(2 * q + 1))
        out[q - 1] = pref * specfun.kummer_1f1_scaled(q, 2 * q + 1, r * r)
    return out


def _auto_coefficients(coeff_fn: Callable[[float, int], np.ndarray], r: float, q_max: int | None, weight=None):
    """Coefficients up to ``q_max``; when omitted, double until the tail is below :data:`SERIES_TOL`.

    ``weight(q)`` multiplies the coefficients before the tail test (e.g. ``q``
    for the differentiated series).
    """
    if q_max is not None:
        if q_max < 1:
            raise DomainError("q_max must be positive")
        return coeff_fn(r, q_max)
    q = _Q_START
    while True:
        c = coeff_fn(r, q)
        a = np.abs(c * (weight(np.arange(1, q + 1)) if weight else 1.0))
        last, prev = a[-1], a[-2]
        if last == 0.0:
            return c
        rho = last / prev if prev > 0 else 1.0
        if rho < 1.0:
            tail = last * rho / (1.0 - rho)
            # only trust the geometric bound once terms are clearly decaying
            if tail < SERIES_TOL and rho < 0.9:
                return c
        q *= 2
        if q > _Q_LIMIT:
            raise DomainError(f"series coefficients at r={r} do not decay; pass q_max explicitly")


# ---------------------------------------------------------------------------
# Series symbols
# ---------------------------------------------------------------------------


def angle_symbol_series(r: float, theta, q_max: int | None = None):
    r""":math:`\langle z|A_{\arg}|z\rangle = \pi - \sum_q c_q(r)\sin q\theta`."""
    c = _auto_coefficients(angle_coefficients, r, q_max)
    q = np.arange(1, len(c) + 1)
    th = np.asarray(theta, dtype=float)
    return math.pi - np.sin(np.multiply.outer(th, q)) @ c


def time_symbol_series(r: float, theta, q_max: int | None = None):
    r""":math:`\sum_q c_q(r)\sin 2q\theta`, the lower symbol of the quantized :math:`\cot\theta`.

    It tends to :math:`\cot\theta` for large ``r``.  The operator returned by
    :func:`~csquant.quantize.build_time_operator` is the negative of the
    quantized :math:`\cot\theta`, so its lower symbol is minus this series.
    """
    c = _auto_coefficients(time_coefficients, r, q_max)
    q = np.arange(1, len(c) + 1)
    th = np.asarray(theta, dtype=float)
    return np.sin(2.0 * np.multiply.outer(th, q)) @ c


def commutator_symbol_series(which: str, r: float, theta, q_max: int | None = None):
    r"""Lower symbols of the angle-number and time-Hamiltonian commutators.

    ``"angle_number"``
        :math:`\langle z|[A_{\arg}, N]|z\rangle = i\sum_q q\,c_q(r)\cos q\theta`.
    ``"time_hamiltonian"``
        :math:`\langle z|[A_t, A_H]|z\rangle = -i + \tfrac{i}{2}e^{-r^2} + i\sum_q c_q(r)\cos 2q\theta`
        with :func:`time_hamiltonian_coefficients`.  The vacuum term
        comes from ``C_00 = -i/2``.
    """
    th = np.asarray(theta, dtype=float)
    if which == "angle_number":
        c = _auto_coefficients(angle_coefficients, r, q_max, weight=lambda q: q)
        q = np.arange(1, len(c) + 1)
        return 1j * (np.cos(np.multiply.outer(th, q)) @ (q * c))
    if which == "time_hamiltonian":
        c = _auto_coefficients(time_hamiltonian_coefficients, r, q_max)
        q = np.arange(1, len(c) + 1)
        r = float(r)
        return -1j + 0.5j * math.exp(-r * r) + 1j * (np.cos(2.0 * np.multiply.outer(th, q)) @ c)
    raise DomainError(f"unknown commutator {which!r}; use 'angle_number' or 'time_hamiltonian'")


def cesaro_commutator_symbol(r: float, theta: float, q_max: int | None = None) -> complex:
    r"""Fejer-smoothed :math:`i\sum_q (1 - q/(Q+1))\,q c_q(r)\cos q\theta` for the angle-number symbol.

    At large ``r`` the plain series tends to a delta comb; the smoothed
    sums converge pointwise away from ``theta = 2 pi n``.
    """
    c = _auto_coefficients(angle_coefficients, r, q_max, weight=lambda q: q)
    q = np.arange(1, len(c) + 1)
    fejer = 1.0 - q / (len(c) + 1.0)
    return 1j * complex(np.cos(q * float(theta)) @ (fejer * q * c))


def series_theta_derivative(which: str, r: float, theta: float, k: int, q_max: int | None = None) -> float:
    r"""``d^k/dtheta^k`` of the angle or time symbol, differentiated term by term."""
    if which == "angle":
        c = -_auto_coefficients(angle_coefficients, r, q_max, weight=lambda q: q**k)
        freq = np.arange(1, len(c) + 1, dtype=float)
        base = 0.0 if k else math.pi
    elif which == "time":
        c = _auto_coefficients(time_coefficients, r, q_max, weight=lambda q: (2 * q) ** k)
        freq = 2.0 * np.arange(1, len(c) + 1)
        base = 0.0
    else:
        raise DomainError(f"unknown symbol {which!r}")
    return base + float(np.sin(freq * theta + k * math.pi / 2) @ (c * freq**k))


def angle_symbol_integral(r: float, theta: float, panels: int = 64, nodes: int = 20) -> float:
    r"""Angle lower symbol from its one-dimensional integral representation.

    .. math::
        \frac{e^{-r^2}}{2\pi}\int_0^{2\pi}\phi\left[1+\sqrt\pi\,a\,e^{a^2}(1+\operatorname{erf}a)\right]d\phi,
        \qquad a = r\cos(\theta-\phi),

    obtained by doing the radial Gaussian integral in closed form.  The
    product :math:`e^{-r^2}e^{a^2}` is folded into :math:`e^{-r^2\sin^2(\theta-\phi)}`.
    Intended for small ``r``.
    """
    r = _check_r(r)
    rule = composite_gauss_legendre(np.linspace(0.0, 2.0 * math.pi, panels + 1), nodes)
    phi = np.asarray(rule.nodes)
    psi = theta - phi
    a = r * np.cos(psi)
    bracket = math.exp(-r * r) + math.sqrt(math.pi) * a * np.exp(-(r * np.sin(psi)) ** 2) * (1.0 + specfun.erf(a))
    return float(np.sum(np.asarray(rule.weights) * phi * bracket) / (2.0 * math.pi))


# ---------------------------------------------------------------------------
# Oracle route
# ---------------------------------------------------------------------------


def gaussian_convolution_oracle(
    f: Callable,
    z: complex,
    hbar: float = 1.0,
    quad: str = "hermite",
    n: int = 60,
) -> complex:
    r""":math:`\frac1{\pi\hbar}\int e^{-|z-z'|^2/\hbar} f(z'/\sqrt\hbar)\,d^2z'`.

    Parameters
    ----------
    quad : {"hermite", "polar"}
        ``"hermite"`` is an ``n x n`` Gauss-Hermite product rule centred at
        ``z``.  ``"polar"`` integrates in polar coordinates about the
        origin (Gauss-Legendre in both radius and angle), which handles
        observables with a branch cut along the positive real axis, such as
        the angle.
    """
    if not hbar > 0:
        raise DomainError("hbar must be positive")
    w = complex(z) / math.sqrt(hbar)
    if quad == "hermite":
        rule = gauss_hermite(n)
        x = np.asarray(rule.nodes)
        wt = np.asarray(rule.weights)
        pts = w + x[:, None] + 1j * x[None, :]
        with np.errstate(all="ignore"):
            vals = np.broadcast_to(np.asarray(f(pts), dtype=complex), pts.shape)
        return complex(np.sum(wt[:, None] * wt[None, :] * vals) / math.pi)
    if quad == "polar":
        rmax = abs(w) + 9.0
        rad = composite_gauss_legendre(np.linspace(0.0, rmax, int(math.ceil(rmax / 0.5)) + 1), 20)
        ang = composite_gauss_legendre(np.linspace(0.0, 2.0 * math.pi, 129), 20)
        rho = np.asarray(rad.nodes)[:, None]
        phi = np.asarray(ang.nodes)[None, :]
        pts = rho * np.exp(1j * phi)
        kern = np.exp(-np.abs(pts - w) ** 2) * rho
        with np.errstate(all="ignore"):
            vals = np.broadcast_to(np.asarray(f(pts), dtype=complex), pts.shape)
        wts = np.asarray(rad.weights)[:, None] * np.asarray(ang.weights)[None, :]
        return complex(np.sum(wts * kern * vals) / math.pi)
    raise DomainError(f"unknown quadrature {quad!r}")


# ---------------------------------------------------------------------------
# Smoothness
# ---------------------------------------------------------------------------


def _fd_weights(k: int, half_width: int) -> tuple[np.ndarray, np.ndarray]:
    """Central finite-difference weights for the ``k``-th derivative on offsets ``-m..m``."""
    offs = np.arange(-half_width, half_width + 1, dtype=float)
    vander = np.vander(offs, increasing=True).T
    rhs = np.zeros(len(offs))
    rhs[k] = math.factorial(k)
    return offs, np.linalg.solve(vander, rhs)


def smoothness_probe(symbol: Callable[[float, float], float], r: float, theta: float, k: int,
                     variable: str = "theta", step: float | None = None) -> float:
    """``k``-th derivative of ``symbol(r, theta)`` by a 9-point (or wider) central difference.

    ``k = 0`` returns the symbol itself.  Evaluating at a few steps and
    checking agreement is the intended smoothness witness.
    """
    if not 0 <= k <= 4:
        raise DomainError("derivative order must be between 0 and 4")
    if k == 0:
        return float(np.real(symbol(r, theta)))
    h = step if step is not None else 0.02 * (1 + k)
    offs, wts = _fd_weights(k, 4)
    if variable == "theta":
        vals = [np.real(symbol(r, theta + o * h)) for o in offs]
    elif variable == "r":
        if r - 4 * h <= 0:
            raise DomainError("r too small for the finite-difference stencil")
        vals = [np.real(symbol(r + o * h, theta)) for o in offs]
    else:
        raise DomainError("variable must be 'r' or 'theta'")
    return float(np.dot(wts, vals) / h**k)


def lower_symbol_derivative(op: FockOperator, r: float, theta: float, k_r: int = 0, k_theta: int = 0) -> complex:
    r"""Mixed derivative of ``<z|A|z>`` from the Fock expansion, term by term.

    :math:`\langle z|A|z\rangle = \sum_{nn'} A_{nn'}\frac{e^{-r^2}r^{n+n'}e^{i(n'-n)\theta}}{\sqrt{n!n'!}}`;
    each :math:`\partial_\theta` brings down :math:`i(n'-n)` and
    :math:`\partial_r` acts on :math:`h_p = e^{-r^2}r^p` through
    :math:`h_p' = p\,h_{p-1} - 2h_{p+1}`.
    """
    r = float(r)
    if not r > 0:
        raise DomainError("r must be positive")
    n = np.arange(op.order)
    p = n[:, None] + n[None, :]
    # coefficients of h_{p+j}, j = -k_r..k_r, as polynomials in p (evaluated per entry)
    coef = {0: np.ones_like(p, dtype=float)}
    for _ in range(k_r):
        new: dict[int, np.ndarray] = {}
        for j, c in coef.items():
            new[j - 1] = new.get(j - 1, 0.0) + c * (p + j)
            new[j + 1] = new.get(j + 1, 0.0) - 2.0 * c
        coef = new
    half = 0.5 * _sp.gammaln(n + 1.0)
    norm = half[:, None] + half[None, :]
    radial = np.zeros(p.shape)
    for j, c in coef.items():
        power = p + j
        valid = power >= 0
        term = np.zeros(p.shape)
        term[valid] = np.exp(-r * r + power[valid] * math.log(r) - norm[valid])
        radial += c * term
    diff = (n[None, :] - n[:, None]).astype(float)
    phase = np.exp(1j * diff * theta) * (1j * diff) ** k_theta
    return complex(np.sum(op.matrix * phase * radial))
