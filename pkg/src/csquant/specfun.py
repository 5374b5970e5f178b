r"""Special functions in exponentially scaled, overflow-safe form.

The lower symbols of the angle and time operators pair growing functions
(modified Bessel :math:`I_\nu`, Kummer :math:`{}_1F_1`) with decaying
Gaussian factors.  Everything here returns the *scaled* quantity

.. math::
    \tilde I_\nu(x) = e^{-x} I_\nu(x), \qquad
    \tilde M(a, b, x) = e^{-x}\,{}_1F_1(a; b; x)

so that arguments up to :math:`10^4` never overflow.

Bessel sequences are computed by downward recurrence started from the
continued fraction for :math:`I_{\nu+1}/I_\nu` and normalised at the lowest
order :math:`\mu \in [-1/2, 1/2)`; the base value comes from a closed form
(:math:`\mu = -1/2`), the power series (small ``x``) or the Hankel
expansion (large ``x``).
"""

from __future__ import annotations

import math

import numpy as np
from scipy import special as _sp

from .errors import ConvergenceError, DomainError

__all__ = [
    "ln_gamma",
    "erf",
    "bessel_i_scaled",
    "bessel_i_scaled_sequence",
    "bessel_i_scaled_half_orders",
    "log_bessel_i",
    "log_bessel_i_large_order",
    "kummer_1f1_scaled",
    "kummer_1f1",
]

#: below this argument every order is summed from its power series
SERIES_MAX_X = 2.0
#: switchover between power series and Hankel expansion for the base order
BASE_HANKEL_MIN_X = 35.0
#: the Kummer asymptotic expansion is only attempted above this argument
KUMMER_ASYMPTOTIC_MIN_X = 30.0

_EPS = np.finfo(float).eps
_RESCALE = 1e250
_LN10 = math.log(10.0)


def ln_gamma(x):
    """Natural log of the gamma function for positive arguments.

    Scalars go through :func:`math.lgamma`, arrays through
    :func:`scipy.special.gammaln`.
    """
    if np.ndim(x) == 0:
        xf = float(x)
        if not xf > 0.0:
            raise DomainError(f"ln_gamma requires x > 0, got {x!r}")
        return math.lgamma(xf)
    arr = np.asarray(x, dtype=float)
    if not np.all(arr > 0.0):
        raise DomainError("ln_gamma requires x > 0 everywhere")
    return _sp.gammaln(arr)


def erf(x):
    """Error function (scalar or array)."""
    if np.ndim(x) == 0:
        return math.erf(float(x))
    return _sp.erf(np.asarray(x, dtype=float))


# ---------------------------------------------------------------------------
# Modified Bessel functions of the first kind
# ---------------------------------------------------------------------------


def _bessel_series_scaled(nus: np.ndarray, x: float) -> np.ndarray:
    """Power series of e^{-x} I_nu(x) summed in log space (all terms > 0)."""
    nterms = int(40 + 3.0 * x)
    k = np.arange(nterms, dtype=float)[:, None]
    nu = np.asarray(nus, dtype=float)[None, :]
    logt = (2.0 * k + nu) * math.log(x / 2.0) - _sp.gammaln(k + 1.0) - _sp.gammaln(k + nu + 1.0) - x
    return np.exp(_sp.logsumexp(logt, axis=0))


def _bessel_hankel_scaled(mu: float, x: float) -> float:
    """Large-argument Hankel expansion of e^{-x} I_mu(x) for |mu| <= 1/2."""
    mu2 = 4.0 * mu * mu
    term = 1.0
    total = 1.0
    for k in range(1, 400):
        new = -term * (mu2 - (2 * k - 1) ** 2) / (k * 8.0 * x)
        if abs(new) > abs(term):
            break
        term = new
        total += term
        if abs(term) <= 1e-17 * abs(total):
            break
    return total / math.sqrt(2.0 * math.pi * x)


def _bessel_base_scaled(mu: float, x: float) -> float:
    if mu == -0.5:
        return math.sqrt(2.0 / (math.pi * x)) * 0.5 * (1.0 + math.exp(-2.0 * x))
    if x <= BASE_HANKEL_MIN_X:
        return float(_bessel_series_scaled(np.array([mu]), x)[0])
    return _bessel_hankel_scaled(mu, x)


def _bessel_ratio_cf(nu: float, x: float) -> float:
    """I_{nu+1}(x) / I_nu(x) by the modified Lentz method."""
    tiny = 1e-300
    f = tiny
    c = f
    d = 0.0
    for j in range(1, 10_000_000):
        b = 2.0 * (nu + j) / x
        d = b + d
        if d == 0.0:
            d = tiny
        c = b + 1.0 / c
        if c == 0.0:
            c = tiny
        d = 1.0 / d
        delta = c * d
        f *= delta
        if abs(delta - 1.0) < 4.0 * _EPS:
            return f
    raise ConvergenceError(f"continued fraction for I_{nu+1}/I_{nu} at x={x} did not converge")


def bessel_i_scaled_sequence(nu0: float, count: int, x: float) -> np.ndarray:
    r"""Return :math:`e^{-x} I_{\nu_0 + k}(x)` for ``k = 0 .. count-1``.

    Parameters
    ----------
    nu0 : float
        Lowest order, ``nu0 >= -0.5``.
    count : int
        Number of consecutive orders.
    x : float
        Non-negative argument.
    """
    if nu0 < -0.5:
        raise DomainError(f"order must be >= -0.5, got {nu0}")
    if not x >= 0.0:
        raise DomainError(f"bessel_i_scaled requires x >= 0, got {x}")
    if count < 1:
        raise DomainError("count must be positive")
    nus = nu0 + np.arange(count, dtype=float)
    if x == 0.0:
        out = np.zeros(count)
        out[nus == 0.0] = 1.0
        out[nus < 0.0] = np.inf
        return out
    if x < SERIES_MAX_X:
        return _bessel_series_scaled(nus, x)

    mu = nu0 - math.floor(nu0 + 0.5)
    offset = int(round(nu0 - mu))
    top = offset + count - 1
    f = np.empty(top + 2)
    f[top] = 1.0
    f[top + 1] = _bessel_ratio_cf(mu + top, x)
    for k in range(top, 0, -1):
        f[k - 1] = f[k + 1] + (2.0 * (mu + k) / x) * f[k]
        if f[k - 1] > _RESCALE:
            f[k - 1 :] /= _RESCALE
    base = _bessel_base_scaled(mu, x)
    return f[offset : offset + count] * (base / f[0])


def bessel_i_scaled(nu: float, x: float) -> float:
    """Exponentially scaled modified Bessel function ``exp(-x) * I_nu(x)``."""
    return float(bessel_i_scaled_sequence(nu, 1, x)[0])


def bessel_i_scaled_half_orders(kmax: int, x: float) -> np.ndarray:
    """Scaled ``I_{k/2}(x)`` for ``k = 0 .. kmax`` (integer and half-integer orders)."""
    out = np.empty(kmax + 1)
    n_int = kmax // 2 + 1
    out[0::2] = bessel_i_scaled_sequence(0.0, n_int, x)
    n_half = (kmax + 1) // 2
    if n_half:
        out[1::2] = bessel_i_scaled_sequence(0.5, n_half, x)
    return out


def log_bessel_i(nu: float, x: float) -> float:
    """``log I_nu(x)`` for ``x > 0``, finite even where ``I_nu`` underflows."""
    if not x > 0.0:
        raise DomainError(f"log_bessel_i requires x > 0, got {x}")
    if x < SERIES_MAX_X:
        nterms = int(40 + 3.0 * x)
        k = np.arange(nterms, dtype=float)
        logt = (2.0 * k + nu) * math.log(x / 2.0) - _sp.gammaln(k + 1.0) - _sp.gammaln(k + nu + 1.0)
        return float(_sp.logsumexp(logt))
    return math.log(bessel_i_scaled(nu, x)) + x


def log_bessel_i_large_order(nu: float, x: float) -> float:
    """Leading large-order estimate ``log I_nu(x) ~ nu*log(x e / 2 nu) - log(2 pi nu)/2``."""
    if nu <= 0:
        raise DomainError("large-order estimate needs nu > 0")
    return nu * math.log(x * math.e / (2.0 * nu)) - 0.5 * math.log(2.0 * math.pi * nu)


# ---------------------------------------------------------------------------
# Confluent hypergeometric function 1F1
# ---------------------------------------------------------------------------


def _is_nonpositive_integer(v: float) -> bool:
    return v <= 0.0 and float(v).is_integer()


def _kummer_series_scaled(a: float, b: float, x: float) -> float:
    term = 1.0
    total = 1.0
    log_scale = 0.0
    k = 0
    while True:
        term *= (a + k) / (b + k) * x / (k + 1)
        k += 1
        total += term
        if abs(total) > 1e280:
            total *= 1e-280
            term *= 1e-280
            log_scale += 280.0 * _LN10
        if term == 0.0:
            break
        if k > x and abs(term) <= 1e-17 * abs(total):
            break
        if k > 2_000_000:
            raise ConvergenceError(f"1F1({a};{b};{x}) series did not converge")
    if total <= 0.0:
        return total * math.exp(log_scale - x)
    return math.exp(math.log(total) + log_scale - x)


def _kummer_asymptotic_scaled(a: float, b: float, x: float) -> float | None:
    """Large-x expansion of e^{-x} 1F1(a;b;x), or None if it is not accurate."""
    if a <= 0.0:
        return None
    if not _is_nonpositive_integer(b - a):
        log_other = float(_sp.gammaln(a) - _sp.gammaln(b - a)) + (b - 2.0 * a) * math.log(x) - x
        if log_other > math.log(1e-17):
            return None
    term = 1.0
    total = 1.0
    biggest = 1.0
    for k in range(0, 2000):
        new = term * (b - a + k) * (1.0 - a + k) / ((k + 1) * x)
        if new == 0.0:
            break
        if abs(new) > abs(term) and k > b - a + abs(1.0 - a):
            return None
        term = new
        biggest = max(biggest, abs(term))
        if biggest > 10.0:
            # cancellation would eat the precision
            return None
        total += term
        if abs(term) <= 1e-17 * abs(total):
            break
    else:
        return None
    if total <= 0.0:
        return None
    return math.exp(math.log(total) + math.lgamma(b) - math.lgamma(a) + (a - b) * math.log(x))


def kummer_1f1_scaled(a: float, b: float, x: float) -> float:
    r"""Scaled confluent hypergeometric function :math:`e^{-x}{}_1F_1(a;b;x)`, ``x >= 0``.

    Uses the Kummer-transformed large-argument expansion when it converges
    to full precision (``x`` above :data:`KUMMER_ASYMPTOTIC_MIN_X`), the
    direct series otherwise.
    """
    if _is_nonpositive_integer(b):
        raise DomainError(f"1F1 undefined for b={b}")
    if not x >= 0.0:
        raise DomainError(f"kummer_1f1_scaled requires x >= 0, got {x}")
    if x == 0.0 or a == b:
        return 1.0
    if x > KUMMER_ASYMPTOTIC_MIN_X:
        value = _kummer_asymptotic_scaled(a, b, x)
        if value is not None:
            return value
    return _kummer_series_scaled(a, b, x)


def kummer_1f1(a: float, b: float, x: float) -> float:
    """Unscaled 1F1(a;b;x) for any real ``x``; negative arguments use the Kummer transformation."""
    if x >= 0.0:
        return math.exp(x) * kummer_1f1_scaled(a, b, x)
    return kummer_1f1_scaled(b - a, b, -x)
