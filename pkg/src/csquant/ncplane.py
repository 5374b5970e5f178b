r"""Noncommutative-plane checks built on Gaussian exponential symbols.

Symbols of the form :math:`c\,e^{\alpha z + \beta\bar z + \gamma z\bar z}`
are closed under the Voros product
:math:`f\star g = f\,e^{\overleftarrow{\partial_z}\overrightarrow{\partial_{\bar z}}}\,g`:
since :math:`\partial_z^k f = (\alpha_1+\gamma_1\bar z)^k f` and
:math:`\partial_{\bar z}^k g = (\beta_2+\gamma_2 z)^k g`,

.. math::
    f\star g = f g \exp\big[(\alpha_1+\gamma_1\bar z)(\beta_2+\gamma_2 z)\big].

Momentum states of the plane are such symbols with :math:`\gamma = 0`.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .fock import FockOperator, coherent_vector
from .quadrature import gauss_hermite
from .symbols import lower_symbol

__all__ = [
    "ExpSymbol",
    "voros_star",
    "momentum_symbol",
    "overlap",
    "coherent_overlap",
    "momentum_resolution",
    "star_delta_check",
    "gaussian_test_function",
    "exp_symbol_operator",
    "noncommutativity_witness",
]


@dataclass(frozen=True)
class ExpSymbol:
    r""":math:`c\exp(\alpha z + \beta\bar z + \gamma z\bar z)` with real :math:`\gamma \le 0`."""

    c: complex = 1.0
    alpha: complex = 0.0
    beta: complex = 0.0
    gamma: float = 0.0

    def __post_init__(self):
        g = complex(self.gamma)
        if abs(g.imag) > 1e-14 or g.real > 0.0:
            raise DomainError(f"gamma must be real and <= 0, got {self.gamma}")
        object.__setattr__(self, "gamma", float(g.real))
        for name in ("c", "alpha", "beta"):
            object.__setattr__(self, name, complex(getattr(self, name)))

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        return self.c * np.exp(self.alpha * z + self.beta * np.conj(z) + self.gamma * np.abs(z) ** 2)

    def conj(self) -> ExpSymbol:
        """Complex conjugate function."""
        return ExpSymbol(self.c.conjugate(), self.beta.conjugate(), self.alpha.conjugate(), self.gamma)

    def as_tuple(self) -> tuple[complex, complex, complex, float]:
        return (self.c, self.alpha, self.beta, self.gamma)


def voros_star(f: ExpSymbol, g: ExpSymbol) -> ExpSymbol:
    """Voros product of two exponential symbols in closed form.

    Raises
    ------
    DomainError
        If the product is not Gaussian-integrable (resulting ``gamma > 0``).
    """
    c = f.c * g.c * cmath.exp(f.alpha * g.beta)
    alpha = f.alpha + g.alpha + f.alpha * g.gamma
    beta = f.beta + g.beta + f.gamma * g.beta
    gamma = f.gamma + g.gamma + f.gamma * g.gamma
    if gamma > 0.0:
        raise DomainError(f"Voros product is not integrable (gamma = {gamma:g})")
    return ExpSymbol(c, alpha, beta, gamma)


def momentum_symbol(p: complex, theta_nc: float = 1.0) -> ExpSymbol:
    r"""Plane-wave symbol :math:`(z|p) = \sqrt{\theta/2\pi}\,e^{-\theta|p|^2/4}e^{i\sqrt{\theta/2}(\bar z p + z\bar p)}`."""
    if not theta_nc > 0:
        raise DomainError("theta_nc must be positive")
    p = complex(p)
    k = 1j * math.sqrt(theta_nc / 2.0)
    return ExpSymbol(math.sqrt(theta_nc / (2.0 * math.pi)) * math.exp(-theta_nc * abs(p) ** 2 / 4.0), k * p.conjugate(), k * p, 0.0)


def overlap(z: complex, z_prime: complex) -> float:
    """``|<z|z'>|^2 = exp(-|z - z'|^2)``."""
    return math.exp(-abs(complex(z) - complex(z_prime)) ** 2)


def coherent_overlap(z: complex, z_prime: complex, order: int = 60) -> float:
    """``|<z|z'>|^2`` from truncated coherent vectors."""
    a = coherent_vector(z, order).amplitudes
    b = coherent_vector(z_prime, order).amplitudes
    return abs(np.vdot(a, b)) ** 2


def momentum_resolution(z: complex, z_prime: complex, theta_nc: float = 1.0, n: int = 60) -> complex:
    r""":math:`\int d^2p\,(z'|p)(p|z)` by a Gauss-Hermite product rule in ``p``.

    The integrand carries :math:`e^{-\theta|p|^2/2}`; with
    :math:`p = x\sqrt{2/\theta}` it becomes the Hermite weight.
    """
    rule = gauss_hermite(n)
    x = np.asarray(rule.nodes)
    w = np.asarray(rule.weights)
    s = math.sqrt(2.0 / theta_nc)
    p = s * (x[:, None] + 1j * x[None, :])
    c = theta_nc / (2.0 * math.pi)
    k = math.sqrt(theta_nc / 2.0)
    dz = complex(z_prime) - complex(z)
    # (z'|p)(p|z) = c e^{-theta|p|^2/2} e^{i k (conj(dz) p + dz conj(p))}
    phase = np.exp(1j * k * (dz.conjugate() * p + dz * np.conj(p)))
    return complex(np.sum(w[:, None] * w[None, :] * phase) * c * s * s)


def gaussian_test_function(p: complex, center: complex, width: float) -> float:
    """Normalized test function ``exp(-|p - center|^2 / width^2) / (pi width^2)``."""
    return math.exp(-abs(complex(p) - complex(center)) ** 2 / width**2) / (math.pi * width**2)


def star_delta_check(p: complex, p_prime: complex, theta_nc: float = 1.0, test_width: float = 0.5,
                     n: int | None = None) -> tuple[complex, complex]:
    r"""Smeared plain and Voros-starred momentum kernels.

    Returns
    -------
    plain, starred : complex
        :math:`\int d^2p'\,\phi(p')\int\frac{d^2z}{\pi}(p'|z)\,(z|p)` and the
        same with the product replaced by :math:`\star`, where
        :math:`\phi` is :func:`gaussian_test_function` centred at ``p_prime``.
        The ``p'`` integral is Gaussian and done in closed form.  What is
        left in ``z`` is a Gaussian envelope times a plane wave, integrated
        with the trapezoid rule on a grid of ``n`` points per axis, which
        converges spectrally for any frequency.  Distributionally the
        expected values are :math:`e^{-\theta|p|^2/2}\phi(p)` and :math:`\phi(p)`.
    """
    if not test_width > 0:
        raise DomainError("test_width must be positive")
    if not theta_nc > 0:
        raise DomainError("theta_nc must be positive")
    p = complex(p)
    pc = complex(p_prime)
    k = math.sqrt(theta_nc / 2.0)
    a_coef = 1.0 / test_width**2 + theta_nc / 4.0
    kappa = theta_nc / (2.0 * a_coef)
    s = 1.0 / math.sqrt(kappa)
    log_pref = 0.5 * math.log(theta_nc / (2.0 * math.pi)) - math.log(math.pi**2 * test_width**2) - abs(pc) ** 2 / test_width**2
    fp = momentum_symbol(p, theta_nc)

    def log_integrand(z, starred):
        u = pc.conjugate() / test_width**2 - 1j * k * np.conj(z)
        v = pc / test_width**2 - 1j * k * z
        if starred:
            v = v + 0.5 * theta_nc * p
        # p' integral: (pi/A) exp(uv/A)
        return np.log(math.pi / a_coef) + u * v / a_coef + np.log(fp.c) + fp.alpha * z + fp.beta * np.conj(z)

    results = []
    for starred in (False, True):
        # exponent in scaled coordinates is -|x|^2 + b.x + const; locate the envelope and the frequency
        e0 = log_integrand(np.array(0j), starred)
        bx = (log_integrand(np.array(s + 0j), starred) - log_integrand(np.array(-s + 0j), starred)) / 2.0
        by = (log_integrand(np.array(1j * s), starred) - log_integrand(np.array(-1j * s), starred)) / 2.0
        cx, cy = bx.real / 2.0, by.real / 2.0
        freq = max(abs(bx.imag), abs(by.imag))
        half = 9.0
        h = 2.0 * math.pi / (freq + 16.0)
        m = n if n is not None else int(2 * math.ceil(half / h) + 1)
        tx = np.linspace(cx - half, cx + half, m)
        ty = np.linspace(cy - half, cy + half, m)
        dx = tx[1] - tx[0]
        z = s * (tx[:, None] + 1j * ty[None, :])
        vals = np.exp(log_integrand(z, starred) - e0)
        results.append(complex(np.sum(vals) * dx * dx * s * s * np.exp(e0 + log_pref)))
    return results[0], results[1]


def exp_symbol_operator(f: ExpSymbol, order: int) -> FockOperator:
    r"""Operator whose lower symbol is ``f`` (truncated).

    :math:`e^{|z|^2}f = c\,e^{\alpha z+\beta\bar z+(1+\gamma)z\bar z}
    = \sum_{nn'} A_{nn'}\bar z^n z^{n'}/\sqrt{n!n'!}`.
    """
    lg = [math.lgamma(k + 1) for k in range(order)]
    mat = np.zeros((order, order), dtype=complex)
    g1 = 1.0 + f.gamma
    for n in range(order):
        for n2 in range(order):
            total = 0j
            for l in range(min(n, n2) + 1):
                term = 1.0 + 0j
                if n - l:
                    term *= f.beta ** (n - l)
                if n2 - l:
                    term *= f.alpha ** (n2 - l)
                if l:
                    term *= g1**l
                if term != 0:
                    total += term * math.exp(0.5 * (lg[n] + lg[n2]) - lg[n - l] - lg[n2 - l] - lg[l])
            mat[n, n2] = f.c * total
    return FockOperator(mat, False, "exp symbol")


def noncommutativity_witness(z: complex, h: float = 1e-3) -> complex:
    r"""``z * zbar - zbar * z`` at ``z`` from parameter derivatives of exponential symbols.

    :math:`z = \partial_a e^{az}|_0` and :math:`\bar z = \partial_d e^{d\bar z}|_0`, so
    the mixed central difference in ``(a, d)`` of the starred exponentials
    gives the starred monomials.  The exact value is 1.
    """

    def mixed(first_is_z: bool) -> complex:
        acc = 0j
        for sa in (1, -1):
            for sd in (1, -1):
                ez = ExpSymbol(1.0, sa * h, 0.0)
                ezb = ExpSymbol(1.0, 0.0, sd * h)
                prod = voros_star(ez, ezb) if first_is_z else voros_star(ezb, ez)
                acc += sa * sd * complex(prod(z))
        return acc / (4.0 * h * h)

    return mixed(True) - mixed(False)


def _lower_symbol_of_product(f: ExpSymbol, g: ExpSymbol, z: complex, order: int = 60) -> complex:
    """Oracle for :func:`voros_star`: lower symbol of the product of the two operators."""
    prod = exp_symbol_operator(f, order) @ exp_symbol_operator(g, order)
    return lower_symbol(prod, z)
