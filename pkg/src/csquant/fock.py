"""Truncated Fock space: ladder operators, coherent states and padding.

Operators are stored as dense ``order x order`` matrices in the number
basis ``|0>, ..., |order-1>``.  Products of band-limited operators are
only exact away from the last rows of a truncation, so
:class:`TruncationPolicy` describes how much to pad before cropping.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy import special as _sp

from . import linalg
from .errors import DomainError, TruncationError
from .quadrature import gauss_legendre

__all__ = [
    "FockOperator",
    "CoherentVector",
    "TruncationPolicy",
    "TruncationWarning",
    "identity",
    "lowering",
    "raising",
    "number_operator",
    "position_momentum",
    "projector",
    "coherent_vector",
    "padded_commutator",
    "disk_resolution",
]

COHERENT_LOSS_WARN = 1e-8


class TruncationWarning(UserWarning):
    """A coherent vector lost more than :data:`COHERENT_LOSS_WARN` of its norm."""


def _frozen(m: np.ndarray) -> np.ndarray:
    m = np.array(m, dtype=complex)
    m.flags.writeable = False
    return m


@dataclass(frozen=True, eq=False)
class FockOperator:
    """A truncated operator ``sum A[n, n'] |n><n'|``.

    Parameters
    ----------
    matrix : array_like
        Square complex matrix; stored read-only.
    hermitian : bool
        Declared Hermiticity, validated at construction.
    provenance : str
        Free-text description of how the operator was built.
    """

    matrix: np.ndarray
    hermitian: bool = False
    provenance: str = ""

    def __post_init__(self):
        m = linalg.as_matrix(self.matrix)
        if self.hermitian and not linalg.is_hermitian(m):
            raise DomainError(f"operator {self.provenance!r} flagged Hermitian but is not")
        object.__setattr__(self, "matrix", _frozen(m))

    @property
    def order(self) -> int:
        return self.matrix.shape[0]

    def __repr__(self) -> str:
        return f"FockOperator(order={self.order}, hermitian={self.hermitian}, provenance={self.provenance!r})"

    def crop(self, order: int) -> FockOperator:
        """Leading ``order x order`` block."""
        if not 1 <= order <= self.order:
            raise TruncationError(f"cannot crop order {self.order} to {order}")
        return FockOperator(self.matrix[:order, :order], self.hermitian, self.provenance)

    def dagger(self) -> FockOperator:
        return FockOperator(self.matrix.conj().T, self.hermitian, f"({self.provenance})^dagger")

    def is_hermitian(self, rtol: float = linalg.HERMITIAN_RTOL) -> bool:
        return linalg.is_hermitian(self.matrix, rtol)

    def _coerce(self, other) -> np.ndarray:
        if isinstance(other, FockOperator):
            if other.order != self.order:
                raise DomainError(f"order mismatch: {self.order} vs {other.order}")
            return other.matrix
        raise TypeError(f"cannot combine FockOperator with {type(other).__name__}")

    def __matmul__(self, other) -> FockOperator:
        m = linalg.matmul(self.matrix, self._coerce(other))
        return FockOperator(m, False, f"{self.provenance} @ {other.provenance}")

    def __add__(self, other) -> FockOperator:
        m = self.matrix + self._coerce(other)
        return FockOperator(m, self.hermitian and other.hermitian, f"{self.provenance} + {other.provenance}")

    def __sub__(self, other) -> FockOperator:
        m = self.matrix - self._coerce(other)
        return FockOperator(m, self.hermitian and other.hermitian, f"{self.provenance} - {other.provenance}")

    def __neg__(self) -> FockOperator:
        return FockOperator(-self.matrix, self.hermitian, f"-{self.provenance}")

    def __mul__(self, c) -> FockOperator:
        c = complex(c)
        herm = self.hermitian and c.imag == 0.0
        return FockOperator(c * self.matrix, herm, f"{c:g}*{self.provenance}")

    __rmul__ = __mul__

    def commutator(self, other: FockOperator) -> FockOperator:
        m = linalg.commutator(self.matrix, self._coerce(other))
        return FockOperator(m, False, f"[{self.provenance}, {other.provenance}]")

    def expectation(self, vec: np.ndarray) -> complex:
        """``<v|A|v>`` for an amplitude vector of matching length."""
        vec = np.asarray(vec)
        return complex(np.vdot(vec, self.matrix @ vec))


@dataclass(frozen=True)
class CoherentVector:
    """Truncated coherent state ``e^{-|z|^2/2} sum z^n / sqrt(n!) |n>``.

    Attributes
    ----------
    z : complex
    amplitudes : ndarray
        The ``order`` leading amplitudes.
    loss : float
        ``1 - sum |amplitudes|^2``, the Poisson tail beyond the truncation.
    """

    z: complex
    amplitudes: np.ndarray = field(repr=False)
    loss: float

    @property
    def order(self) -> int:
        return len(self.amplitudes)

    @property
    def norm2(self) -> float:
        return 1.0 - self.loss


@dataclass(frozen=True)
class TruncationPolicy:
    """Compute at ``order + pad`` and crop back to ``order``."""

    order: int
    pad: int = 0

    def __post_init__(self):
        if self.order < 1:
            raise DomainError("order must be positive")
        if self.pad < 0:
            raise DomainError("pad must be non-negative")

    @property
    def compute_order(self) -> int:
        return self.order + self.pad

    @classmethod
    def for_bandwidth(cls, order: int, bandwidth: int) -> TruncationPolicy:
        """Pad enough for one product of operators of the given band width."""
        return cls(order, 2 * bandwidth)


def identity(order: int) -> FockOperator:
    return FockOperator(np.eye(order), True, "I")


def lowering(order: int) -> FockOperator:
    """Annihilation operator: ``a[n, n+1] = sqrt(n+1)``."""
    if order < 1:
        raise DomainError("order must be positive")
    return FockOperator(np.diag(np.sqrt(np.arange(1.0, order)), 1), False, "a")


def raising(order: int) -> FockOperator:
    """Creation operator ``a^dagger``."""
    if order < 1:
        raise DomainError("order must be positive")
    return FockOperator(np.diag(np.sqrt(np.arange(1.0, order)), -1), False, "a^dagger")


def number_operator(order: int) -> FockOperator:
    return FockOperator(np.diag(np.arange(float(order))), True, "N")


def position_momentum(order: int) -> tuple[FockOperator, FockOperator]:
    """``Q = (a + a^dagger)/sqrt2`` and ``P = (a - a^dagger)/(i sqrt2)``."""
    if order < 2:
        raise DomainError("position/momentum need order >= 2")
    a = lowering(order).matrix
    ad = a.conj().T
    q = (a + ad) / math.sqrt(2.0)
    p = (a - ad) / (1j * math.sqrt(2.0))
    return FockOperator(q, True, "Q"), FockOperator(p, True, "P")


def projector(m: int, n: int, order: int) -> FockOperator:
    """``|m><n|``."""
    if not (0 <= m < order and 0 <= n < order):
        raise TruncationError(f"|{m}><{n}| does not fit in order {order}")
    mat = np.zeros((order, order), dtype=complex)
    mat[m, n] = 1.0
    return FockOperator(mat, m == n, f"|{m}><{n}|")


def coherent_amplitudes(z: complex, order: int) -> np.ndarray:
    """Leading ``order`` amplitudes of ``|z>``, computed in log space."""
    z = complex(z)
    n = np.arange(order, dtype=float)
    r = abs(z)
    if r == 0.0:
        amp = np.zeros(order, dtype=complex)
        amp[0] = 1.0
        return amp
    logmag = n * math.log(r) - 0.5 * _sp.gammaln(n + 1.0) - 0.5 * r * r
    return np.exp(logmag) * np.exp(1j * math.atan2(z.imag, z.real) * n)


def coherent_vector(z: complex, order: int, warn: bool = True) -> CoherentVector:
    """Coherent state ``|z>`` truncated to ``order`` number states.

    Emits :class:`TruncationWarning` when the discarded Poisson tail
    exceeds :data:`COHERENT_LOSS_WARN`.
    """
    if order < 1:
        raise DomainError("order must be positive")
    amp = coherent_amplitudes(z, order)
    # P(Poisson(|z|^2) >= order) = regularized lower gamma P(order, |z|^2)
    loss = float(_sp.gammainc(order, abs(z) ** 2)) if z != 0 else 0.0
    if warn and loss > COHERENT_LOSS_WARN:
        warnings.warn(
            f"coherent vector z={z} loses {loss:.2e} of its norm at order {order}",
            TruncationWarning,
            stacklevel=2,
        )
    amp.flags.writeable = False
    return CoherentVector(complex(z), amp, loss)


def padded_commutator(
    build_a: Callable[[int], FockOperator],
    build_b: Callable[[int], FockOperator],
    policy: TruncationPolicy,
) -> FockOperator:
    """``[A, B]`` evaluated at ``policy.compute_order`` then cropped."""
    n = policy.compute_order
    a, b = build_a(n), build_b(n)
    c = a.commutator(b).crop(policy.order)
    return FockOperator(c.matrix, False, f"[{a.provenance}, {b.provenance}] pad={policy.pad}")


def disk_resolution(order: int, radius: float, n_radial: int = 80, n_angular: int | None = None) -> np.ndarray:
    r"""Numerically integrate :math:`\frac1\pi\int_{|z|\le R} |z\rangle\langle z|\,d^2z`.

    Uses Gauss-Legendre in the radius and the trapezoidal rule in the
    angle (exact for the trigonometric polynomials that appear).
    """
    if n_angular is None:
        n_angular = 2 * order + 2
    rule = gauss_legendre(n_radial, 0.0, radius)
    phis = 2.0 * np.pi * np.arange(n_angular) / n_angular
    out = np.zeros((order, order), dtype=complex)
    for rho, w in zip(rule.nodes, rule.weights):
        for phi in phis:
            v = coherent_amplitudes(rho * np.exp(1j * phi), order)
            out += (w * rho * (2.0 / n_angular)) * np.outer(v, v.conj())
    return out
