r"""Numerical studies of the time-Hamiltonian and angle-number commutators.

:func:`time_commutator_study` forms :math:`C = [A_t, A_H]` at a padded
order, crops it, and records its diagonal, the spectrum of :math:`iC`,
the spectral norm and trace of :math:`D = C + iI`, and the growth of the
Frobenius norm of ``D``.  Because :math:`A_H` has band width 2, a pad of 2
or more makes the cropped matrix equal to the corresponding block of the
infinite commutator.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from typing import Sequence

import numpy as np
from scipy import special as _sp

from . import linalg
from .errors import DomainError
from .fock import FockOperator, TruncationPolicy, number_operator, padded_commutator
from .quantize import build_angle_operator, build_free_hamiltonian, build_time_operator

__all__ = [
    "OrderRecord",
    "StudyReport",
    "DecayFit",
    "time_commutator",
    "time_commutator_offdiagonal",
    "time_commutator_study",
    "offdiagonal_decay_check",
    "decay_shape",
    "angle_number_commutator",
    "angle_number_commutator_study",
    "eigenvalue_histogram",
]

MIN_STUDY_ORDER = 8


@dataclass
class OrderRecord:
    """Diagnostics for one truncation order."""

    order: int
    eigenvalues: list[float]
    spectral_norm: float
    trace_real: float
    trace_imag: float
    frobenius2: float
    diagonal_real: list[float] = field(default_factory=list)
    diagonal_imag: list[float] = field(default_factory=list)
    max_offdiag_residual: float = 0.0


@dataclass
class DecayFit:
    """``ln|C[row, n]| ~ rate * n + log_const`` on the fitted range."""

    rate: float
    log_const: float
    n_values: list[int]
    abs_values: list[float]


@dataclass
class StudyReport:
    """Per-order diagnostics plus an optional decay fit."""

    kind: str
    orders: list[int]
    pad: int
    records: list[OrderRecord]
    decay_fit: DecayFit | None = None

    def __post_init__(self):
        if any(b <= a for a, b in zip(self.orders, self.orders[1:])):
            raise DomainError("orders must be strictly increasing")

    def record(self, order: int) -> OrderRecord:
        for rec in self.records:
            if rec.order == order:
                return rec
        raise KeyError(order)

    @property
    def spectral_norms(self) -> list[float]:
        return [r.spectral_norm for r in self.records]

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=1)


# ---------------------------------------------------------------------------
# Time-Hamiltonian commutator
# ---------------------------------------------------------------------------


def time_commutator(order: int, pad: int = 4) -> FockOperator:
    """``[A_t, A_H]`` built at ``order + pad`` and cropped to ``order``."""
    if pad < 0:
        raise DomainError("pad must be non-negative")
    return padded_commutator(build_time_operator, build_free_hamiltonian, TruncationPolicy(order, pad))


def time_commutator_offdiagonal(m: int, n: int) -> complex:
    r"""Closed form of the infinite commutator entry ``C[m, n]`` for ``m != n``.

    Nonzero only for even ``m - n``:
    :math:`C_{mn} = i\,|m-n|\,\Gamma(\tfrac{m+n}{2})\,/\,(4\sqrt{m!\,n!})`.
    """
    if m == n:
        raise DomainError("diagonal entries are not given by this formula")
    if (m - n) % 2:
        return 0j
    s = (m + n) // 2
    return 1j * abs(m - n) / 4.0 * math.exp(math.lgamma(s) - 0.5 * (math.lgamma(m + 1) + math.lgamma(n + 1)))


def _order_record(c: np.ndarray, order: int, diag: bool) -> OrderRecord:
    d = c + 1j * np.eye(order)
    eig = linalg.hermitian_eigen(1j * c, vectors=False).eigenvalues
    tr = np.trace(d)
    off = c - np.diag(np.diag(c))
    return OrderRecord(
        order=order,
        eigenvalues=[float(x) for x in eig],
        spectral_norm=linalg.spectral_norm(d),
        trace_real=float(tr.real),
        trace_imag=float(tr.imag),
        frobenius2=float(np.sum(np.abs(d) ** 2)),
        diagonal_real=[float(x) for x in np.diag(c).real] if diag else [],
        diagonal_imag=[float(x) for x in np.diag(c).imag] if diag else [],
        max_offdiag_residual=float(np.max(np.abs(off + off.conj().T), initial=0.0)),
    )


def time_commutator_study(orders: Sequence[int], pad: int = 4, decay_row: int | None = 0) -> StudyReport:
    """Diagnostics of ``C = [A_t, A_H]`` and ``D = C + iI`` at each order.

    The decay fit, if requested, uses the largest order.
    """
    orders = [int(n) for n in orders]
    if not orders or min(orders) < MIN_STUDY_ORDER:
        raise DomainError(f"orders must be >= {MIN_STUDY_ORDER}")
    records = []
    last = None
    for n in orders:
        c = time_commutator(n, pad)
        records.append(_order_record(c.matrix, n, diag=True))
        last = c
    fit = None
    if decay_row is not None and last is not None and last.order >= 2 * (decay_row + 1) and last.order > 24:
        fit = offdiagonal_decay_check(last, decay_row, n_min=20, n_max=min(60, last.order - 1))
    return StudyReport("time_hamiltonian", orders, pad, records, fit)


def offdiagonal_decay_check(c: FockOperator, row: int = 0, n_min: int = 20, n_max: int = 60) -> DecayFit:
    """Least-squares fit of ``ln|C[row, n]|`` over ``n - row`` even in ``[n_min, n_max]``.

    Raises
    ------
    DomainError
        If the row is too long for the order or has no nonzero entries.
    """
    if not 0 <= row < c.order // 2:
        raise DomainError("row must be below half the order")
    n_max = min(n_max, c.order - 1)
    ns = [n for n in range(n_min, n_max + 1) if (n - row) % 2 == 0 and n != row]
    vals = np.abs(c.matrix[row, ns])
    if len(ns) < 2 or np.any(vals == 0.0):
        raise DomainError("row has no usable nonzero entries to fit")
    slope, intercept = np.polyfit(np.asarray(ns, dtype=float), np.log(vals), 1)
    return DecayFit(float(slope), float(intercept), ns, [float(v) for v in vals])


def decay_shape(n) -> np.ndarray:
    r"""Asymptotic shape :math:`\sqrt{(1+12n)\,2^{-n}\,n^{-1/2}}` of ``|<0|C|n>|``."""
    n = np.asarray(n, dtype=float)
    return np.sqrt((1.0 + 12.0 * n) * 2.0**-n / np.sqrt(n))


# ---------------------------------------------------------------------------
# Angle-number commutator
# ---------------------------------------------------------------------------


def angle_number_commutator(order: int) -> FockOperator:
    r"""Closed form :math:`[A_{\arg}, N] = i\sum_{n\ne n'}\Gamma(\tfrac{n+n'}2+1)/\sqrt{n!n'!}\,|n\rangle\langle n'|`."""
    n = np.arange(order, dtype=float)
    half = 0.5 * _sp.gammaln(n + 1.0)
    g = np.exp(_sp.gammaln(0.5 * (n[:, None] + n[None, :]) + 1.0) - half[:, None] - half[None, :])
    mat = 1j * g
    np.fill_diagonal(mat, 0.0)
    return FockOperator(mat, False, "[A_arg, N] closed form")


def angle_number_commutator_study(orders: Sequence[int]) -> StudyReport:
    """Compare the closed form with ``[A_arg, N]`` formed by matrix products.

    ``max_offdiag_residual`` holds the largest discrepancy between the two
    routes.  ``N`` is diagonal, so no padding is needed.
    """
    orders = [int(n) for n in orders]
    if not orders or min(orders) < MIN_STUDY_ORDER:
        raise DomainError(f"orders must be >= {MIN_STUDY_ORDER}")
    records = []
    for n in orders:
        direct = build_angle_operator(n).commutator(number_operator(n)).matrix
        closed = angle_number_commutator(n).matrix
        scale = max(float(np.max(np.abs(closed))), 1.0)
        eig = linalg.hermitian_eigen(1j * direct, vectors=False).eigenvalues
        d = direct + 1j * np.eye(n)
        tr = np.trace(d)
        records.append(
            OrderRecord(
                order=n,
                eigenvalues=[float(x) for x in eig],
                spectral_norm=linalg.spectral_norm(direct),
                trace_real=float(tr.real),
                trace_imag=float(tr.imag),
                frobenius2=float(np.sum(np.abs(direct) ** 2)),
                max_offdiag_residual=float(np.max(np.abs(direct - closed)) / scale),
            )
        )
    return StudyReport("angle_number", orders, 0, records)


def eigenvalue_histogram(values: Sequence[float], width: float = 0.01) -> tuple[np.ndarray, np.ndarray]:
    """Histogram with bins of fixed ``width`` aligned to multiples of it."""
    v = np.asarray(values, dtype=float)
    lo = math.floor(v.min() / width) * width
    hi = math.ceil(v.max() / width) * width + width
    edges = np.arange(lo, hi + 0.5 * width, width)
    counts, edges = np.histogram(v, bins=edges)
    return counts, edges
