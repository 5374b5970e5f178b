r"""Quantization of derivatives of the Dirac distribution at the origin.

The building block is

.. math::
    U_{a,b} = \int \left[\partial_z^b \partial_{\bar z}^a \delta\right] |z\rangle\langle z|\,d^2z
            = \sum_{n\le b} (-1)^{n+a}\frac{a!\,b!}{(b-n)!\sqrt{n!\,n'!}}\,|n\rangle\langle n'|,
    \qquad n' = n - b + a,

which is supported on the finite block ``n <= b, n' <= a``.  Finite
combinations of these reach every matrix unit :math:`\Pi_{m,n} = |m\rangle\langle n|`,
which gives a block-truncated dequantization map and the upper-symbol
star product ``A_{F*G} = A_F A_G``.

Measure conventions
-------------------
``"plain"`` integrates against :math:`d^2z` (so ``U_{0,0} = Pi_00``).
``"pi"`` integrates against :math:`d^2z/\pi` (so ``A_delta = Pi_00/pi``).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Number, Rational
from typing import Mapping

import numpy as np

from .errors import DomainError, SupportError, TruncationError
from .fock import FockOperator

__all__ = [
    "MEASURES",
    "DiracDerivativeCombo",
    "dirac_delta",
    "u_matrix",
    "quantize_dirac_combo",
    "oblique_projector_symbol",
    "projector_symbol",
    "dequantize",
    "star_product",
]

MEASURES = ("plain", "pi")
SUPPORT_TOL = 1e-12


@dataclass(frozen=True)
class DiracDerivativeCombo:
    r"""Finite combination :math:`\sqrt{s}\sum c_{b,a}\,\partial_z^b\partial_{\bar z}^a\delta`.

    Parameters
    ----------
    terms : mapping
        ``(b, a) -> coefficient`` with ``b`` the order in :math:`\partial_z` and
        ``a`` the order in :math:`\partial_{\bar z}`.  Rational coefficients
        (``int`` or :class:`~fractions.Fraction`) are kept exact.
    measure : {"plain", "pi"}
        Integration measure used when quantizing.
    scale2 : Fraction
        Square of a common positive prefactor, so that irrational
        normalisations such as :math:`\sqrt{r!(r+s)!}` stay exact.
    """

    terms: Mapping[tuple[int, int], Number]
    measure: str = "plain"
    scale2: Fraction = field(default=Fraction(1))

    def __post_init__(self):
        if self.measure not in MEASURES:
            raise DomainError(f"measure must be one of {MEASURES}, got {self.measure!r}")
        clean = {}
        for key, c in dict(self.terms).items():
            b, a = (int(key[0]), int(key[1]))
            if b < 0 or a < 0:
                raise DomainError("derivative orders must be non-negative")
            if c != 0:
                clean[(b, a)] = c
        object.__setattr__(self, "terms", clean)
        s2 = Fraction(self.scale2)
        if s2 <= 0:
            raise DomainError("scale2 must be positive")
        object.__setattr__(self, "scale2", s2)

    @property
    def is_exact(self) -> bool:
        return all(isinstance(c, Rational) for c in self.terms.values())

    @property
    def max_order(self) -> int:
        """Largest derivative order; quantizing needs ``order > max_order``."""
        return max((max(k) for k in self.terms), default=0)

    def float_terms(self) -> dict[tuple[int, int], complex]:
        """Coefficients with the common scale folded in."""
        s = math.sqrt(self.scale2)
        return {k: complex(c) * s for k, c in self.terms.items()}

    def adjoint(self) -> DiracDerivativeCombo:
        """Symbol of the adjoint operator: swap ``(b, a)`` and conjugate."""
        terms = {(a, b): (c if isinstance(c, Rational) else complex(c).conjugate()) for (b, a), c in self.terms.items()}
        return DiracDerivativeCombo(terms, self.measure, self.scale2)

    def __add__(self, other: DiracDerivativeCombo) -> DiracDerivativeCombo:
        if self.measure != other.measure:
            raise DomainError("cannot add combos with different measures")
        if self.scale2 == other.scale2:
            terms = dict(self.terms)
            for k, c in other.terms.items():
                terms[k] = terms.get(k, 0) + c
            return DiracDerivativeCombo(terms, self.measure, self.scale2)
        terms = self.float_terms()
        for k, c in other.float_terms().items():
            terms[k] = terms.get(k, 0) + c
        return DiracDerivativeCombo(terms, self.measure)

    def __mul__(self, c) -> DiracDerivativeCombo:
        return DiracDerivativeCombo({k: v * c for k, v in self.terms.items()}, self.measure, self.scale2)

    __rmul__ = __mul__

    def allclose(self, other: DiracDerivativeCombo, atol: float = 1e-10) -> bool:
        if self.measure != other.measure:
            return False
        a, b = self.float_terms(), other.float_terms()
        return all(abs(a.get(k, 0) - b.get(k, 0)) <= atol for k in set(a) | set(b))

    def to_json(self) -> str:
        """``{"convention": ..., "terms": [{"b", "a", "re", "im"}, ...]}`` with the scale folded in."""
        terms = [
            {"b": b, "a": a, "re": c.real, "im": c.imag}
            for (b, a), c in sorted(self.float_terms().items())
        ]
        return json.dumps({"convention": self.measure, "terms": terms})

    @classmethod
    def from_json(cls, text: str) -> DiracDerivativeCombo:
        data = json.loads(text)
        terms = {(int(t["b"]), int(t["a"])): complex(t["re"], t["im"]) for t in data["terms"]}
        return cls(terms, data.get("convention", "plain"))


def dirac_delta(measure: str = "pi") -> DiracDerivativeCombo:
    """The Dirac distribution at the origin."""
    return DiracDerivativeCombo({(0, 0): 1}, measure)


def _u_integer_entries(a: int, b: int) -> list[tuple[int, int, int]]:
    """Entries ``(n, n', k)`` of ``U_{a,b} * sqrt(n! n'!)``; ``k`` is an exact integer."""
    out = []
    for n in range(0, b + 1):
        n2 = n - b + a
        if n2 < 0:
            continue
        sign = -1 if (n + a) % 2 else 1
        out.append((n, n2, sign * math.factorial(a) * math.factorial(b) // math.factorial(b - n)))
    return out


def u_matrix(a: int, b: int, order: int) -> np.ndarray:
    """Matrix of ``U_{a,b}`` (``plain`` measure) truncated to ``order``."""
    if max(a, b) >= order:
        raise TruncationError(f"U_{{{a},{b}}} needs order > {max(a, b)}")
    mat = np.zeros((order, order), dtype=complex)
    for n, n2, k in _u_integer_entries(a, b):
        mat[n, n2] = k / math.sqrt(math.factorial(n) * math.factorial(n2))
    return mat


def quantize_dirac_combo(combo: DiracDerivativeCombo, order: int) -> FockOperator:
    """Operator of a Dirac-derivative combination.

    Rational coefficients are summed exactly, so matrix units come out as
    exact zeros and ones; other coefficients are summed with
    :func:`math.fsum`.

    Raises
    ------
    TruncationError
        If ``order`` cannot hold the finite support.
    """
    if combo.max_order >= order:
        raise TruncationError(f"order {order} too small for derivative order {combo.max_order}")
    exact = combo.is_exact
    acc: dict[tuple[int, int], list] = {}
    for (b, a), c in combo.terms.items():
        for n, n2, k in _u_integer_entries(a, b):
            acc.setdefault((n, n2), []).append(c * k if exact else complex(c) * k)
    mat = np.zeros((order, order), dtype=complex)
    for (n, n2), parts in acc.items():
        norm2 = Fraction(math.factorial(n) * math.factorial(n2))
        ratio = combo.scale2 / norm2
        factor = math.sqrt(ratio.numerator) / math.sqrt(ratio.denominator)
        if exact:
            total = sum(parts, Fraction(0))
            val = complex(float(total) * factor) if total else 0.0
        else:
            val = complex(math.fsum(p.real for p in parts), math.fsum(p.imag for p in parts)) * factor
        mat[n, n2] = val
    if combo.measure == "pi":
        mat = mat / math.pi
    herm = np.array_equal(mat, mat.conj().T)
    return FockOperator(mat, herm, f"dirac_combo({len(combo.terms)} terms, {combo.measure})")


def oblique_projector_symbol(r: int, s: int, measure: str = "plain") -> DiracDerivativeCombo:
    r"""Upper symbol of the matrix unit :math:`\Pi_{r+s,r} = |r+s\rangle\langle r|`.

    .. math::
        f_{r+s,r} = \sqrt{r!(r+s)!}\,(-1)^s \sum_{p=0}^{r}
            \frac{\partial_z^{p+s}\partial_{\bar z}^{p}\delta}{p!\,(s+p)!\,(r-p)!}

    Negative ``s`` is handled through the adjoint.  With ``measure="pi"``
    the coefficients carry an extra factor ``pi`` so the quantized operator
    is still the matrix unit.
    """
    if r < 0 or r + s < 0:
        raise DomainError("projector indices must be non-negative")
    if s < 0:
        return oblique_projector_symbol(r + s, -s, measure).adjoint()
    sign = -1 if s % 2 else 1
    terms = {
        (p + s, p): Fraction(sign, math.factorial(p) * math.factorial(s + p) * math.factorial(r - p))
        for p in range(r + 1)
    }
    combo = DiracDerivativeCombo(terms, "plain", Fraction(math.factorial(r) * math.factorial(r + s)))
    if measure == "pi":
        return DiracDerivativeCombo({k: c * math.pi for k, c in combo.float_terms().items()}, "pi")
    return combo


def projector_symbol(m: int, n: int, measure: str = "plain") -> DiracDerivativeCombo:
    """Upper symbol of ``|m><n|``."""
    return oblique_projector_symbol(n, m - n, measure)


def _matrix_of(op) -> np.ndarray:
    return op.matrix if isinstance(op, FockOperator) else np.asarray(op, dtype=complex)


def dequantize(op, support: int, measure: str = "plain", tol: float = SUPPORT_TOL) -> DiracDerivativeCombo:
    r"""Block-truncated inverse of the quantization map.

    :math:`A^{-1}(O) = \sum_{m,n<K} \langle m|O|n\rangle f_{m,n}`.

    Parameters
    ----------
    op : FockOperator or array_like
    support : int
        Declared support bound ``K``; entries outside the leading
        ``K x K`` block must not exceed ``tol``.

    Raises
    ------
    SupportError
        If the operator has weight outside the declared block.
    """
    mat = _matrix_of(op)
    order = mat.shape[0]
    if not 1 <= support <= order:
        raise TruncationError(f"support bound {support} outside 1..{order}")
    outside = mat.copy()
    outside[:support, :support] = 0.0
    if np.max(np.abs(outside), initial=0.0) > tol:
        raise SupportError(f"operator has entries of size {np.max(np.abs(outside)):.2e} outside the {support}-block")
    terms: dict[tuple[int, int], complex] = {}
    for m in range(support):
        for n in range(support):
            w = mat[m, n]
            if w == 0:
                continue
            for k, c in projector_symbol(m, n, "plain").float_terms().items():
                terms[k] = terms.get(k, 0.0) + w * c
    if measure == "pi":
        terms = {k: c * math.pi for k, c in terms.items()}
    return DiracDerivativeCombo(terms, measure)


def star_product(f: DiracDerivativeCombo, g: DiracDerivativeCombo, support: int) -> DiracDerivativeCombo:
    """Upper-symbol star product: ``dequantize(quantize(f) @ quantize(g))`` on the ``support`` block."""
    if f.measure != g.measure:
        raise DomainError("star product needs a common measure")
    order = max(support, f.max_order + 1, g.max_order + 1)
    prod = quantize_dirac_combo(f, order).matrix @ quantize_dirac_combo(g, order).matrix
    return dequantize(prod, support, f.measure)
