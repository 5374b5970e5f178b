"""Observable mini-language.

Expressions are parsed with :mod:`ast` and checked against a whitelist, so
only arithmetic, powers (``**`` or ``^``), the functions in :data:`FUNCTIONS`,
the constants ``i``, ``pi``, ``e`` and the variables of the chosen context
are accepted.

Contexts
--------
``isotropic``  : ``u`` (= ``|z|^2``)
``angular``    : ``theta``
``general``    : ``z``, ``zbar``, ``r``, ``theta``, ``u``, ``q``, ``p``

Dirac combinations are written ``"coef:b,a; coef:b,a; ..."`` where ``b`` and
``a`` are the orders of the z and zbar derivatives.  Rational coefficients
such as ``1/2`` are kept exact.
"""

from __future__ import annotations

import ast
import math
from fractions import Fraction
from typing import Callable

import numpy as np
from numpy.polynomial import Polynomial

from .distrib import MEASURES, DiracDerivativeCombo
from .errors import CSQuantError

__all__ = [
    "ExpressionError",
    "FUNCTIONS",
    "CONTEXTS",
    "parse_expression",
    "parse_polynomial",
    "parse_dirac",
    "isotropic_observable",
    "angular_observable",
    "general_observable",
]


class ExpressionError(CSQuantError, ValueError):
    """Malformed or disallowed observable expression."""


def _cot(x):
    return np.cos(x) / np.sin(x)


FUNCTIONS: dict[str, Callable] = {
    "sin": np.sin,
    "cos": np.cos,
    "tan": np.tan,
    "cot": _cot,
    "exp": np.exp,
    "log": np.log,
    "sqrt": np.sqrt,
    "abs": np.abs,
    "conj": np.conj,
    "re": np.real,
    "im": np.imag,
}

CONSTANTS = {"i": 1j, "pi": math.pi, "e": math.e}

CONTEXTS = {
    "isotropic": ("u",),
    "angular": ("theta",),
    "general": ("z", "zbar", "r", "theta", "u", "q", "p"),
}

_BINOPS = {
    ast.Add: lambda a, b: a + b,
    ast.Sub: lambda a, b: a - b,
    ast.Mult: lambda a, b: a * b,
    ast.Div: lambda a, b: a / b,
    ast.Pow: lambda a, b: a**b,
}
_UNARY = {ast.UAdd: lambda a: a, ast.USub: lambda a: -a}


def _parse_tree(text: str) -> ast.Expression:
    if not isinstance(text, str) or not text.strip():
        raise ExpressionError("empty expression")
    try:
        return ast.parse(text.replace("^", "**"), mode="eval")
    except SyntaxError as exc:
        raise ExpressionError(f"cannot parse {text!r}: {exc.msg}") from None


def _compile(node: ast.AST, variables: tuple[str, ...]) -> Callable[[dict], object]:
    if isinstance(node, ast.Expression):
        return _compile(node.body, variables)
    if isinstance(node, ast.Constant) and isinstance(node.value, (int, float, complex)) and not isinstance(node.value, bool):
        value = node.value
        return lambda env: value
    if isinstance(node, ast.Name):
        name = node.id
        if name in variables:
            return lambda env: env[name]
        if name in CONSTANTS:
            value = CONSTANTS[name]
            return lambda env: value
        raise ExpressionError(f"unknown name {name!r}; allowed variables {variables}")
    if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
        op = _BINOPS[type(node.op)]
        left, right = _compile(node.left, variables), _compile(node.right, variables)
        return lambda env: op(left(env), right(env))
    if isinstance(node, ast.UnaryOp) and type(node.op) in _UNARY:
        op = _UNARY[type(node.op)]
        inner = _compile(node.operand, variables)
        return lambda env: op(inner(env))
    if isinstance(node, ast.Call) and isinstance(node.func, ast.Name) and not node.keywords:
        name = node.func.id
        if name not in FUNCTIONS:
            raise ExpressionError(f"unknown function {name!r}; allowed {sorted(FUNCTIONS)}")
        if len(node.args) != 1:
            raise ExpressionError(f"{name} takes one argument")
        fn = FUNCTIONS[name]
        arg = _compile(node.args[0], variables)
        return lambda env: fn(arg(env))
    raise ExpressionError(f"unsupported syntax: {ast.dump(node)[:60]}")


def parse_expression(text: str, context: str = "general") -> Callable:
    """Compile ``text`` to a vectorized function.

    Returns
    -------
    callable
        ``f(u)`` for ``isotropic``, ``f(theta)`` for ``angular`` and
        ``f(z)`` for ``general`` (the other variables are derived from ``z``).
    """
    if context not in CONTEXTS:
        raise ExpressionError(f"unknown context {context!r}")
    variables = CONTEXTS[context]
    fn = _compile(_parse_tree(text), variables)

    if context == "isotropic":
        return lambda u: _broadcast(fn({"u": np.asarray(u)}), u)
    if context == "angular":
        return lambda theta: _broadcast(fn({"theta": np.asarray(theta)}), theta)

    def general(z):
        z = np.asarray(z, dtype=complex)
        env = {
            "z": z,
            "zbar": np.conj(z),
            "r": np.abs(z),
            "theta": np.mod(np.angle(z), 2.0 * np.pi),
            "u": np.abs(z) ** 2,
            "q": math.sqrt(2.0) * z.real,
            "p": math.sqrt(2.0) * z.imag,
        }
        return _broadcast(fn(env), z)

    return general


def _broadcast(value, like):
    return np.broadcast_to(np.asarray(value), np.shape(like)) if np.ndim(value) == 0 else np.asarray(value)


def parse_polynomial(text: str) -> Polynomial | None:
    """Exact polynomial in ``u`` if ``text`` is one, else ``None``."""
    tree = _parse_tree(text)

    def walk(node):
        if isinstance(node, ast.Expression):
            return walk(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)) and not isinstance(node.value, bool):
            return Polynomial([node.value])
        if isinstance(node, ast.Name):
            if node.id == "u":
                return Polynomial([0, 1])
            if node.id in ("pi", "e"):
                return Polynomial([CONSTANTS[node.id]])
            return None
        if isinstance(node, ast.UnaryOp) and type(node.op) in _UNARY:
            inner = walk(node.operand)
            return None if inner is None else _UNARY[type(node.op)](inner)
        if isinstance(node, ast.BinOp):
            left, right = walk(node.left), walk(node.right)
            if left is None or right is None:
                return None
            if isinstance(node.op, (ast.Add, ast.Sub, ast.Mult)):
                return _BINOPS[type(node.op)](left, right)
            if isinstance(node.op, ast.Div) and right.degree() == 0:
                return left / right.coef[0]
            if isinstance(node.op, ast.Pow) and right.degree() == 0:
                k = right.coef[0]
                if float(k).is_integer() and 0 <= k <= 64:
                    return left ** int(k)
            return None
        return None

    poly = walk(tree)
    return None if poly is None else poly.trim()


def _parse_coefficient(text: str):
    text = text.strip().replace("i", "j") if "i" in text else text.strip()
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        pass
    try:
        return complex(text)
    except ValueError:
        raise ExpressionError(f"bad coefficient {text!r}") from None


def parse_dirac(text: str, measure: str = "plain") -> DiracDerivativeCombo:
    """Parse ``"coef:b,a; ..."`` into a :class:`DiracDerivativeCombo`."""
    if measure not in MEASURES:
        raise ExpressionError(f"measure must be one of {MEASURES}")
    terms: dict[tuple[int, int], object] = {}
    parts = [p for p in text.replace("\n", ";").split(";") if p.strip()]
    if not parts:
        raise ExpressionError("empty Dirac combination")
    for part in parts:
        try:
            coef_text, orders = part.split(":")
            b_text, a_text = orders.split(",")
            b, a = int(b_text), int(a_text)
        except ValueError:
            raise ExpressionError(f"bad Dirac term {part!r}; expected coef:b,a") from None
        if b < 0 or a < 0:
            raise ExpressionError("derivative orders must be non-negative")
        terms[(b, a)] = terms.get((b, a), 0) + _parse_coefficient(coef_text)
    if any(not isinstance(c, Fraction) for c in terms.values()):
        terms = {k: complex(c) for k, c in terms.items()}
    return DiracDerivativeCombo(terms, measure)


def isotropic_observable(text: str):
    """:class:`~csquant.quantize.Isotropic` observable; exact when polynomial."""
    from .quantize import Isotropic

    poly = parse_polynomial(text)
    return Isotropic(poly if poly is not None else parse_expression(text, "isotropic"), text)


def angular_observable(text: str, m_max: int):
    """:class:`~csquant.quantize.Angular` observable with Fourier modes up to ``m_max``.

    Coefficients come from the principal-value quadrature, so symbols with
    simple poles such as ``cot(theta)`` are accepted.
    """
    from .quantize import Angular, fourier_coeffs_pv

    g = parse_expression(text, "angular")
    return Angular(fourier_coeffs_pv(lambda t: complex(g(t)), m_max), text)


def general_observable(text: str):
    """:class:`~csquant.quantize.General` observable."""
    from .quantize import General

    return General(parse_expression(text, "general"), text)
