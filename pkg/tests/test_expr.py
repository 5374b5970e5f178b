import math
from fractions import Fraction

import numpy as np
import pytest

from csquant import expr
from csquant.quantize import Isotropic, quantize


def test_polynomial_detection():
    p = expr.parse_polynomial("(u + 1)^2 / 2 - 3*u")
    np.testing.assert_allclose(p.coef, [0.5, -2.0, 0.5])
    assert expr.parse_polynomial("exp(u)") is None
    assert expr.parse_polynomial("u**0.5") is None


def test_isotropic_observable_exact():
    obs = expr.isotropic_observable("u")
    assert isinstance(obs, Isotropic)
    np.testing.assert_array_equal(np.diag(quantize(obs, 10).matrix).real, np.arange(1, 11))


def test_general_expression_variables():
    f = expr.parse_expression("z*zbar - r^2 + q + i*p", "general")
    z = np.array([0.3 + 0.4j, -1 + 2j])
    np.testing.assert_allclose(f(z), math.sqrt(2) * z.real + 1j * math.sqrt(2) * z.imag, atol=1e-14)


def test_angular_expression():
    g = expr.parse_expression("cot(theta) + cos(2*theta)", "angular")
    assert g(1.0) == pytest.approx(1 / math.tan(1.0) + math.cos(2.0))
    obs = expr.angular_observable("cos(theta)", 4)
    assert obs.coeffs[1] == pytest.approx(0.5)


def test_constant_expression_broadcasts():
    f = expr.parse_expression("2*pi", "general")
    assert f(np.zeros(3, dtype=complex)).shape == (3,)


@pytest.mark.parametrize(
    "bad",
    ["", "x + 1", "__import__('os')", "u.real", "lambda: 1", "[u]", "sin(u, u)", "open('f')", "True"],
)
def test_rejects_unsafe_or_unknown(bad):
    with pytest.raises(expr.ExpressionError):
        expr.parse_expression(bad, "isotropic")


def test_dirac_parsing():
    combo = expr.parse_dirac("1:0,0; 1/2:1,1")
    assert combo.terms == {(0, 0): Fraction(1), (1, 1): Fraction(1, 2)}
    assert combo.is_exact
    c2 = expr.parse_dirac("0.5+2i:2,0", "pi")
    assert c2.terms[(2, 0)] == 0.5 + 2j and c2.measure == "pi"
    for bad in ("", "1:0", "a:0,0", "1:-1,0"):
        with pytest.raises(expr.ExpressionError):
            expr.parse_dirac(bad)
