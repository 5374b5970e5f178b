import math

import numpy as np
import pytest
from scipy import special

from csquant.quadrature import composite_gauss_legendre, gauss_hermite, gauss_laguerre_scaled, gauss_legendre


@pytest.mark.parametrize("n", [10, 60, 200, 600])
def test_laguerre_moments(n):
    rule = gauss_laguerre_scaled(n)
    # scaled weights: sum W e^{-u} u^k = k!
    x = np.asarray(rule.nodes)
    w = np.asarray(rule.weights) * np.exp(-x)
    for k in range(min(n, 12)):
        assert np.sum(w * x**k) == pytest.approx(math.factorial(k), rel=1e-10)


def test_laguerre_matches_scipy_small():
    x, w = special.roots_laguerre(30)
    rule = gauss_laguerre_scaled(30)
    np.testing.assert_allclose(rule.nodes, x, rtol=1e-12)
    np.testing.assert_allclose(np.asarray(rule.weights) * np.exp(-x), w, rtol=1e-9, atol=1e-300)


def test_laguerre_large_is_finite():
    rule = gauss_laguerre_scaled(400)
    assert np.all(np.isfinite(rule.nodes)) and np.all(np.isfinite(rule.weights))
    assert np.all(np.diff(rule.nodes) > 0)


def test_hermite_gaussian_moments():
    rule = gauss_hermite(20)
    assert rule.integrate(np.asarray(rule.nodes) ** 4) == pytest.approx(0.75 * math.sqrt(math.pi), rel=1e-13)


def test_legendre_and_composite():
    rule = gauss_legendre(8, 0.0, 2.0)
    assert rule.integrate(np.exp(np.asarray(rule.nodes))) == pytest.approx(math.e**2 - 1, rel=1e-13)
    comp = composite_gauss_legendre(np.linspace(0, math.pi, 5), 10)
    assert comp.integrate(np.sin(np.asarray(comp.nodes))) == pytest.approx(2.0, rel=1e-14)
