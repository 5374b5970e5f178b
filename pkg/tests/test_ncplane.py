import cmath
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from csquant import ncplane as nc
from csquant.errors import DomainError

small_c = st.complex_numbers(max_magnitude=0.5, allow_nan=False, allow_infinity=False)
gam = st.floats(-0.6, 0.0)


def test_exp_symbol_validation_and_conj():
    with pytest.raises(DomainError):
        nc.ExpSymbol(1, 0, 0, 0.5)
    f = nc.ExpSymbol(1 + 2j, 0.3j, 0.1, -0.2)
    z = 0.4 - 0.7j
    assert f.conj()(z) == pytest.approx(np.conj(f(z)))


def test_voros_star_of_monomials():
    # z * zbar = |z|^2 + 1 and zbar * z = |z|^2
    assert nc.noncommutativity_witness(0.3 + 0.4j) == pytest.approx(1.0, abs=1e-6)


@given(small_c, small_c, small_c, gam, small_c, small_c, small_c, gam)
def test_voros_star_against_operator_product(c1, a1, b1, g1, c2, a2, b2, g2):
    f = nc.ExpSymbol(1 + c1, a1, b1, g1)
    g = nc.ExpSymbol(1 + c2, a2, b2, g2)
    z = 0.3 - 0.2j
    got = nc.voros_star(f, g)(z)
    ref = nc._lower_symbol_of_product(f, g, z, order=40)
    assert abs(got - ref) < 1e-10 * max(1.0, abs(ref))


def test_voros_star_associative():
    f = nc.ExpSymbol(1, 0.2, 0.1j, -0.1)
    g = nc.ExpSymbol(2, -0.3, 0.4, -0.2)
    h = nc.ExpSymbol(0.5j, 0.1, -0.2, 0.0)
    left = nc.voros_star(nc.voros_star(f, g), h)
    right = nc.voros_star(f, nc.voros_star(g, h))
    for a, b in zip(left.as_tuple(), right.as_tuple()):
        assert a == pytest.approx(b, abs=1e-14)


def test_voros_star_non_integrable():
    f = nc.ExpSymbol(1, 0, 0, -3.0)
    with pytest.raises(DomainError):
        nc.voros_star(f, f)


def test_overlap_two_routes():
    for z, w in [(0.3 + 0.1j, -0.2 + 0.5j), (1.0, 1.0j)]:
        assert nc.coherent_overlap(z, w) == pytest.approx(nc.overlap(z, w), abs=1e-13)


def test_momentum_symbol_is_plane_wave():
    p, th = 0.7 - 0.2j, 1.3
    f = nc.momentum_symbol(p, th)
    z = 0.4 + 0.9j
    expect = math.sqrt(th / (2 * math.pi)) * math.exp(-th * abs(p) ** 2 / 4) * cmath.exp(
        1j * math.sqrt(th / 2) * (np.conj(z) * p + z * np.conj(p))
    )
    assert f(z) == pytest.approx(expect)
    with pytest.raises(DomainError):
        nc.momentum_symbol(p, 0.0)


@pytest.mark.parametrize("theta_nc", [0.5, 1.0, 3.0])
def test_momentum_resolution(theta_nc):
    rng = np.random.default_rng(3)
    for _ in range(5):
        z, w = complex(*rng.normal(size=2)), complex(*rng.normal(size=2))
        assert nc.momentum_resolution(z, w, theta_nc) == pytest.approx(nc.overlap(z, w), abs=1e-10)


@pytest.mark.parametrize("width", [0.5, 0.1, 0.03])
def test_star_delta(width):
    th = 1.0
    p = math.sqrt(2 / th)
    plain, starred = nc.star_delta_check(p, p, th, width)
    phi = nc.gaussian_test_function(p, p, width)
    assert starred == pytest.approx(phi, rel=1e-9)
    assert plain / starred == pytest.approx(math.exp(-1.0), abs=1e-10)


def test_starred_kernel_theta_independent():
    vals = [nc.star_delta_check(0.5 + 0.3j, 0.4, th, 0.3)[1] for th in (0.3, 1.0, 4.0)]
    assert max(abs(v - vals[0]) for v in vals) < 1e-12
    assert vals[0] == pytest.approx(nc.gaussian_test_function(0.5 + 0.3j, 0.4, 0.3), rel=1e-12)


def test_exp_symbol_operator_lower_symbol():
    from csquant.symbols import lower_symbol

    f = nc.ExpSymbol(0.5, 0.2 - 0.1j, 0.3, -0.4)
    op = nc.exp_symbol_operator(f, 40)
    z = -0.4 + 0.6j
    assert lower_symbol(op, z) == pytest.approx(complex(f(z)), abs=1e-13)
