import math

import mpmath as mp
import numpy as np
import pytest

from csquant import symbols as sy
from csquant.errors import DomainError, TruncationError
from csquant.quantize import (
    build_angle_operator,
    build_free_hamiltonian,
    build_time_operator,
    cot_fourier_coeffs,
    quantize_angular,
    quantize_general,
)
from csquant.spectra import angle_number_commutator, time_commutator


def test_lower_symbol_of_identity_and_number():
    from csquant.fock import identity, number_operator

    z = 1.2 - 0.4j
    assert sy.lower_symbol(identity(60), z) == pytest.approx(1.0, abs=1e-13)
    assert sy.lower_symbol(number_operator(60), z).real == pytest.approx(abs(z) ** 2, abs=1e-12)


def test_lower_symbol_truncation_error():
    with pytest.raises(TruncationError):
        sy.lower_symbol(build_angle_operator(10), 4.0)


def test_hbar_rescaling():
    from csquant.fock import number_operator

    z = 0.8 + 0.3j
    assert sy.lower_symbol(number_operator(80), z, hbar=0.1).real == pytest.approx(abs(z) ** 2 / 0.1, rel=1e-12)


def test_angle_coefficient_forms_agree():
    for r in (0.1, 1.0, 5.0, 20.0):
        a = sy.angle_coefficients(r, 10)
        b = sy.angle_coefficients_hypergeometric(r, 10)
        np.testing.assert_allclose(a, b, atol=1e-9, rtol=1e-9)


def test_angle_coefficients_mpmath():
    # c_q = (2/q) r^q e^{-r^2} Gamma(q/2 + 1) 1F1(q/2 + 1; q + 1; r^2) / q!
    mp.mp.dps = 30
    r = mp.mpf("1.7")
    c = sy.angle_coefficients(1.7, 6)
    for q in range(1, 7):
        ref = 2 / mp.mpf(q) * r**q * mp.exp(-r * r) * mp.gamma(mp.mpf(q) / 2 + 1) * mp.hyp1f1(
            mp.mpf(q) / 2 + 1, q + 1, r * r
        ) / mp.factorial(q)
        assert c[q - 1] == pytest.approx(float(ref), rel=1e-11)


def test_time_coefficient_forms_agree():
    for r in (0.3, 2.0, 8.0):
        np.testing.assert_allclose(
            sy.time_coefficients(r, 12), sy.time_coefficients_hypergeometric(r, 12), atol=1e-11, rtol=1e-10
        )


def test_angle_symbol_three_routes():
    r, th = 1.0, 1.3
    series = float(sy.angle_symbol_series(r, th))
    matrix = sy.lower_symbol(build_angle_operator(80), r * np.exp(1j * th)).real
    integral = sy.angle_symbol_integral(r, th)
    oracle = sy.gaussian_convolution_oracle(lambda z: np.mod(np.angle(z), 2 * np.pi), r * np.exp(1j * th), quad="polar").real
    for v in (matrix, integral, oracle):
        assert v == pytest.approx(series, abs=1e-9)


def test_angle_symbol_large_r():
    assert float(sy.angle_symbol_series(5.0, 2.0)) == pytest.approx(2.0, abs=1e-10)
    assert sy.lower_symbol(build_angle_operator(120), 5 * np.exp(2j)).real == pytest.approx(2.0, abs=1e-10)


def test_time_symbol_routes_and_sign():
    r, th = 2.0, 0.8
    series = float(sy.time_symbol_series(r, th))
    cot_op = quantize_angular(cot_fourier_coeffs(119), 120)
    assert sy.lower_symbol(cot_op, r * np.exp(1j * th)).real == pytest.approx(series, abs=1e-9)
    assert sy.lower_symbol(build_time_operator(120), r * np.exp(1j * th)).real == pytest.approx(-series, abs=1e-9)
    assert float(sy.time_symbol_series(8.0, 1.0)) == pytest.approx(1 / math.tan(1.0), abs=0.05)


def test_commutator_symbols_match_matrices():
    z = 1.1 * np.exp(0.6j)
    c = time_commutator(90, 4)
    assert sy.lower_symbol(c, z) == pytest.approx(complex(sy.commutator_symbol_series("time_hamiltonian", 1.1, 0.6)), abs=1e-9)
    an = angle_number_commutator(90)
    assert sy.lower_symbol(an, z) == pytest.approx(complex(sy.commutator_symbol_series("angle_number", 1.1, 0.6)), abs=1e-9)


def test_commutator_symbol_origin():
    assert complex(sy.commutator_symbol_series("time_hamiltonian", 1e-8, 0.3)) == pytest.approx(-0.5j, abs=1e-12)
    with pytest.raises(DomainError):
        sy.commutator_symbol_series("other", 1.0, 0.0)


def test_cesaro_symbol_large_r():
    assert sy.cesaro_commutator_symbol(40.0, math.pi) == pytest.approx(-1j, abs=2e-3)


def test_free_hamiltonian_symbol_exact():
    op = build_free_hamiltonian(120)
    g = sy.lower_symbol_grid(op, [0.5, 2.0], [0.3, 1.9])
    expected = (np.outer([0.5, 2.0], np.sin([0.3, 1.9]))) ** 2
    np.testing.assert_allclose(g.values, expected, atol=1e-10)


def test_oracle_agreement_smooth():
    f = lambda z: np.exp(-np.abs(z - 0.5) ** 2) * np.cos(z.real)
    op = quantize_general(f, 60)
    for z in (0.2 + 0.1j, -1.0 + 0.7j):
        assert sy.lower_symbol(op, z) == pytest.approx(sy.gaussian_convolution_oracle(f, z), abs=1e-10)


def test_smoothness_probe_derivatives():
    fd = sy.smoothness_probe(lambda r, t: sy.angle_symbol_series(r, t), 1.0, math.pi, 1)
    termwise = sy.series_theta_derivative("angle", 1.0, math.pi, 1)
    assert fd == pytest.approx(termwise, abs=1e-9)
    op = build_time_operator(100)
    fd_r = sy.smoothness_probe(lambda r, t: sy.time_symbol_series(r, t), 2.0, 1.0, 2, variable="r")
    mat = sy.lower_symbol_derivative(op, 2.0, 1.0, k_r=2).real
    assert fd_r == pytest.approx(-mat, abs=1e-7)


def test_lower_symbol_derivative_theta():
    op = build_angle_operator(80)
    got = sy.lower_symbol_derivative(op, 1.0, math.pi, k_theta=1).real
    assert got == pytest.approx(sy.series_theta_derivative("angle", 1.0, math.pi, 1), abs=1e-10)


def test_symbol_grid_csv():
    g = sy.SymbolGrid([1.0], [0.0, 0.5], np.array([[1.0, 2.0 + 1e-3j]]), source="x")
    text = g.to_csv("header")
    assert text.startswith("# header\nr,theta,value,imag\n")
    with pytest.raises(DomainError):
        sy.SymbolGrid([1.0, 2.0], [0.0], np.zeros((1, 1)))


def test_angle_number_symbol_small_r():
    for r in (0.05, 0.01):
        for th in (0.3, 2.0):
            v = complex(sy.commutator_symbol_series("angle_number", r, th))
            assert v.real == 0.0
            assert abs(v.imag - math.sqrt(math.pi) * r * math.cos(th)) < r * r


def test_time_hamiltonian_coefficients_large_r():
    # c_q ~ q / r^2 for r >> q
    q = np.arange(1, 7)
    ratios = [sy.time_hamiltonian_coefficients(r, 6) * r**2 / q for r in (10.0, 20.0, 40.0)]
    errs = [np.max(np.abs(x - 1.0)) for x in ratios]
    assert errs[0] > errs[1] > errs[2] and errs[2] < 0.025
    # the q = 1 coefficient is exactly 1/r^2 once e^{-r^2} is negligible
    assert ratios[0][0] == pytest.approx(1.0, abs=1e-12)
