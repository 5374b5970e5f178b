import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from csquant import linalg
from conftest import random_hermitian


def test_as_matrix_rejects_non_square():
    with pytest.raises(ValueError):
        linalg.as_matrix(np.zeros((2, 3)))


def test_commutator_of_pauli():
    sx = np.array([[0, 1], [1, 0]], dtype=complex)
    sy = np.array([[0, -1j], [1j, 0]])
    sz = np.diag([1.0, -1.0]).astype(complex)
    np.testing.assert_allclose(linalg.commutator(sx, sy), 2j * sz)


def test_is_hermitian():
    assert linalg.is_hermitian(np.array([[1, 2j], [-2j, 3]]))
    assert not linalg.is_hermitian(np.array([[1, 2j], [2j, 3]]))


def test_trivial_diagonal_spectrum():
    a = np.diag([3.0, -1.0, 2.0])
    rep = linalg.hermitian_eigen(a)
    np.testing.assert_array_equal(rep.eigenvalues, [-1.0, 2.0, 3.0])
    rep_j = linalg.hermitian_eigen(a, method="jacobi")
    np.testing.assert_allclose(rep_j.eigenvalues, [-1.0, 2.0, 3.0], atol=1e-15)


def test_jacobi_against_lapack(rng):
    a = random_hermitian(rng, 40)
    lap = linalg.hermitian_eigen(a)
    jac = linalg.hermitian_eigen(a, method="jacobi")
    np.testing.assert_allclose(jac.eigenvalues, lap.eigenvalues, atol=1e-11)
    assert jac.residual < 1e-11 and lap.residual < 1e-11
    # eigenvectors unitary
    v = jac.eigenvectors
    np.testing.assert_allclose(v.conj().T @ v, np.eye(40), atol=1e-12)


def test_jacobi_closed_form_tridiagonal():
    # Toeplitz tridiagonal: 2 - 2 cos(k pi / (n + 1))
    n = 25
    a = 2 * np.eye(n) - np.eye(n, k=1) - np.eye(n, k=-1)
    exact = 2 - 2 * np.cos(np.arange(1, n + 1) * np.pi / (n + 1))
    np.testing.assert_allclose(linalg.hermitian_eigen(a, method="jacobi").eigenvalues, np.sort(exact), atol=1e-13)


def test_anti_hermitian_eigen(rng):
    h = random_hermitian(rng, 12)
    w = linalg.hermitian_eigen(h).eigenvalues
    got = linalg.anti_hermitian_eigen(1j * h).eigenvalues
    np.testing.assert_allclose(np.sort(got), np.sort(w), atol=1e-12)


def test_spectral_norm_routes(rng):
    h = random_hermitian(rng, 15)
    ref = np.linalg.norm(h, 2)
    assert linalg.spectral_norm(h) == pytest.approx(ref, rel=1e-12)
    assert linalg.spectral_norm(1j * h) == pytest.approx(ref, rel=1e-12)
    g = rng.normal(size=(9, 9)) + 1j * rng.normal(size=(9, 9))
    assert linalg.spectral_norm(g) == pytest.approx(np.linalg.norm(g, 2), rel=1e-10)


def test_hermitian_eigen_rejects_non_hermitian():
    with pytest.raises(ValueError):
        linalg.hermitian_eigen(np.array([[0, 1], [0, 0]], dtype=complex))


@given(st.integers(2, 12), st.integers(0, 2**31 - 1))
def test_eigen_reconstruction_property(n, seed):
    a = random_hermitian(np.random.default_rng(seed), n)
    rep = linalg.hermitian_eigen(a, method="jacobi")
    v = rep.eigenvectors
    np.testing.assert_allclose(v @ np.diag(rep.eigenvalues) @ v.conj().T, a, atol=1e-11)
    assert np.all(np.diff(rep.eigenvalues) >= 0)
