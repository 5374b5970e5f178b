import math
import warnings

import numpy as np
import pytest
from scipy import special

from csquant import fock
from csquant.errors import DomainError, TruncationError


def test_ladder_operators():
    a = fock.lowering(6).matrix
    np.testing.assert_allclose(np.diag(a, 1), np.sqrt(np.arange(1, 6)))
    np.testing.assert_allclose(fock.raising(6).matrix, a.conj().T)
    np.testing.assert_allclose((fock.raising(6) @ fock.lowering(6)).matrix, fock.number_operator(6).matrix)


def test_canonical_commutator_interior():
    q, p = fock.position_momentum(12)
    c = q.commutator(p).matrix
    np.testing.assert_allclose(c[:11, :11], 1j * np.eye(11), atol=1e-14)
    # the last diagonal entry carries the truncation artifact -i (N-1)
    assert c[11, 11] == pytest.approx(-11j)


def test_operator_is_immutable():
    op = fock.identity(3)
    with pytest.raises(ValueError):
        op.matrix[0, 0] = 2.0


def test_hermitian_flag_validated():
    with pytest.raises(DomainError):
        fock.FockOperator(np.array([[0, 1], [0, 0]]), hermitian=True)


def test_arithmetic_and_crop():
    n = fock.number_operator(5)
    i = fock.identity(5)
    np.testing.assert_allclose((2 * n + i - n).matrix, np.diag(np.arange(1, 6)))
    assert n.crop(3).order == 3
    with pytest.raises(TruncationError):
        n.crop(6)


def test_projector():
    p = fock.projector(2, 1, 4).matrix
    assert p[2, 1] == 1 and np.count_nonzero(p) == 1


@pytest.mark.parametrize("z", [0.0, 0.7 - 0.2j, 3.0 + 4.0j])
def test_coherent_vector(z):
    v = fock.coherent_vector(z, 120)
    assert v.norm2 == pytest.approx(1.0, abs=1e-13)
    # eigenvector of the lowering operator away from the cut
    av = fock.lowering(120).matrix @ v.amplitudes
    np.testing.assert_allclose(av[:100], z * v.amplitudes[:100], atol=1e-12)


def test_coherent_vector_loss_warning():
    with pytest.warns(fock.TruncationWarning):
        v = fock.coherent_vector(5.0, 20)
    assert v.loss == pytest.approx(special.gammainc(20, 25.0), rel=1e-12)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        fock.coherent_vector(5.0, 20, warn=False)


def test_coherent_vector_large_amplitude_no_overflow():
    v = fock.coherent_vector(20.0, 700)
    assert np.all(np.isfinite(v.amplitudes))
    assert v.norm2 == pytest.approx(1.0, abs=1e-12)


def test_disk_resolution_oracle():
    radius = 2.0
    got = fock.disk_resolution(10, radius)
    exact = special.gammainc(np.arange(1, 11), radius**2)
    np.testing.assert_allclose(np.diag(got).real, exact, atol=1e-12)
    off = got - np.diag(np.diag(got))
    assert np.max(np.abs(off)) < 1e-12


def test_padded_commutator_matches_closed_form():
    pol = fock.TruncationPolicy(10, 2)
    c = fock.padded_commutator(fock.lowering, fock.raising, pol)
    np.testing.assert_allclose(c.matrix, np.eye(10), atol=1e-14)


def test_truncation_policy():
    assert fock.TruncationPolicy.for_bandwidth(10, 2).compute_order == 14
    with pytest.raises(DomainError):
        fock.TruncationPolicy(0)
