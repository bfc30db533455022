import numpy as np
import pytest
import scipy.linalg as sl
from hypothesis import given, settings, strategies as st

from entropic_ur import numkernel as nk
from entropic_ur.errors import DomainError, NotHermitianError, NotSquareError

from conftest import random_hermitian, random_unitary

METHODS = ["lapack", "jacobi"]


@pytest.mark.parametrize("method", METHODS)
def test_diagonal_input(method):
    dec = nk.herm_eig(np.diag([3.0, 1.0]), method)
    np.testing.assert_allclose(dec.eigenvalues, [1.0, 3.0], atol=1e-15)


@pytest.mark.parametrize("method", METHODS)
def test_pauli_x(method):
    dec = nk.herm_eig([[0, 1], [1, 0]], method)
    np.testing.assert_allclose(dec.eigenvalues, [-1.0, 1.0], atol=1e-14)
    v = dec.eigenvectors
    # eigenvectors (1, -1)/sqrt2 and (1, 1)/sqrt2 up to phase
    assert abs(abs(np.vdot(v[:, 0], [1, -1])) / np.sqrt(2) - 1) < 1e-12
    assert abs(abs(np.vdot(v[:, 1], [1, 1])) / np.sqrt(2) - 1) < 1e-12


@pytest.mark.parametrize("method", METHODS)
def test_random_reconstruction_dim16(method):
    M = random_hermitian(16, np.random.default_rng(16))
    dec = nk.herm_eig(M, method)
    V, w = dec.eigenvectors, dec.eigenvalues
    rebuilt = (V * w) @ V.conj().T
    assert np.linalg.norm(M - rebuilt) <= 1e-10 * (1 + np.linalg.norm(M))
    assert np.linalg.norm(V.conj().T @ V - np.eye(16)) <= 1e-10
    assert np.all(np.diff(w) >= 0)


def test_jacobi_matches_lapack():
    rng = np.random.default_rng(5)
    for n in (1, 2, 3, 7, 24):
        M = random_hermitian(n, rng)
        a = nk.herm_eig(M, "jacobi").eigenvalues
        b = np.linalg.eigvalsh(M)
        np.testing.assert_allclose(a, b, atol=1e-11 * (1 + np.abs(b).max()))


def test_jacobi_degenerate_spectrum():
    U = random_unitary(6, np.random.default_rng(2))
    M = U @ np.diag([1, 1, 1, 2, 2, 5.0]) @ U.conj().T
    dec = nk.herm_eig(M, "jacobi")
    np.testing.assert_allclose(dec.eigenvalues, [1, 1, 1, 2, 2, 5], atol=1e-12)
    assert np.linalg.norm(dec.reconstruct() - M) < 1e-11


def test_deterministic():
    M = random_hermitian(10, np.random.default_rng(1))
    for method in METHODS:
        a, b = nk.herm_eig(M, method), nk.herm_eig(M, method)
        assert np.array_equal(a.eigenvalues, b.eigenvalues)
        assert np.array_equal(a.eigenvectors, b.eigenvectors)


def test_rejects_non_square_and_non_hermitian():
    with pytest.raises(NotSquareError):
        nk.herm_eig(np.ones((2, 3)))
    with pytest.raises(NotHermitianError) as exc:
        nk.herm_eig([[0, 1], [0, 0]])
    assert exc.value.residual == pytest.approx(1.0)


def test_small_asymmetry_is_symmetrised():
    M = np.array([[1.0, 2.0 + 1e-11], [2.0, 3.0]])
    np.testing.assert_allclose(nk.herm_eig(M).eigenvalues, np.linalg.eigvalsh((M + M.T) / 2))


def test_exp_of_zero_is_identity():
    np.testing.assert_allclose(nk.expm_h(np.zeros((3, 3))), np.eye(3), atol=1e-15)


def test_log_of_diagonal():
    np.testing.assert_allclose(nk.logm_h(np.diag([1.0, np.e])), np.diag([0.0, 1.0]), atol=1e-15)


@pytest.mark.parametrize("method", METHODS)
def test_exp_log_roundtrip(method):
    rng = np.random.default_rng(8)
    X = rng.standard_normal((8, 8)) + 1j * rng.standard_normal((8, 8))
    P = X @ X.conj().T + 0.1 * np.eye(8)
    back = nk.expm_h(nk.logm_h(P, method), method)
    assert np.max(np.abs(back - P)) < 1e-10


def test_matrix_function_agrees_with_scipy():
    M = random_hermitian(6, np.random.default_rng(3))
    np.testing.assert_allclose(nk.expm_h(M), sl.expm(M), atol=1e-11)


def test_domain_guard_names_eigenvalue():
    with pytest.raises(DomainError) as exc:
        nk.logm_h(np.diag([1.0, -2.0]))
    assert exc.value.value == -2.0
    with pytest.raises(DomainError):
        nk.sqrtm_h(np.diag([-1e-3, 1.0]))


def test_residuals_identity():
    r = nk.residuals(np.eye(4))
    assert r == {"hermiticity": 0.0, "unitarity": 0.0, "trace": 4 + 0j}


def test_residuals_i_identity():
    r = nk.residuals(1j * np.eye(2))
    assert r["hermiticity"] == 2.0
    assert r["unitarity"] == 0.0
    assert r["trace"] == 2j


def test_dft_unitarity():
    assert nk.residuals(nk.dft_matrix(8))["unitarity"] < 1e-12


def test_log_trace_exp_no_overflow():
    assert nk.log_trace_exp(np.diag([1000.0, 1000.0])) == pytest.approx(1000 + np.log(2))


seeds = st.integers(0, 2**32 - 1)
dims = st.integers(1, 12)


@settings(max_examples=40, deadline=None)
@given(seeds, dims)
def test_eigenvalue_sum_is_trace(seed, n):
    M = random_hermitian(n, np.random.default_rng(seed))
    w = nk.herm_eig(M).eigenvalues
    tr = np.trace(M).real
    assert abs(w.sum() - tr) <= 1e-10 * (1 + abs(tr) + np.abs(w).sum())


@settings(max_examples=40, deadline=None)
@given(seeds, dims)
def test_function_commutes_with_unitary_conjugation(seed, n):
    rng = np.random.default_rng(seed)
    M = random_hermitian(n, rng)
    U = random_unitary(n, rng)
    lhs = nk.expm_h(U @ M @ U.conj().T)
    rhs = U @ nk.expm_h(M) @ U.conj().T
    assert np.max(np.abs(lhs - rhs)) <= 1e-9 * (1 + np.max(np.abs(rhs)))


@settings(max_examples=40, deadline=None)
@given(seeds, dims)
def test_spectrum_of_function(seed, n):
    M = random_hermitian(n, np.random.default_rng(seed))
    w = nk.herm_eig(M).eigenvalues
    fw = nk.herm_eig(nk.matrix_function(M, np.tanh)).eigenvalues
    np.testing.assert_allclose(np.sort(np.tanh(w)), fw, atol=1e-9)
