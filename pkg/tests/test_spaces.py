import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from entropic_ur.errors import InvalidStateError
from entropic_ur.scenarios import oscillator_hamiltonian
from entropic_ur.spaces import (DensityMatrix, WeightedSpace, basis_state, density_masses,
                                make_gibbs, maximally_mixed, pure_state, random_density,
                                random_hermitian, tensor_state, von_neumann_entropy)

from conftest import random_unitary


def test_weighted_space_validation():
    with pytest.raises(ValueError):
        WeightedSpace((0, 1), [1.0, 0.0])
    with pytest.raises(ValueError):
        WeightedSpace((0, 1), [1.0, np.inf])
    with pytest.raises(ValueError):
        WeightedSpace((0, 1, 2), [1.0, 1.0])
    assert WeightedSpace.counting(3).dim == 3
    assert WeightedSpace.counting(3).is_counting
    assert not WeightedSpace.grid([0.0, 0.5], 0.5).is_counting


def test_masses_pure_basis_state():
    p, rho = density_masses(basis_state(0, WeightedSpace.counting(3)))
    np.testing.assert_array_equal(p, [1, 0, 0])
    np.testing.assert_array_equal(rho, [1, 0, 0])


def test_masses_maximally_mixed_counting():
    p, rho = density_masses(maximally_mixed(WeightedSpace.counting(4)))
    np.testing.assert_allclose(p, 0.25)
    np.testing.assert_allclose(rho, 0.25)


def test_masses_on_half_weight_grid():
    sp = WeightedSpace.grid([0, 0.5, 1.0, 1.5], 0.5)
    p, rho = density_masses(maximally_mixed(sp))
    np.testing.assert_allclose(p, 0.25)
    np.testing.assert_allclose(rho, 0.5)


def test_entropy_pure_and_uniform():
    assert von_neumann_entropy(pure_state([1, 1j])) == pytest.approx(0, abs=1e-12)
    for n in (1, 2, 5, 9):
        assert von_neumann_entropy(maximally_mixed(WeightedSpace.counting(n))) == pytest.approx(math.log(n))


def test_entropy_two_thirds():
    # -(2/3 ln 2/3 + 1/3 ln 1/3) evaluated directly
    gamma = DensityMatrix(WeightedSpace.counting(2), np.diag([2 / 3, 1 / 3]))
    assert von_neumann_entropy(gamma) == pytest.approx(0.6365141682948128, abs=1e-14)


def test_pure_state_of_complex_vector():
    g = pure_state(np.array([1, 1j]) / math.sqrt(2))
    assert np.trace(g.matrix).real == pytest.approx(1.0)
    assert von_neumann_entropy(g) == pytest.approx(0.0, abs=1e-12)


def test_pure_state_rejects_zero():
    with pytest.raises(InvalidStateError):
        pure_state([0, 0])


def test_gibbs_two_level():
    g = make_gibbs(np.diag([0.0, math.log(2)]), 1.0)
    np.testing.assert_allclose(g.matrix, np.diag([2 / 3, 1 / 3]), atol=1e-15)


def test_gibbs_high_temperature_limit():
    H = random_hermitian(5, seed=1)
    g = make_gibbs(H, 1e-8)
    np.testing.assert_allclose(g.matrix, np.eye(5) / 5, atol=1e-6)


def test_gibbs_handles_huge_energies():
    g = make_gibbs(np.diag([0.0, 1e5, 2e5]), 10.0)
    np.testing.assert_allclose(g.eigenvalues, [0, 0, 1], atol=1e-300)


def test_gibbs_rejects_nonpositive_beta():
    with pytest.raises(ValueError):
        make_gibbs(np.eye(2), 0.0)


def test_gibbs_oscillator_is_valid_state():
    H = oscillator_hamiltonian(20.0, 64)
    sp = WeightedSpace.grid(np.arange(64), 20.0 / 64)
    g = make_gibbs(H, 1.0, sp)
    assert abs(np.trace(g.matrix).real - 1) < 1e-10
    assert g.spectrum.eigenvalues.min() >= -1e-10


def test_tensor_of_scalars():
    a = maximally_mixed(WeightedSpace.counting(2))
    b = maximally_mixed(WeightedSpace.counting(3))
    t = tensor_state(a, b)
    assert t.dim == 6
    np.testing.assert_allclose(t.matrix, np.eye(6) / 6, atol=1e-15)


def test_tensor_weights_multiply():
    a = maximally_mixed(WeightedSpace.grid([0, 1], 0.5))
    b = maximally_mixed(WeightedSpace.grid([0, 1, 2], 3.0))
    np.testing.assert_allclose(tensor_state(a, b).space.weights, 1.5)


def test_random_density_rank():
    g = random_density(8, 3, seed=42)
    lam = g.eigenvalues
    assert np.sum(lam > 1e-12) == 3
    assert abs(lam.sum() - 1) < 1e-12


def test_random_density_reproducible():
    a = random_density(6, 2, seed=11)
    b = random_density(6, 2, seed=11)
    assert np.array_equal(a.matrix, b.matrix)


def test_random_density_rank_out_of_range():
    with pytest.raises(InvalidStateError):
        random_density(4, 5, seed=0)
    with pytest.raises(InvalidStateError):
        random_density(4, 0, seed=0)


def test_psd_repair_and_rejection():
    sp = WeightedSpace.counting(2)
    g = DensityMatrix(sp, np.diag([1 + 5e-11, -5e-11]))
    assert g.eigenvalues.min() == 0.0
    assert abs(np.trace(g.matrix).real - 1) < 1e-15
    with pytest.raises(InvalidStateError):
        DensityMatrix(sp, np.diag([1.1, -0.1]))
    with pytest.raises(InvalidStateError):
        DensityMatrix(sp, np.diag([0.5, 0.4]))


seeds = st.integers(0, 2**32 - 1)


@settings(max_examples=30, deadline=None)
@given(seeds, st.integers(1, 9), st.data())
def test_masses_sum_to_one_and_match_spectrum(seed, n, data):
    rank = data.draw(st.integers(1, n))
    w = np.random.default_rng(seed).uniform(0.1, 3.0, n)
    g = random_density(n, rank, seed, WeightedSpace(tuple(range(n)), w))
    p, rho = density_masses(g)
    assert abs(p.sum() - 1) <= 1e-10
    np.testing.assert_allclose(rho * w, p)
    # sum_j lambda_j |f_j(x_i)|^2 mu_i with f_j = v_j / sqrt(mu)
    V = g.spectrum.eigenvectors
    f = V / np.sqrt(w)[:, None]
    mix = (np.abs(f) ** 2 @ g.eigenvalues) * w
    np.testing.assert_allclose(mix, p, atol=1e-9)


@settings(max_examples=30, deadline=None)
@given(seeds, st.integers(1, 4), st.integers(1, 4))
def test_entropy_additive_under_tensor(seed, n, m):
    a = random_density(n, None, seed)
    b = random_density(m, None, seed + 1)
    S = von_neumann_entropy(tensor_state(a, b))
    assert S == pytest.approx(von_neumann_entropy(a) + von_neumann_entropy(b), abs=1e-9)


@settings(max_examples=30, deadline=None)
@given(seeds, st.integers(1, 10))
def test_entropy_unitarily_invariant(seed, n):
    g = random_density(n, None, seed)
    U = random_unitary(n, np.random.default_rng(seed + 7))
    assert von_neumann_entropy(g.conjugate(U)) == pytest.approx(von_neumann_entropy(g), abs=1e-9)
    assert 0 <= von_neumann_entropy(g) <= math.log(n) + 1e-12
