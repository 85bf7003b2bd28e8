import math

import numpy as np
import pytest
import scipy.linalg
from hypothesis import given, strategies as st

from gurlab.errors import DimensionError, EigenvalueOnBranchCut, InvalidState, NotDiagonalizable, NotHermitian
from gurlab.qmat import (
    density_state,
    expectation,
    haar_state,
    mat_exp,
    mat_log_principal,
    observable,
    pure_state,
    random_hermitian,
    tensor,
)
from gurlab.scenarios import I2, SIGMA_X, SIGMA_Y, SIGMA_Z, psi1

seeds = st.integers(0, 2**32 - 1)


def test_expectation_eigenstate(up):
    assert expectation(up, SIGMA_Z) == pytest.approx(1 + 0j, abs=1e-15)


def test_expectation_psi1_sigma_x():
    assert expectation(psi1(math.pi / 2, math.pi), SIGMA_X) == pytest.approx(-1 + 0j, abs=1e-12)


def test_expectation_maximally_mixed():
    assert expectation(density_state(I2 / 2), SIGMA_X) == pytest.approx(0j, abs=1e-15)


def test_expectation_dimension_mismatch(up):
    with pytest.raises(DimensionError):
        expectation(up, np.eye(3))


@given(seeds)
def test_expectation_linear(seed):
    rng = np.random.default_rng(seed)
    d = int(rng.integers(2, 5))
    psi = haar_state(rng, d)
    a, b = random_hermitian(rng, d), random_hermitian(rng, d)
    al, be = complex(*rng.normal(size=2)), complex(*rng.normal(size=2))
    lhs = expectation(psi, al * a + be * b)
    rhs = al * expectation(psi, a) + be * expectation(psi, b)
    assert abs(lhs - rhs) <= 1e-12 * max(1.0, abs(lhs))


def test_hermitian_expectation_real(rng):
    psi = haar_state(rng, 4)
    h = random_hermitian(rng, 4)
    assert abs(expectation(psi, h).imag) <= 1e-12 * np.linalg.norm(h, 2)


def test_mat_exp_zero_is_identity():
    assert np.array_equal(mat_exp(np.zeros((3, 3))), np.eye(3))


def test_mat_exp_i_pi_sigma_x():
    assert np.allclose(mat_exp(1j * math.pi * SIGMA_X), -np.eye(2), atol=1e-10)


def test_mat_exp_diagonal():
    assert np.allclose(mat_exp(SIGMA_Z), np.diag([math.e, 1 / math.e]), atol=1e-14)


@given(seeds)
def test_mat_exp_of_i_hermitian_is_unitary(seed):
    rng = np.random.default_rng(seed)
    h = random_hermitian(rng, int(rng.integers(2, 5)))
    u = mat_exp(1j * h)
    assert np.linalg.norm(u @ u.conj().T - np.eye(len(u))) <= 1e-10


@given(seeds)
def test_mat_exp_general_matches_scipy(seed):
    rng = np.random.default_rng(seed)
    d = int(rng.integers(2, 5))
    m = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    m *= rng.uniform(0.1, 5.0) / np.linalg.norm(m, 2)
    e = mat_exp(m)
    ref = scipy.linalg.expm(m)
    assert np.linalg.norm(e - ref) <= 1e-10 * np.linalg.norm(ref)
    assert np.linalg.norm(e @ mat_exp(-m) - np.eye(d)) <= 1e-10


def test_mat_log_identity():
    assert np.allclose(mat_log_principal(np.eye(3)), 0, atol=1e-15)


def test_mat_log_round_trip_sigma_x():
    assert np.allclose(mat_log_principal(mat_exp(0.3 * SIGMA_X)), 0.3 * SIGMA_X, atol=1e-10)


def test_mat_log_bch_leading_terms():
    z = mat_log_principal(mat_exp(0.1 * SIGMA_X) @ mat_exp(0.1 * SIGMA_Y))
    approx = 0.1 * SIGMA_X + 0.1 * SIGMA_Y + 0.01j * SIGMA_Z
    assert np.linalg.norm(z - approx) < 2e-3


@given(seeds)
def test_mat_log_inverts_exp(seed):
    rng = np.random.default_rng(seed)
    d = int(rng.integers(2, 5))
    m = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    m *= rng.uniform(0.05, 0.99) / np.linalg.norm(m, 2)
    l = mat_log_principal(mat_exp(m))
    assert np.linalg.norm(l - m) <= 1e-8
    assert np.linalg.norm(l - scipy.linalg.logm(mat_exp(m))) <= 1e-8


def test_mat_log_branch_cut():
    with pytest.raises(EigenvalueOnBranchCut):
        mat_log_principal(-np.eye(2))
    with pytest.raises(EigenvalueOnBranchCut):
        mat_log_principal(np.diag([1.0, 0.0]))


def test_mat_log_not_diagonalizable():
    with pytest.raises(NotDiagonalizable):
        mat_log_principal(np.array([[1.0, 1.0], [0.0, 1.0]]))


def test_tensor_examples():
    assert np.array_equal(tensor(I2, I2), np.eye(4))
    assert np.array_equal(tensor(SIGMA_Z, SIGMA_Z), np.diag([1, -1, -1, 1]).astype(complex))
    xy = tensor(SIGMA_X, SIGMA_Y)
    for i, j, k, l in np.ndindex(2, 2, 2, 2):
        assert xy[2 * i + k, 2 * j + l] == SIGMA_X[i, j] * SIGMA_Y[k, l]


@given(seeds)
def test_tensor_associative(seed):
    # Gaussian-integer entries keep every product exact in floating point
    rng = np.random.default_rng(seed)

    def gi(d):
        return rng.integers(-9, 10, size=(d, d)) + 1j * rng.integers(-9, 10, size=(d, d))

    a, b, c = gi(2), gi(3), gi(2)
    assert np.array_equal(tensor(tensor(a, b), c), tensor(a, tensor(b, c)))


def test_observable_validation():
    with pytest.raises(NotHermitian):
        observable(np.array([[0, 1], [0, 0]]))
    with pytest.raises(Exception):
        observable(np.array([[np.nan, 0], [0, 0]]))
    x = observable(SIGMA_X)
    assert x.sigma_max == pytest.approx(1.0, abs=1e-12)
    assert np.allclose(sorted(x.eigenvalues), [-1, 1])


def test_state_validation():
    with pytest.raises(InvalidState):
        pure_state([1, 1])
    with pytest.raises(InvalidState):
        density_state(np.diag([1.5, -0.5]))
    with pytest.raises(InvalidState):
        density_state(np.eye(2))
