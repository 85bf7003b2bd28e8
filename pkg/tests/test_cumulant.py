import math

import numpy as np
import pytest
from hypothesis import assume, given, strategies as st

from gurlab.cumulant import (
    anticommutator3,
    cgf,
    cgf_series,
    convergence_radius,
    cross_cumulants,
    cumulant_table,
    cumulants_single,
    linearization_defect,
    moment,
)
from gurlab.errors import NonCommuting, OutOfConvergenceRegion, ZeroObservable
from gurlab.qmat import haar_state, pure_state, random_hermitian, tensor
from gurlab.scenarios import I2, SIGMA_X, SIGMA_Y, SIGMA_Z, angular_momenta_L1, psi2, psi3

seeds = st.integers(0, 2**32 - 1)


def test_moment_examples(up):
    assert moment(up, SIGMA_Z, 3) == pytest.approx(1.0)
    assert moment(up, SIGMA_X, 2) == pytest.approx(1.0)
    lx = angular_momenta_L1()[0]
    assert moment(psi2(), lx, 1) == pytest.approx(2 * math.sqrt(2) / 3, abs=1e-12)


def test_cumulants_examples(up):
    assert np.allclose(cumulants_single(up, SIGMA_Z), (1, 0, 0, 0), atol=1e-14)
    assert np.allclose(cumulants_single(up, SIGMA_X), (0, 1, 0, -2), atol=1e-14)
    assert np.allclose(cumulants_single(psi3(), np.eye(4)), (1, 0, 0, 0), atol=1e-14)


def _sample_cumulants(values, probs):
    """Cumulants of a discrete distribution from the log-MGF Taylor coefficients (numpy polynomial oracle)."""
    mean = probs @ values
    c = values - mean
    m2, m3, m4 = (probs @ c**k for k in (2, 3, 4))
    return mean, m2, m3, m4 - 3 * m2**2


@given(seeds)
def test_cumulants_match_spectral_distribution(seed):
    # a Hermitian X in state psi is a random variable with values eig(X), probs |<v_i|psi>|^2
    rng = np.random.default_rng(seed)
    d = int(rng.integers(2, 5))
    psi = haar_state(rng, d)
    x = random_hermitian(rng, d)
    w, v = np.linalg.eigh(x)
    probs = np.abs(v.conj().T @ psi.vector) ** 2
    assert np.allclose(cumulants_single(psi, x), _sample_cumulants(w, probs), atol=1e-10)


@given(seeds, st.floats(-2, 2))
def test_shift_covariance(seed, c):
    rng = np.random.default_rng(seed)
    psi = haar_state(rng, 3)
    x = random_hermitian(rng, 3)
    k = cumulants_single(psi, x)
    ks = cumulants_single(psi, x + c * np.eye(3))
    assert ks[0] == pytest.approx(k[0] + c, abs=1e-10)
    assert np.allclose(ks[1:], k[1:], atol=1e-10)


@given(seeds, st.floats(-3, 3))
def test_homogeneity(seed, s):
    rng = np.random.default_rng(seed)
    psi = haar_state(rng, 3)
    x = random_hermitian(rng, 3)
    k = cumulants_single(psi, x)
    ks = cumulants_single(psi, s * x)
    for n in range(4):
        assert ks[n] == pytest.approx(s ** (n + 1) * k[n], rel=1e-10, abs=1e-10)


def test_cross_cumulant_examples(rng, up):
    psi = haar_state(rng, 2)
    k11, _, _ = cross_cumulants(psi, SIGMA_X, SIGMA_Y)
    from gurlab.qmat import expectation

    assert k11 == pytest.approx(-expectation(psi, SIGMA_X).real * expectation(psi, SIGMA_Y).real, abs=1e-12)
    prod = pure_state(np.kron(haar_state(rng, 2).vector, haar_state(rng, 2).vector))
    assert np.allclose(cross_cumulants(prod, tensor(SIGMA_X, I2), tensor(I2, SIGMA_Y)), 0, atol=1e-10)
    assert cross_cumulants(up, SIGMA_X, SIGMA_X)[0] == pytest.approx(1.0)


@given(seeds)
def test_k11_symmetric_and_reduces_to_variance(seed):
    rng = np.random.default_rng(seed)
    psi = haar_state(rng, 3)
    x, y = random_hermitian(rng, 3), random_hermitian(rng, 3)
    k11, k12, k21 = cross_cumulants(psi, x, y)
    l11, l12, l21 = cross_cumulants(psi, y, x)
    assert k11 == l11
    assert k12 == pytest.approx(l21, abs=1e-12) and k21 == pytest.approx(l12, abs=1e-12)
    assert cross_cumulants(psi, x, x)[0] == pytest.approx(cumulants_single(psi, x)[1], abs=1e-12)


@given(seeds)
def test_cross_cumulants_from_cgf_for_commuting(seed):
    # for commuting X, Y the cross cumulants are mixed derivatives of log<exp(sX+tY)>
    rng = np.random.default_rng(seed)
    q, _ = np.linalg.qr(rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3)))
    x = q @ np.diag(rng.normal(size=3)) @ q.conj().T
    y = q @ np.diag(rng.normal(size=3)) @ q.conj().T
    psi = haar_state(rng, 3)
    probs = np.abs(q.conj().T @ psi.vector) ** 2
    a, b = np.diag(q.conj().T @ x @ q).real, np.diag(q.conj().T @ y @ q).real
    ca, cb = a - probs @ a, b - probs @ b
    k11, k12, k21 = cross_cumulants(psi, x, y)
    assert k11 == pytest.approx(probs @ (ca * cb), abs=1e-10)
    assert k12 == pytest.approx(probs @ (ca * cb * cb), abs=1e-10)
    assert k21 == pytest.approx(probs @ (ca * ca * cb), abs=1e-10)


def test_anticommutator3():
    x, y = SIGMA_X, SIGMA_Z
    assert np.allclose(anticommutator3(x, y), x @ y @ y + y @ x @ y + y @ y @ x)


def test_product_state_cross_cumulants_vanish(rng):
    for _ in range(20):
        prod = pure_state(np.kron(haar_state(rng, 2).vector, haar_state(rng, 3).vector))
        x = tensor(random_hermitian(rng, 2), np.eye(3))
        y = tensor(np.eye(2), random_hermitian(rng, 3))
        assert np.allclose(cross_cumulants(prod, x, y), 0, atol=1e-10)


def test_cumulant_table(up):
    t = cumulant_table(up, SIGMA_X, SIGMA_Y)
    assert (t.k1, t.k2, t.k4) == pytest.approx((0, 1, -2))
    assert t.k11 == pytest.approx(0)


def test_cgf_examples(up, rng):
    assert cgf(up, SIGMA_Z, 0.3) == pytest.approx(0.3)
    assert cgf(up, SIGMA_X, 0.2) == pytest.approx(math.log(math.cosh(0.2)))
    assert cgf(up, SIGMA_X, 0.2).real == pytest.approx(0.019869, abs=1e-6)
    assert cgf(haar_state(rng, 3), random_hermitian(rng, 3), 0) == 0


def test_cgf_warns_outside_radius(up):
    with pytest.warns(OutOfConvergenceRegion):
        v = cgf(up, SIGMA_X, 1.0)
    assert v == pytest.approx(math.log(math.cosh(1.0)))


def test_cgf_series_examples(up):
    assert cgf_series(up, SIGMA_X, 0.1, 1) == pytest.approx(0)
    assert cgf_series(up, SIGMA_X, 0.1, 2) == pytest.approx(0.005)
    assert cgf_series(up, SIGMA_X, 0.1, 4) == pytest.approx(0.005 - 2 * 0.1**4 / 24)
    assert cgf_series(up, SIGMA_X, 0.1, 4).real == pytest.approx(0.0049917, abs=1e-7)


def _k5_k6(psi, x):
    w, v = np.linalg.eigh(x)
    p = np.abs(v.conj().T @ psi.vector) ** 2
    c = w - p @ w
    m2, m3, m4, m5, m6 = (p @ c**k for k in range(2, 7))
    return m5 - 10 * m3 * m2, m6 - 15 * m4 * m2 - 10 * m3**2 + 30 * m2**3


@given(seeds)
def test_cgf_series_scaling_order(seed):
    rng = np.random.default_rng(seed)
    psi = haar_state(rng, 3)
    x = random_hermitian(rng, 3, 1.0)
    s = 0.1
    k5, k6 = _k5_k6(psi, x)
    # the halving ratio reads 2^5 only once the s^5 term dominates the s^6 term
    assume(abs(k5) * s**5 / 120 >= 10 * abs(k6) * s**6 / 720)
    r1 = abs(cgf(psi, x, s) - cgf_series(psi, x, s, 4))
    r2 = abs(cgf(psi, x, s / 2) - cgf_series(psi, x, s / 2, 4))
    assert 20 <= r1 / r2 <= 45


def test_convergence_radius_examples():
    assert convergence_radius(SIGMA_X) == pytest.approx(math.log(2))
    assert convergence_radius(angular_momenta_L1()[0]) == pytest.approx(math.log(2))
    assert convergence_radius(2 * SIGMA_Z) == pytest.approx(0.346574, abs=1e-6)
    with pytest.raises(ZeroObservable):
        convergence_radius(np.zeros((2, 2)))


def test_linearization_defect(rng):
    prod = pure_state(np.kron(haar_state(rng, 2).vector, haar_state(rng, 2).vector))
    x, y = tensor(SIGMA_Z, I2), tensor(I2, SIGMA_Z)
    for n in (1, 2, 3, 4):
        assert abs(linearization_defect(prod, x, y, 1, 1, n)) <= 1e-10
    assert linearization_defect(psi3(), x, y, 1, 1, 2) == pytest.approx(-2, abs=1e-12)
    assert linearization_defect(psi3(), x, np.zeros((4, 4)), 1.0, 0.3, 3) == 0
    assert abs(linearization_defect(psi3(), x, np.zeros((4, 4)), 0.7, 0.3, 3)) <= 1e-15
    with pytest.raises(NonCommuting):
        linearization_defect(pure_state([1, 0]), SIGMA_X, SIGMA_Y, 1, 1, 2)
