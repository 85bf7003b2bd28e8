"""Concrete systems: Pauli algebra, spin-1, two-qubit collective spins, Werner states.

Basis conventions: the qubit |+> is the sigma_z = +1 eigenvector (index 0);
spin-1 states are ordered |1>, |0>, |-1> in the L_z eigenbasis; hbar = 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .cumulant import cumulants_single
from .errors import DimensionError, EtaOutOfRange
from .gur import GurReport, classical_ur, make_report
from .qmat import State, density_state, expectation, observable, pure_state, tensor

I2 = np.eye(2, dtype=complex)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
UP = np.array([1, 0], dtype=complex)
DOWN = np.array([0, 1], dtype=complex)

LHVT_K3_BOUND = 8.0
ETA_MIN, ETA_MAX = -1 / 3, 1.0


def paulis():
    return SIGMA_X.copy(), SIGMA_Y.copy(), SIGMA_Z.copy()


def psi1(theta: float, phi: float) -> State:
    """cos(theta/2)|+> + e^{i phi} sin(theta/2)|->."""
    return pure_state([math.cos(theta / 2), np.exp(1j * phi) * math.sin(theta / 2)])


def psi2() -> State:
    return pure_state(np.ones(3, dtype=complex) / math.sqrt(3))


def psi3() -> State:
    """Singlet (|+-> - |-+>)/sqrt 2."""
    return pure_state((np.kron(UP, DOWN) - np.kron(DOWN, UP)) / math.sqrt(2))


def example1_surfaces(theta: float, phi: float) -> tuple[float, float]:
    """Closed-form sides of the classical relation for psi1, sigma_x, sigma_y at s = t = 1."""
    st = math.sin(theta)
    c2, s2 = math.cosh(2), math.sinh(2)
    r2 = math.sqrt(2)
    lhs = (c2 + math.cos(phi) * st * s2) * (c2 + math.sin(phi) * st * s2)
    rhs = 0.5 * (r2 * math.cosh(r2) + st * (math.cos(phi) + math.sin(phi)) * math.sinh(r2)) ** 2
    return lhs, rhs


def example1_report(theta: float, phi: float, tol=None) -> GurReport:
    return classical_ur(psi1(theta, phi), SIGMA_X, SIGMA_Y, 1.0, 1.0, tol=tol)


def angular_momenta_L1():
    """Spin-1 Lx, Ly, Lz in the (|1>, |0>, |-1>) basis."""
    r = 1 / math.sqrt(2)
    lx = r * np.array([[0, 1, 0], [1, 0, 1], [0, 1, 0]], dtype=complex)
    ly = r * np.array([[0, -1j, 0], [1j, 0, -1j], [0, 1j, 0]], dtype=complex)
    lz = np.diag([1.0, 0.0, -1.0]).astype(complex)
    return lx, ly, lz


def collective_observables():
    """A, B, C = sigma_i (x) 1 + 1 (x) sigma_i for i = x, y, z."""
    return tuple(tensor(p, I2) + tensor(I2, p) for p in (SIGMA_X, SIGMA_Y, SIGMA_Z))


def collective_variance_sum(state: State) -> float:
    return sum(cumulants_single(state, o)[1] for o in collective_observables())


# -- single-qubit zeta bound ---------------------------------------------------


@dataclass(frozen=True)
class ZetaBound:
    zeta1: float
    zeta2: float
    zeta3: float
    bound: float
    kappa2_sum: float
    pure: bool

    @property
    def zetas(self) -> tuple[float, float, float]:
        return self.zeta1, self.zeta2, self.zeta3

    @property
    def holds(self) -> bool:
        """kappa2 sum >= zeta sum >= 1; only guaranteed for pure states."""
        return self.kappa2_sum >= self.bound - 1e-10 and self.bound >= 1 - 1e-10


def _bloch(state: State) -> tuple[float, float, float]:
    if state.dim != 2:
        raise DimensionError(f"qubit state required, got dim {state.dim}")
    return tuple(expectation(state, p).real for p in (SIGMA_X, SIGMA_Y, SIGMA_Z))


def _zetas(x: float, y: float, z: float) -> tuple[float, float, float]:
    return (
        math.sqrt((x * y) ** 2 + z**2),
        math.sqrt((y * z) ** 2 + x**2),
        math.sqrt((z * x) ** 2 + y**2),
    )


def zeta_bound(state: State) -> ZetaBound:
    x, y, z = _bloch(state)
    z1, z2, z3 = _zetas(x, y, z)
    k2sum = sum(cumulants_single(state, p)[1] for p in (SIGMA_X, SIGMA_Y, SIGMA_Z))
    return ZetaBound(z1, z2, z3, z1 + z2 + z3, k2sum, state.is_pure)


def weighted_zeta_report(state: State, s1, t1, s2, t2, s3, t3, tol=None) -> GurReport:
    """Pairwise variance relations for (x,y), (y,z), (z,x), summed with weights.

    Only the weight moduli enter; the phases are taken optimal.
    """
    x, y, z = _bloch(state)
    k2x, k2y, k2z = (cumulants_single(state, p)[1] for p in (SIGMA_X, SIGMA_Y, SIGMA_Z))
    z1, z2, z3 = _zetas(x, y, z)
    a = [abs(complex(v)) for v in (s1, t1, s2, t2, s3, t3)]
    lhs = a[0] ** 2 * k2x + a[1] ** 2 * k2y + a[2] ** 2 * k2y + a[3] ** 2 * k2z + a[4] ** 2 * k2z + a[5] ** 2 * k2x
    rhs = 2 * (a[0] * a[1] * z1 + a[2] * a[3] * z2 + a[4] * a[5] * z3)
    note = None if state.is_pure else "mixed state: zeta bound not guaranteed"
    return make_report("weighted_zeta", lhs, rhs, complex(s1), complex(t1), state, tol, note)


def optimal_zeta_weights(state: State, scale: float = 1.0) -> tuple[float, ...]:
    """Weights |s_i| = |t_i| = eps_i with eps_i^2 proportional to zeta_i and sum eps_i^4 = scale^4."""
    zs = np.array(_zetas(*_bloch(state)))
    norm = np.linalg.norm(zs)
    if norm == 0:
        e2 = np.full(3, scale**2 / math.sqrt(3))
    else:
        e2 = scale**2 * zs / norm
    eps = np.sqrt(e2)
    return tuple(float(v) for e in eps for v in (e, e))


# -- two-qubit Werner states and the CHSH-like operator -------------------------


@dataclass(frozen=True, eq=False)
class WernerState:
    eta: float
    state: State

    @property
    def rho(self) -> np.ndarray:
        return self.state.rho


@dataclass(frozen=True, eq=False)
class ChshOperator:
    theta: float
    S: np.ndarray


def _check_eta(eta: float) -> float:
    eta = float(eta)
    if not (ETA_MIN - 1e-12 <= eta <= ETA_MAX + 1e-12):
        raise EtaOutOfRange(f"eta must lie in [-1/3, 1], got {eta}")
    return eta


def werner(eta: float) -> WernerState:
    eta = _check_eta(eta)
    v = psi3().vector
    rho = (1 - eta) / 4 * np.eye(4, dtype=complex) + eta * np.outer(v, v.conj())
    return WernerState(eta, density_state(rho))


def chsh_operator(theta: float) -> ChshOperator:
    x, xp = SIGMA_Z, SIGMA_X
    y = math.sin(theta) * SIGMA_X + math.cos(theta) * SIGMA_Z
    yp = math.cos(theta) * SIGMA_X - math.sin(theta) * SIGMA_Z
    s = tensor(x, y) - tensor(x, yp) + tensor(xp, y) + tensor(xp, yp)
    return ChshOperator(theta, observable(s).matrix)


def kappa3_S(eta: float, theta: float) -> float:
    """Closed-form third cumulant of S in the Werner state."""
    eta = _check_eta(eta)
    u = math.cos(theta) + math.sin(theta)
    return -8 * eta * u * (-1 - 3 * eta + 2 * eta**2 * u**2)


def kappa3_S_numeric(eta: float, theta: float) -> float:
    return cumulants_single(werner(eta).state, chsh_operator(theta).S)[2]


# -- local hidden variable bound ------------------------------------------------


def lhvt_k3_bound() -> float:
    """Bound on |third central moment| of a variable confined to [-2, 2]."""
    return LHVT_K3_BOUND


def third_central_moment(values, probs) -> float:
    values = np.asarray(values, dtype=float)
    probs = np.asarray(probs, dtype=float)
    mean = probs @ values
    return float(probs @ (values - mean) ** 3)


def sample_lhvt_moments(rng: np.random.Generator, n: int, max_support: int = 6) -> np.ndarray:
    """Third central moments of ``n`` random discrete distributions on [-2, 2].

    Support sizes are uniform in 2..max_support; half of the draws pin the
    support to the endpoints {-2, 2} plus interior points, since extremal
    moments live there.
    """
    out = np.empty(n)
    for i in range(n):
        k = int(rng.integers(2, max_support + 1))
        values = rng.uniform(-2, 2, size=k)
        if rng.random() < 0.5:
            values[0], values[1] = -2.0, 2.0
        probs = rng.dirichlet(np.full(k, 0.5))
        out[i] = third_central_moment(values, probs)
    return out


# -- random states used by the invariant checks --------------------------------


def random_qubit_density(rng: np.random.Generator, pure: bool = True) -> np.ndarray:
    v = rng.normal(size=2) + 1j * rng.normal(size=2)
    v /= np.linalg.norm(v)
    rho = np.outer(v, v.conj())
    if not pure:
        w = rng.uniform()
        rho = w * rho + (1 - w) * I2 / 2
    return rho


def random_separable_state(rng: np.random.Generator, max_terms: int = 4, pure_factors: Optional[bool] = None) -> State:
    """Convex mixture of 1..max_terms product states rho_A (x) rho_B."""
    k = int(rng.integers(1, max_terms + 1))
    weights = rng.dirichlet(np.ones(k))
    rho = np.zeros((4, 4), dtype=complex)
    for w in weights:
        pure = bool(rng.integers(2)) if pure_factors is None else pure_factors
        rho += w * np.kron(random_qubit_density(rng, pure), random_qubit_density(rng, pure))
    return density_state(rho)
