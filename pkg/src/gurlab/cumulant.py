"""Moments, cumulants and cross cumulants of observables in a quantum state.

Cumulants are assembled from moments with the explicit low-order polynomials
(no Bell-polynomial machinery); nothing here needs orders above four.
"""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import (
    DimensionError,
    NonCommuting,
    OutOfConvergenceRegion,
    ValidationError,
    ZeroExpectation,
    ZeroObservable,
)
from .qmat import (
    Observable,
    State,
    anticommutator,
    as_matrix,
    commutator,
    exp_scaled,
    expectation,
    observable,
)
from .tolerances import DEFAULT

LOG2 = math.log(2.0)


@dataclass(frozen=True)
class CumulantTable:
    k1: float
    k2: float
    k3: float
    k4: float
    k11: Optional[float] = None
    k12: Optional[float] = None
    k21: Optional[float] = None


def _check_dims(state: State, *ops) -> None:
    for op in ops:
        if op.dim != state.dim:
            raise DimensionError(f"state has dim {state.dim}, observable has dim {op.dim}")


def moment(state: State, x, n: int) -> float:
    """<X^n>."""
    x = observable(x)
    if n < 0 or n > 8:
        raise ValidationError(f"moment order must be in 0..8, got {n}")
    _check_dims(state, x)
    return expectation(state, np.linalg.matrix_power(x.matrix, n)).real


def _moments(state: State, x: Observable, upto: int):
    _check_dims(state, x)
    out = [1.0]
    p = np.eye(x.dim, dtype=complex)
    for _ in range(upto):
        p = p @ x.matrix
        out.append(expectation(state, p).real)
    return out


def cumulants_single(state: State, x) -> tuple[float, float, float, float]:
    """(k1, k2, k3, k4): mean, variance, skewness and kurtosis cumulants."""
    x = observable(x)
    _, m1, m2, m3, m4 = _moments(state, x, 4)
    k1 = m1
    k2 = m2 - m1**2
    k3 = m3 - 3 * m2 * m1 + 2 * m1**3
    k4 = m4 - 4 * m3 * m1 - 3 * m2**2 + 12 * m2 * m1**2 - 6 * m1**4
    return k1, k2, k3, k4


def anticommutator3(x, y) -> np.ndarray:
    """{X,Y,Y} = XYY + YXY + YYX."""
    a, b = as_matrix(x), as_matrix(y)
    if a.shape != b.shape:
        raise DimensionError("operands of the 3rd order anticommutator differ in dimension")
    return a @ b @ b + b @ a @ b + b @ b @ a


def cross_cumulants(state: State, x, y) -> tuple[float, float, float]:
    """(k11, k12, k21) for the ordered pair (X, Y).

    k12 carries one X and two Ys; k21 is its X<->Y exchange.
    """
    x, y = observable(x), observable(y)
    _check_dims(state, x, y)
    ev = lambda m: expectation(state, m).real  # noqa: E731
    ex, ey = ev(x.matrix), ev(y.matrix)
    exy = ev(anticommutator(x, y))
    ex2, ey2 = ev(x.matrix @ x.matrix), ev(y.matrix @ y.matrix)
    k11 = 0.5 * exy - ex * ey
    k12 = ev(anticommutator3(x, y)) / 3 - (ex * ey2 + exy * ey) + 2 * ex * ey**2
    k21 = ev(anticommutator3(y, x)) / 3 - (ey * ex2 + exy * ex) + 2 * ey * ex**2
    return k11, k12, k21


def cumulant_table(state: State, x, y=None) -> CumulantTable:
    k1, k2, k3, k4 = cumulants_single(state, x)
    if y is None:
        return CumulantTable(k1, k2, k3, k4)
    k11, k12, k21 = cross_cumulants(state, x, y)
    return CumulantTable(k1, k2, k3, k4, k11, k12, k21)


def mgf(state: State, x, s: complex) -> complex:
    """<exp(sX)>."""
    x = observable(x)
    _check_dims(state, x)
    return expectation(state, exp_scaled(x, s))


def log_expectation(value: complex, what: str = "expectation") -> complex:
    if abs(value) < DEFAULT.zero_expectation:
        raise ZeroExpectation(f"{what} vanishes; its logarithm is undefined")
    return cmath.log(value)


def cgf(state: State, x, s: complex) -> complex:
    """K(sX) = log <exp(sX)> with the principal scalar logarithm.

    Outside ``|Re s| * sigma_max < log 2`` the power series in s is not
    guaranteed to converge; the scalar value is still returned, with an
    OutOfConvergenceRegion warning.
    """
    x = observable(x)
    s = complex(s)
    if s == 0:
        return 0j
    if abs(s.real) * x.sigma_max >= LOG2:
        warnings.warn(
            f"|Re s|*sigma_max = {abs(s.real) * x.sigma_max:.4g} >= log 2",
            OutOfConvergenceRegion,
            stacklevel=2,
        )
    return log_expectation(mgf(state, x, s), "<exp(sX)>")


def cgf_series(state: State, x, s: complex, order: int) -> complex:
    """Truncated cumulant series sum_{m<=order} s^m k_m / m!."""
    if not 1 <= order <= 4:
        raise ValidationError(f"series order must be in 1..4, got {order}")
    ks = cumulants_single(state, x)
    s = complex(s)
    return sum(s ** (m + 1) * ks[m] / math.factorial(m + 1) for m in range(order))


def convergence_radius(x) -> float:
    """log 2 / sigma_max: real-parameter radius of guaranteed series convergence."""
    x = observable(x)
    if x.sigma_max < 1e-14:
        raise ZeroObservable("observable has zero spectral norm")
    return LOG2 / x.sigma_max


def linearization_defect(state: State, x, y, s: float, t: float, n: int) -> float:
    """k_n(sX + tY) - [s^n k_n(X) + t^n k_n(Y)] for commuting X, Y and real s, t.

    Vanishes when X and Y are statistically independent.
    """
    x, y = observable(x), observable(y)
    _check_dims(state, x, y)
    if not 1 <= n <= 4:
        raise ValidationError(f"cumulant order must be in 1..4, got {n}")
    if np.linalg.norm(commutator(x, y)) > DEFAULT.commutator:
        raise NonCommuting("linearization is defined for commuting observables only")
    s, t = float(s), float(t)
    combined = observable(s * x.matrix + t * y.matrix)
    kn = cumulants_single(state, combined)[n - 1]
    return kn - (s**n * cumulants_single(state, x)[n - 1] + t**n * cumulants_single(state, y)[n - 1])
