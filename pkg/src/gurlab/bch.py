"""Baker-Campbell-Hausdorff terms for log(exp(sX) exp(tY)) through fifth order.

Terms are named by their (s, t) bidegree: ``z21`` is of order s^2 t, and the
two independent fifth-order families of bidegree (2,3)/(3,2) carry ``_1`` and
``_2`` suffixes. ``z_exact`` is the full-order reference via the principal
matrix logarithm.
"""

from __future__ import annotations

from dataclasses import dataclass, fields

import numpy as np

from .cumulant import cross_cumulants, cumulants_single
from .errors import DimensionError, ValidationError
from .qmat import State, as_matrix, commutator, exp_scaled, expectation, mat_log_principal, observable

# Rational prefactor of each nested commutator. Read at call time so a test can
# patch a single entry and confirm the Taylor oracle notices.
BCH_COEFFICIENTS = {
    "z11": 1 / 2,
    "z21": 1 / 12,
    "z12": 1 / 12,
    "z22": -1 / 24,
    "z14": -1 / 720,
    "z41": -1 / 720,
    "z23_1": 1 / 360,
    "z32_1": 1 / 360,
    "z23_2": 1 / 120,
    "z32_2": 1 / 120,
}

TERM_ORDER = {
    "z1": 1,
    "z11": 2,
    "z21": 3,
    "z12": 3,
    "z22": 4,
    "z14": 5,
    "z41": 5,
    "z23_1": 5,
    "z32_1": 5,
    "z23_2": 5,
    "z32_2": 5,
}


@dataclass(frozen=True, eq=False)
class BchTerms:
    z1: np.ndarray
    z11: np.ndarray
    z21: np.ndarray
    z12: np.ndarray
    z22: np.ndarray
    z14: np.ndarray
    z41: np.ndarray
    z23_1: np.ndarray
    z32_1: np.ndarray
    z23_2: np.ndarray
    z32_2: np.ndarray

    def items(self):
        return [(f.name, getattr(self, f.name)) for f in fields(self)]


def bch_terms(x, y, s: complex, t: complex) -> BchTerms:
    a = complex(s) * as_matrix(x)
    b = complex(t) * as_matrix(y)
    if a.shape != b.shape:
        raise DimensionError("X and Y differ in dimension")
    c = BCH_COEFFICIENTS
    ab = commutator(a, b)
    ba = -ab
    return BchTerms(
        z1=a + b,
        z11=c["z11"] * ab,
        z21=c["z21"] * commutator(a, ab),
        z12=c["z12"] * commutator(b, ba),
        z22=c["z22"] * commutator(b, commutator(a, ab)),
        z14=c["z14"] * commutator(commutator(commutator(ab, b), b), b),
        z41=c["z41"] * commutator(commutator(commutator(ba, a), a), a),
        z23_1=c["z23_1"] * commutator(commutator(commutator(ab, b), b), a),
        z32_1=c["z32_1"] * commutator(commutator(commutator(ba, a), a), b),
        z23_2=c["z23_2"] * commutator(commutator(commutator(ba, b), a), b),
        z32_2=c["z32_2"] * commutator(commutator(commutator(ab, a), b), a),
    )


def bch_partial_sum(terms: BchTerms, max_order: int) -> np.ndarray:
    if not 1 <= max_order <= 5:
        raise ValidationError(f"max_order must be in 1..5, got {max_order}")
    total = np.zeros_like(terms.z1)
    for name, term in terms.items():
        if TERM_ORDER[name] <= max_order:
            total = total + term
    return total


def z_exact(x, y, s: complex, t: complex) -> np.ndarray:
    """Principal log of exp(sX) exp(tY)."""
    x, y = observable(x), observable(y)
    if x.dim != y.dim:
        raise DimensionError("X and Y differ in dimension")
    return mat_log_principal(exp_scaled(x, complex(s)) @ exp_scaled(y, complex(t)))


def k2_coefficient(state: State, x, y, s: complex, t: complex) -> complex:
    """Second-order part of K(Z_st) at (s, t).

    <Z11> + [k2(sX) + k2(tY) + 2 k11(sX, tY)] / 2, the cumulants continued
    analytically to complex s, t (k2(sX) = s^2 k2(X), k11(sX, tY) = st k11).
    """
    x, y = observable(x), observable(y)
    s, t = complex(s), complex(t)
    terms = bch_terms(x, y, s, t)
    k2x = cumulants_single(state, x)[1]
    k2y = cumulants_single(state, y)[1]
    k11 = cross_cumulants(state, x, y)[0]
    return expectation(state, terms.z11) + (s * s * k2x + t * t * k2y + 2 * s * t * k11) / 2


def k2_coefficient_moments(state: State, x, y, s: complex, t: complex) -> complex:
    """Same quantity from raw moments: <Z11> + (<Z1^2> - <Z1>^2)/2."""
    terms = bch_terms(x, y, s, t)
    z1 = terms.z1
    m1 = expectation(state, z1)
    return expectation(state, terms.z11) + (expectation(state, z1 @ z1) - m1 * m1) / 2


def kappa3_combined(state: State, x, y, s: complex, t: complex) -> complex:
    """k3(sX + tY) = s^3 k3(X) + 3 s^2 t k21 + 3 s t^2 k12 + t^3 k3(Y)."""
    s, t = complex(s), complex(t)
    k3x = cumulants_single(state, x)[2]
    k3y = cumulants_single(state, y)[2]
    _, k12, k21 = cross_cumulants(state, x, y)
    return s**3 * k3x + 3 * s * s * t * k21 + 3 * s * t * t * k12 + t**3 * k3y


def k3_coefficient(state: State, x, y, s: complex, t: complex) -> complex:
    """Third-order part of K(Z_st) at (s, t)."""
    x, y = observable(x), observable(y)
    terms = bch_terms(x, y, s, t)
    ev = lambda m: expectation(state, m)  # noqa: E731
    z1, z11 = terms.z1, terms.z11
    nested = ev(terms.z21) + ev(terms.z12)
    sym = (ev(z1 @ z11 + z11 @ z1) - 2 * ev(z1) * ev(z11)) / 2
    return nested + sym + kappa3_combined(state, x, y, s, t) / 6
