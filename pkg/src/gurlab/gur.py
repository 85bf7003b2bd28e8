"""Inequality evaluators.

Every evaluator returns a :class:`GurReport` holding both sides and the margin
``lhs - rhs``; a negative margin is a violation. Reports on density-matrix
states are marked ``unproven_regime`` because the Cauchy-Schwarz argument
behind the generalized relation is made for pure states.
"""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import asdict, dataclass
from typing import Callable, Optional

import numpy as np

from .bch import bch_terms
from .cumulant import LOG2, cross_cumulants, cumulants_single, log_expectation
from .errors import (
    DegenerateVariance,
    DimensionError,
    NonCommuting,
    SmallParameterWarning,
    UnknownInequality,
)
from .qmat import (
    Observable,
    State,
    anticommutator,
    commutator,
    exp_scaled,
    expectation,
    mat_exp,
    observable,
)
from .tolerances import DEFAULT


@dataclass(frozen=True)
class GurReport:
    name: str
    lhs: float
    rhs: float
    margin: float
    s: complex
    t: complex
    satisfied: bool
    tol: float
    unproven_regime: bool = False
    note: Optional[str] = None

    def to_dict(self) -> dict:
        d = asdict(self)
        d["s"] = [self.s.real, self.s.imag]
        d["t"] = [self.t.real, self.t.imag]
        return d


def make_report(name, lhs, rhs, s, t, state: State, tol=None, note=None) -> GurReport:
    tol = DEFAULT.report if tol is None else tol
    lhs, rhs = float(lhs), float(rhs)
    margin = lhs - rhs
    return GurReport(
        name=name,
        lhs=lhs,
        rhs=rhs,
        margin=margin,
        s=complex(s),
        t=complex(t),
        satisfied=bool(margin >= -tol),
        tol=tol,
        unproven_regime=not state.is_pure,
        note=note,
    )


def _pair(state: State, x, y) -> tuple[Observable, Observable]:
    x, y = observable(x), observable(y)
    if x.dim != y.dim or x.dim != state.dim:
        raise DimensionError(f"dimensions differ: state {state.dim}, X {x.dim}, Y {y.dim}")
    return x, y


def _warn_small(name: str, *params: complex, limit: float = 0.1) -> None:
    if any(abs(p) > limit for p in params):
        warnings.warn(f"{name} is a small-parameter relation; |s|,|t| > {limit}", SmallParameterWarning, stacklevel=3)


def _mean(state, x: Observable) -> float:
    return expectation(state, x.matrix).real


def _exp_pair_expectation(state: State, x: Observable, y: Observable, s: complex, t: complex) -> complex:
    return expectation(state, exp_scaled(x, s) @ exp_scaled(y, t))


# -- Full relation ----------------------------------------------------------


def gur_full(state: State, x, y, s: complex, t: complex, tol=None) -> GurReport:
    """K[(s+s*)X] + K[(t+t*)Y] >= K(Z_st) + c.c. with Z_st = log(e^{sX} e^{tY})."""
    x, y = _pair(state, x, y)
    s, t = complex(s), complex(t)
    lhs = (
        log_expectation(expectation(state, exp_scaled(x, 2 * s.real)), "<exp((s+s*)X)>").real
        + log_expectation(expectation(state, exp_scaled(y, 2 * t.real)), "<exp((t+t*)Y)>").real
    )
    rhs = 2 * log_expectation(_exp_pair_expectation(state, x, y, s, t), "<exp(sX)exp(tY)>").real
    return make_report("gur_full", lhs, rhs, s, t, state, tol)


def gur_familiar(state: State, x, y, s: complex, t: complex, tol=None) -> GurReport:
    """Same relation with the single-observable parts K(sX), K(tY) subtracted from both sides.

    The left side collects what each observable does alone, the right side
    only the dependence between them. Margin equals that of ``gur_full``.
    """
    x, y = _pair(state, x, y)
    s, t = complex(s), complex(t)
    ks = log_expectation(expectation(state, exp_scaled(x, s)), "<exp(sX)>")
    kt = log_expectation(expectation(state, exp_scaled(y, t)), "<exp(tY)>")
    kz = log_expectation(_exp_pair_expectation(state, x, y, s, t), "<exp(sX)exp(tY)>")
    lhs_x = log_expectation(expectation(state, exp_scaled(x, 2 * s.real))).real - 2 * ks.real
    lhs_y = log_expectation(expectation(state, exp_scaled(y, 2 * t.real))).real - 2 * kt.real
    rhs = 2 * (kz - ks - kt).real
    return make_report("gur_familiar", lhs_x + lhs_y, rhs, s, t, state, tol)


def first_order_identity(state: State, x, y, s: complex, t: complex) -> float:
    """|(s+s*)<X> + (t+t*)<Y> - (<sX+tY> + c.c.)|; zero up to rounding."""
    x, y = _pair(state, x, y)
    s, t = complex(s), complex(t)
    left = 2 * s.real * _mean(state, x) + 2 * t.real * _mean(state, y)
    z1 = expectation(state, s * x.matrix + t * y.matrix)
    return abs(left - 2 * z1.real)


# -- Second order -------------------------------------------------------------


def variance_ur(state: State, x, y, s: complex, t: complex, tol=None) -> GurReport:
    """|s|^2 k2(X) + |t|^2 k2(Y) >= 2 Re[k11(sX,tY) + st<[X,Y]>/2]."""
    x, y = _pair(state, x, y)
    s, t = complex(s), complex(t)
    _warn_small("variance_ur", s, t)
    k2x = cumulants_single(state, x)[1]
    k2y = cumulants_single(state, y)[1]
    k11 = cross_cumulants(state, x, y)[0]
    comm = expectation(state, commutator(x, y))
    lhs = abs(s) ** 2 * k2x + abs(t) ** 2 * k2y
    rhs = 2 * (s * t * k11 + s * t * comm / 2).real
    return make_report("variance_ur", lhs, rhs, s, t, state, tol)


def _second_order_pieces(state: State, x: Observable, y: Observable):
    mx, my = _mean(state, x), _mean(state, y)
    anti = expectation(state, anticommutator(x, y)).real - 2 * mx * my
    # <[X,Y]> is purely imaginary for Hermitian X, Y; i<[X,Y]> is real
    comm_real = (1j * expectation(state, commutator(x, y))).real
    return anti, comm_real


def variance_ur_optimal(state: State, x, y, tol=None) -> GurReport:
    """Variance relation with weights and phases chosen to make it tightest.

    The moduli |s| = sqrt(dY/dX), |t| = sqrt(dX/dY) balance the two variances
    and the phase of st aligns (Re st, Im st) with the anticommutator and
    commutator parts. The resulting sides are 2 dX dY and
    sqrt(|<[X,Y]>|^2 + |<{X,Y}> - 2<X><Y>|^2), which is Schrodinger's relation.
    The returned sides are evaluated through the general variance relation at
    those parameters, so they also check the phase argument.

    A vanishing standard deviation makes the weights undefined; the report then
    falls back to |s| = |t| = 1 with the same optimal phase and says so in
    ``note``.
    """
    x, y = _pair(state, x, y)
    dx = math.sqrt(max(cumulants_single(state, x)[1], 0.0))
    dy = math.sqrt(max(cumulants_single(state, y)[1], 0.0))
    anti, comm_real = _second_order_pieces(state, x, y)
    phase = cmath.exp(1j * math.atan2(comm_real, anti)) if (anti or comm_real) else 1.0
    note = None
    if dx > DEFAULT.variance and dy > DEFAULT.variance:
        s_mod, t_mod = math.sqrt(dy / dx), math.sqrt(dx / dy)
    else:
        s_mod = t_mod = 1.0
        note = "degenerate variance: fell back to |s|=|t|=1"
    s, t = s_mod * phase, complex(t_mod)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", SmallParameterWarning)
        rep = variance_ur(state, x, y, s, t, tol)
    return make_report("variance_ur_optimal", rep.lhs, rep.rhs, s, t, state, tol, note)


def pearson(state: State, x, y) -> float:
    """|<(X-<X>)(Y-<Y>)>| / (dX dY)."""
    x, y = _pair(state, x, y)
    dx2 = cumulants_single(state, x)[1]
    dy2 = cumulants_single(state, y)[1]
    if dx2 <= DEFAULT.variance**2 or dy2 <= DEFAULT.variance**2:
        raise DegenerateVariance("Pearson coefficient needs nonzero variances")
    eye = np.eye(x.dim)
    cx = x.matrix - _mean(state, x) * eye
    cy = y.matrix - _mean(state, y) * eye
    return abs(expectation(state, cx @ cy)) / math.sqrt(dx2 * dy2)


def robertson(state: State, x, y, tol=None) -> GurReport:
    """dX^2 dY^2 >= |<[X,Y]>|^2 / 4."""
    x, y = _pair(state, x, y)
    lhs = cumulants_single(state, x)[1] * cumulants_single(state, y)[1]
    rhs = abs(expectation(state, commutator(x, y))) ** 2 / 4
    return make_report("robertson", lhs, rhs, 0, 0, state, tol)


def schrodinger(state: State, x, y, tol=None) -> GurReport:
    """dX^2 dY^2 >= |<[X,Y]>|^2 / 4 + |<{X,Y}> - 2<X><Y>|^2 / 4."""
    x, y = _pair(state, x, y)
    lhs = cumulants_single(state, x)[1] * cumulants_single(state, y)[1]
    anti, comm_real = _second_order_pieces(state, x, y)
    rhs = (comm_real**2 + anti**2) / 4
    return make_report("schrodinger", lhs, rhs, 0, 0, state, tol)


# -- Third order ----------------------------------------------------------------


def skewness_ur(state: State, x, y, s: complex, t: complex, tol=None) -> GurReport:
    x, y = _pair(state, x, y)
    s, t = complex(s), complex(t)
    _warn_small("skewness_ur", s, t)
    _, k2x, k3x, _ = cumulants_single(state, x)
    _, k2y, k3y, _ = cumulants_single(state, y)
    k11, k12, k21 = cross_cumulants(state, x, y)
    lhs = abs(s) ** 2 * (k2x + s.real * k3x) + abs(t) ** 2 * (k2y + t.real * k3y)

    terms = bch_terms(x, y, s, t)
    ev = lambda m: expectation(state, m)  # noqa: E731
    z1, z11 = terms.z1, terms.z11
    bracket = (
        s * t * k11
        + (s * t * t * k12 + s * s * t * k21) / 2
        + ev(z11 + terms.z12 + terms.z21)
        + (ev(z1 @ z11 + z11 @ z1) - 2 * ev(z1) * ev(z11)) / 2
    )
    return make_report("skewness_ur", lhs, 2 * bracket.real, s, t, state, tol)


def variance_skewness_ur(state: State, x, y, eps: float, tol=None) -> GurReport:
    """Commuting-pair, s = t = eps special case of the skewness relation."""
    x, y = _pair(state, x, y)
    if np.linalg.norm(commutator(x, y)) > DEFAULT.commutator:
        raise NonCommuting("variance-skewness relation needs [X,Y] = 0")
    eps = float(eps)
    sigma = max(x.sigma_max, y.sigma_max)
    if sigma > 0 and 2 * abs(eps) * sigma >= LOG2:
        warnings.warn("2|eps| sigma_max >= log 2", SmallParameterWarning, stacklevel=2)
    _, k2x, k3x, _ = cumulants_single(state, x)
    _, k2y, k3y, _ = cumulants_single(state, y)
    mx, my = _mean(state, x), _mean(state, y)
    anti = expectation(state, anticommutator(x, y)).real
    _, k12, k21 = cross_cumulants(state, x, y)
    lhs = k2x + k2y + eps * (k3x + k3y)
    rhs = anti - 2 * mx * my + eps * (k12 + k21)
    return make_report("variance_skewness_ur", lhs, rhs, eps, eps, state, tol)


# -- Exponential (all-order) forms -----------------------------------------------


def classical_ur(state: State, x, y, s: complex, t: complex, tol=None) -> GurReport:
    """<e^{(s+s*)X}><e^{(t+t*)Y}> >= |<e^{sX+tY}>|^2, single exponential on the right."""
    x, y = _pair(state, x, y)
    s, t = complex(s), complex(t)
    lhs = expectation(state, exp_scaled(x, 2 * s.real)).real * expectation(state, exp_scaled(y, 2 * t.real)).real
    rhs = abs(expectation(state, mat_exp(s * x.matrix + t * y.matrix))) ** 2
    return make_report("classical_ur", lhs, rhs, s, t, state, tol)


def quantum_ur(state: State, x, y, s: complex, t: complex, tol=None) -> GurReport:
    """<e^{(s+s*)X}><e^{(t+t*)Y}> >= |<e^{sX} e^{tY}>|^2."""
    x, y = _pair(state, x, y)
    s, t = complex(s), complex(t)
    lhs = expectation(state, exp_scaled(x, 2 * s.real)).real * expectation(state, exp_scaled(y, 2 * t.real)).real
    rhs = abs(_exp_pair_expectation(state, x, y, s, t)) ** 2
    return make_report("quantum_ur", lhs, rhs, s, t, state, tol)


def exp_ratio_ur(state: State, x, y, s: float, t: float, tol=None) -> GurReport:
    """Normalized form of ``quantum_ur`` for real s, t.

    <e^{2sX}>/<e^{sX}>^2 * <e^{2tY}>/<e^{tY}>^2 >= |<e^{sX}e^{tY}> / (<e^{sX}><e^{tY}>)|^2
    """
    x, y = _pair(state, x, y)
    s, t = float(np.real(s)), float(np.real(t))
    ex = expectation(state, exp_scaled(x, s)).real
    ey = expectation(state, exp_scaled(y, t)).real
    for v, what in ((ex, "<exp(sX)>"), (ey, "<exp(tY)>")):
        log_expectation(v, what)
    lhs = (expectation(state, exp_scaled(x, 2 * s)).real / ex**2) * (
        expectation(state, exp_scaled(y, 2 * t)).real / ey**2
    )
    rhs = abs(_exp_pair_expectation(state, x, y, s, t) / (ex * ey)) ** 2
    return make_report("exp_ratio_ur", lhs, rhs, s, t, state, tol)


# -- Registry -----------------------------------------------------------------------

# kind: "st" takes (state, X, Y, s, t); "pair" takes (state, X, Y); "eps" takes (state, X, Y, eps)
INEQUALITIES: dict[str, tuple[str, Callable[..., GurReport]]] = {
    "gur_full": ("st", gur_full),
    "gur_familiar": ("st", gur_familiar),
    "variance_ur": ("st", variance_ur),
    "skewness_ur": ("st", skewness_ur),
    "classical_ur": ("st", classical_ur),
    "quantum_ur": ("st", quantum_ur),
    "exp_ratio_ur": ("st", exp_ratio_ur),
    "variance_ur_optimal": ("pair", variance_ur_optimal),
    "robertson": ("pair", robertson),
    "schrodinger": ("pair", schrodinger),
    "variance_skewness_ur": ("eps", variance_skewness_ur),
}


def evaluate(name: str, state: State, x, y, s: complex = 1.0, t: complex = 1.0, eps: float = 0.05, tol=None) -> GurReport:
    """Dispatch to a registered evaluator by name."""
    try:
        kind, fn = INEQUALITIES[name]
    except KeyError:
        raise UnknownInequality(f"unknown inequality {name!r}; known: {', '.join(sorted(INEQUALITIES))}") from None
    if kind == "st":
        return fn(state, x, y, s, t, tol=tol)
    if kind == "pair":
        return fn(state, x, y, tol=tol)
    return fn(state, x, y, eps, tol=tol)
