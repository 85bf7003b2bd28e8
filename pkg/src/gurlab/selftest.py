"""Random-instance invariant suites.

Each suite draws its own stream from one seed (``SeedSequence.spawn``) so a
suite's instances do not depend on how many instances the others used.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .bch import bch_partial_sum, bch_terms, k2_coefficient, k3_coefficient, z_exact
from .errors import GurError
from .gur import first_order_identity, gur_full
from .qmat import State, expectation, haar_state, mat_exp, observable, random_hermitian
from .problem import problem_to_dict

DEFAULT_SEED = 20211028
SUITES = (
    "gur_full_nonnegativity",
    "first_order_identity",
    "bch_scaling_order",
    "taylor_coefficient_oracle",
)

BCH_EPSILONS = (0.05, 0.025, 0.0125)
BCH_ORDER_RANGE = (5.3, 6.7)
BCH_RESIDUAL_FLOOR = 1e-14  # below this the residual is rounding, not truncation
TAYLOR_TOL = 1e-6


@dataclass
class Instance:
    state: State
    x: np.ndarray
    y: np.ndarray
    s: complex
    t: complex

    def problem(self) -> dict:
        return problem_to_dict(self.state, {"X": self.x, "Y": self.y}, {"s": self.s, "t": self.t})


@dataclass
class SuiteResult:
    name: str
    total: int = 0
    passed: int = 0
    skipped: int = 0
    failures: list[tuple[Instance, str]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


def _unit_disk(rng: np.random.Generator) -> complex:
    r = math.sqrt(rng.uniform())
    angle = rng.uniform(0, 2 * math.pi)
    return complex(r * math.cos(angle), r * math.sin(angle))


def random_instance(rng: np.random.Generator, dims=(2, 3, 4), norm_range=(0.0, 2.0)) -> Instance:
    """Haar pure state, Hermitized Gaussian observables with spectral norm in ``norm_range``,
    s and t uniform in the unit complex disk."""
    d = int(rng.choice(dims))
    lo, hi = norm_range
    x = random_hermitian(rng, d, rng.uniform(lo, hi))
    y = random_hermitian(rng, d, rng.uniform(lo, hi))
    return Instance(haar_state(rng, d), x, y, _unit_disk(rng), _unit_disk(rng))


def _k_of_z(inst: Instance, lam: float) -> complex:
    """K(Z) along the ray (lam s, lam t), through the exact matrix log."""
    z = z_exact(inst.x, inst.y, lam * inst.s, lam * inst.t)
    return np.log(expectation(inst.state, mat_exp(z)))


def taylor_coefficients_fd(inst: Instance, h: float = 5e-3) -> tuple[complex, complex]:
    """Second- and third-order Taylor parts of K(Z_st) by central differences with one Richardson step.

    g(lam) = K(Z_{lam s, lam t}) has g(0) = 0; its lam^2 and lam^3 coefficients
    are the homogeneous second- and third-order parts at (s, t).
    """
    g = {k: _k_of_z(inst, k * h / 2) for k in (-4, -2, -1, 1, 2, 4)}

    def d2(step):  # g''(0), step in units of h/2
        return (g[step] + g[-step]) / (step * h / 2) ** 2

    def d3(step):
        e = step * h / 2
        return (g[2 * step] - 2 * g[step] + 2 * g[-step] - g[-2 * step]) / (2 * e**3)

    second = (4 * d2(1) - d2(2)) / 3
    third = (4 * d3(1) - d3(2)) / 3
    return second / 2, third / 6


def bch_residual_order(x, y, epsilons=BCH_EPSILONS) -> tuple[Optional[float], list[float]]:
    """Least-squares slope of log ||z_exact - bch5|| against log eps, at s = t = eps.

    Points under BCH_RESIDUAL_FLOOR are dropped; with fewer than two left the
    order is not measurable and None is returned.
    """
    res = []
    for e in epsilons:
        diff = z_exact(x, y, e, e) - bch_partial_sum(bch_terms(x, y, e, e), 5)
        res.append(float(np.linalg.norm(diff)))
    keep = [(e, r) for e, r in zip(epsilons, res) if r > BCH_RESIDUAL_FLOOR]
    if len(keep) < 2:
        return None, res
    es, rs = zip(*keep)
    slope = np.polyfit(np.log(es), np.log(rs), 1)[0]
    return float(slope), res


class NotMeasurable(Exception):
    """The instance cannot exercise the invariant (e.g. residual at rounding level)."""


def _run(name: str, n: int, rng, make: Callable, check: Callable[[Instance], Optional[str]]) -> SuiteResult:
    out = SuiteResult(name)
    for _ in range(n):
        inst = make(rng)
        try:
            problem = check(inst)
        except NotMeasurable:
            out.skipped += 1
            continue
        except GurError as exc:
            problem = f"{type(exc).__name__}: {exc}"
        out.total += 1
        if problem is None:
            out.passed += 1
        else:
            out.failures.append((inst, problem))
    return out


def _check_nonneg(inst: Instance) -> Optional[str]:
    rep = gur_full(inst.state, inst.x, inst.y, inst.s, inst.t)
    return None if rep.margin >= -1e-10 else f"margin {rep.margin:.3e}"


def _check_first_order(inst: Instance) -> Optional[str]:
    x, y = observable(inst.x), observable(inst.y)
    scale = max(1.0, 2 * abs(inst.s) * x.sigma_max + 2 * abs(inst.t) * y.sigma_max)
    d = first_order_identity(inst.state, x, y, inst.s, inst.t)
    return None if d <= 1e-12 * scale else f"|lhs-rhs| = {d:.3e}"


def _bch_residual(x, y, e: float) -> np.ndarray:
    return z_exact(x, y, e, e) - bch_partial_sum(bch_terms(x, y, e, e), 5)


def pre_asymptotic(x, y, e: float = BCH_EPSILONS[0]) -> bool:
    """True when the eps^7 part of the residual rivals the eps^6 part at ``e``.

    R(e) + R(-e) keeps the even orders, R(e) - R(-e) the odd ones. The odd
    part must itself scale at order >= 6.3 between e and e/2, so a wrong
    odd-degree coefficient (which leaves an eps^5 odd part) is never excused.
    """
    rp, rm = _bch_residual(x, y, e), _bch_residual(x, y, -e)
    hp, hm = _bch_residual(x, y, e / 2), _bch_residual(x, y, -e / 2)
    even = np.linalg.norm(rp + rm) / 2
    odd = np.linalg.norm(rp - rm) / 2
    odd_half = np.linalg.norm(hp - hm) / 2
    if odd_half <= BCH_RESIDUAL_FLOOR:
        return False
    return bool(odd >= 0.25 * even and math.log2(odd / odd_half) >= 6.3)


def _check_bch(inst: Instance) -> Optional[str]:
    slope, res = bch_residual_order(inst.x, inst.y)
    if slope is None:
        raise NotMeasurable(f"residuals {res} at rounding level")
    lo, hi = BCH_ORDER_RANGE
    if lo <= slope <= hi:
        return None
    if slope > hi and pre_asymptotic(inst.x, inst.y):
        raise NotMeasurable(f"eps^7 term comparable to eps^6 term (fitted order {slope:.3f})")
    return f"fitted order {slope:.3f}, residuals {res}"


def _check_taylor(inst: Instance) -> Optional[str]:
    fd2, fd3 = taylor_coefficients_fd(inst)
    k2 = k2_coefficient(inst.state, inst.x, inst.y, inst.s, inst.t)
    k3 = k3_coefficient(inst.state, inst.x, inst.y, inst.s, inst.t)
    e2, e3 = abs(k2 - fd2), abs(k3 - fd3)
    if e2 <= TAYLOR_TOL and e3 <= TAYLOR_TOL:
        return None
    return f"|k2 - fd| = {e2:.3e}, |k3 - fd| = {e3:.3e}"


def run_selftest(seed: int = DEFAULT_SEED, n: int = 1000, suites=SUITES) -> list[SuiteResult]:
    streams = dict(zip(SUITES, (np.random.default_rng(s) for s in np.random.SeedSequence(seed).spawn(len(SUITES)))))
    plan = {
        "gur_full_nonnegativity": (random_instance, _check_nonneg),
        "first_order_identity": (random_instance, _check_first_order),
        "bch_scaling_order": (lambda r: random_instance(r, dims=(2, 3), norm_range=(1.0, 2.0)), _check_bch),
        "taylor_coefficient_oracle": (lambda r: random_instance(r, dims=(2,)), _check_taylor),
    }
    return [_run(name, n, streams[name], *plan[name]) for name in suites]
