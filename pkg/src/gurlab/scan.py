"""Grid sweeps over inequality evaluators, 1-D maximization and threshold bisection."""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from itertools import product
from typing import Callable, Mapping, Optional, Union

import numpy as np

from . import scenarios
from .errors import BindingError, NoSignChange, UnknownInequality, ValidationError
from .gur import INEQUALITIES, evaluate
from .qmat import State

GOLDEN = (math.sqrt(5) - 1) / 2
COARSE_POINTS = 256
PARAM_NAMES = ("s", "t", "s_re", "s_im", "t_re", "t_im", "eps")


@dataclass(frozen=True)
class Axis:
    name: str
    lo: float
    hi: float
    n: int

    def __post_init__(self):
        if not all(math.isfinite(v) for v in (self.lo, self.hi)):
            raise ValidationError(f"axis {self.name!r} bounds must be finite")
        if self.n < 1:
            raise ValidationError(f"axis {self.name!r} needs n >= 1")
        if self.n == 1 and self.lo > self.hi or self.n >= 2 and not self.lo < self.hi:
            raise ValidationError(f"axis {self.name!r} needs lo < hi")

    def values(self) -> np.ndarray:
        if self.n == 1:
            return np.array([self.lo])
        return np.linspace(self.lo, self.hi, self.n)


@dataclass(frozen=True)
class GridSpec:
    var1: Axis
    var2: Optional[Axis] = None
    fixed: Mapping[str, complex] = field(default_factory=dict)

    @property
    def axes(self) -> tuple[Axis, ...]:
        return (self.var1,) if self.var2 is None else (self.var1, self.var2)

    @property
    def shape(self) -> tuple[int, ...]:
        return tuple(a.n for a in self.axes)

    def points(self):
        """Grid coordinates in lexicographic index order (last axis fastest)."""
        return list(product(*(a.values() for a in self.axes)))


@dataclass(frozen=True)
class ScanRow:
    coords: tuple[float, ...]
    lhs: float
    rhs: float
    margin: float


@dataclass(frozen=True)
class ScanResult:
    names: tuple[str, ...]
    shape: tuple[int, ...]
    rows: list[ScanRow]
    violation_cells: list[int]
    extremum: Optional[tuple[tuple[float, ...], float]] = None

    def margins(self) -> np.ndarray:
        return np.array([r.margin for r in self.rows]).reshape(self.shape)

    def violation_mask(self) -> np.ndarray:
        mask = np.zeros(len(self.rows), dtype=bool)
        mask[self.violation_cells] = True
        return mask.reshape(self.shape)


# -- scenarios a sweep can run over ---------------------------------------------
# Each maps scenario parameters to (state, X, Y).

def _psi1_setup(theta=math.pi / 2, phi=math.pi):
    return scenarios.psi1(theta, phi), scenarios.SIGMA_X, scenarios.SIGMA_Y


def _psi2_setup():
    lx, ly, _ = scenarios.angular_momenta_L1()
    return scenarios.psi2(), lx, ly


SCENARIOS: dict[str, tuple[tuple[str, ...], Callable]] = {
    "psi1": (("theta", "phi"), _psi1_setup),
    "psi2": ((), _psi2_setup),
}


def fixed_problem(state: State, x, y):
    """Wrap an explicit (state, X, Y) triple as a parameterless scenario."""
    return ((), lambda: (state, x, y))


def _complex_param(bound: dict, name: str) -> complex:
    """s from ``s``, or from ``s_re``/``s_im`` parts; defaults to 1 when unbound."""
    re_name, im_name = f"{name}_re", f"{name}_im"
    if name in bound:
        base = complex(bound[name])
    elif re_name in bound or im_name in bound:
        base = 0j
    else:
        base = 1 + 0j
    return base + float(np.real(bound.get(re_name, 0.0))) + 1j * float(np.real(bound.get(im_name, 0.0)))


def _split_bindings(bindings: Mapping[str, complex], scenario_params) -> tuple[dict, dict]:
    scen, ineq = {}, {}
    for name, value in bindings.items():
        if name in scenario_params:
            scen[name] = float(np.real(value))
        elif name in PARAM_NAMES:
            ineq[name] = value
        else:
            raise BindingError(f"variable {name!r} binds to nothing; allowed: {sorted(set(scenario_params) | set(PARAM_NAMES))}")
    s, t = _complex_param(ineq, "s"), _complex_param(ineq, "t")
    return scen, {"s": s, "t": t, "eps": float(np.real(ineq.get("eps", 0.05)))}


def sweep(
    inequality_id: str,
    grid: GridSpec,
    scenario: Union[str, tuple] = "psi1",
    tol: float = 1e-9,
    workers: Optional[int] = None,
) -> ScanResult:
    """Evaluate an inequality at every grid point.

    Row order is the lexicographic grid index whatever ``workers`` is; each
    worker writes into its own preallocated slot.
    """
    if inequality_id not in INEQUALITIES:
        raise UnknownInequality(f"unknown inequality {inequality_id!r}")
    if isinstance(scenario, str):
        if scenario not in SCENARIOS:
            raise BindingError(f"unknown scenario {scenario!r}")
        scenario = SCENARIOS[scenario]
    params, setup = scenario
    names = tuple(a.name for a in grid.axes)
    if len(set(names)) != len(names):
        raise BindingError("grid variables must have distinct names")
    # validate bindings once up front so errors surface before any work
    _split_bindings({**grid.fixed, **{n: 0.0 for n in names}}, params)

    points = grid.points()
    rows: list[Optional[ScanRow]] = [None] * len(points)

    def run(i: int) -> None:
        coords = tuple(float(c) for c in points[i])
        scen, ip = _split_bindings({**grid.fixed, **dict(zip(names, coords))}, params)
        state, x, y = setup(**scen)
        rep = evaluate(inequality_id, state, x, y, ip["s"], ip["t"], ip["eps"])
        rows[i] = ScanRow(coords, rep.lhs, rep.rhs, rep.margin)

    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            list(pool.map(run, range(len(points))))
    else:
        for i in range(len(points)):
            run(i)

    violations = [i for i, r in enumerate(rows) if r.margin < -tol]
    worst = min(range(len(rows)), key=lambda i: rows[i].margin)
    return ScanResult(names, grid.shape, rows, violations, (rows[worst].coords, rows[worst].margin))


def violation_regions(result: ScanResult) -> list[list[tuple[int, ...]]]:
    """Connected (4-neighbour) groups of violating grid cells."""
    from scipy import ndimage

    labels, count = ndimage.label(result.violation_mask())
    return [[tuple(int(v) for v in idx) for idx in np.argwhere(labels == k)] for k in range(1, count + 1)]


# -- 1-D extremum and threshold -------------------------------------------------


def _kappa3_eta1(theta: float) -> float:
    return scenarios.kappa3_S(1.0, theta)


FUNCTIONS: dict[str, Callable[[float], float]] = {
    "kappa3_S_eta1": _kappa3_eta1,
}


def _resolve(f, table) -> Callable[[float], float]:
    if callable(f):
        return f
    try:
        return table[f]
    except KeyError:
        raise UnknownInequality(f"unknown function {f!r}") from None


def maximize_1d(f, lo: float, hi: float, tol: float = 1e-10) -> tuple[float, float]:
    """Maximize ``f`` on [lo, hi]: 256-point coarse scan, then golden-section refinement.

    The golden-section bracket is the pair of coarse cells around the best
    coarse point, so the result is correct whenever that bracket holds the
    global maximum and f is unimodal inside it.
    """
    func = _resolve(f, FUNCTIONS)
    if tol < 1e-12:
        raise ValidationError("tol must be >= 1e-12")
    if hi < lo:
        raise ValidationError("need lo <= hi")
    if hi == lo:
        return lo, float(func(lo))
    xs = np.linspace(lo, hi, COARSE_POINTS)
    fs = np.array([func(x) for x in xs])
    k = int(np.argmax(fs))
    a, b = xs[max(k - 1, 0)], xs[min(k + 1, COARSE_POINTS - 1)]
    best_x, best_f = float(xs[k]), float(fs[k])

    c = b - GOLDEN * (b - a)
    d = a + GOLDEN * (b - a)
    fc, fd = func(c), func(d)
    xtol = min(tol, 1e-9) * (1 + abs(a) + abs(b))
    for _ in range(200):
        if b - a <= xtol:
            break
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - GOLDEN * (b - a)
            fc = func(c)
        else:
            a, c, fc = c, d, fd
            d = a + GOLDEN * (b - a)
            fd = func(d)
    for x, fx in ((c, fc), (d, fd)):
        if fx > best_f:
            best_x, best_f = float(x), float(fx)
    return best_x, best_f


def max_abs_kappa3(eta: float, numeric: bool = False) -> float:
    """max over theta of |kappa3(S)| in the Werner state."""
    k3 = scenarios.kappa3_S_numeric if numeric else scenarios.kappa3_S
    return maximize_1d(lambda th: abs(k3(eta, th)), 0.0, 2 * math.pi)[1]


THRESHOLD_FUNCTIONS: dict[str, Callable[[float], float]] = {
    "max_abs_kappa3": max_abs_kappa3,
    "max_abs_kappa3_numeric": lambda eta: max_abs_kappa3(eta, numeric=True),
}


def threshold_bisect(g, lo: float, hi: float, target: float = 0.0, tol: float = 1e-6) -> float:
    """Solve g(x) = target on [lo, hi] by bisection; returns the final midpoint."""
    func = _resolve(g, THRESHOLD_FUNCTIONS)
    glo = func(lo) - target
    if glo == 0:
        return lo
    ghi = func(hi) - target
    if ghi == 0:
        return hi
    if (glo > 0) == (ghi > 0):
        raise NoSignChange(f"g - target has the same sign at {lo} and {hi}")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        gm = func(mid) - target
        if gm == 0:
            return mid
        if (gm > 0) == (glo > 0):
            lo, glo = mid, gm
        else:
            hi = mid
    return 0.5 * (lo + hi)
