"""Numerical checks of cumulant-based uncertainty relations for finite-dimensional observables."""

from .bch import bch_partial_sum, bch_terms, k2_coefficient, k3_coefficient, z_exact
from .cumulant import cgf, cross_cumulants, cumulant_table, cumulants_single
from .errors import GurError
from .gur import INEQUALITIES, GurReport, evaluate
from .qmat import Observable, State, density_state, observable, pure_state
from .tolerances import DEFAULT, Tolerances

__all__ = [
    "DEFAULT",
    "INEQUALITIES",
    "GurError",
    "GurReport",
    "Observable",
    "State",
    "Tolerances",
    "bch_partial_sum",
    "bch_terms",
    "cgf",
    "cross_cumulants",
    "cumulant_table",
    "cumulants_single",
    "density_state",
    "evaluate",
    "k2_coefficient",
    "k3_coefficient",
    "observable",
    "pure_state",
    "z_exact",
]

__version__ = "0.1.0"
