"""Numerical tolerances used throughout the package, in one place."""

from dataclasses import dataclass, replace


@dataclass(frozen=True)
class Tolerances:
    hermiticity: float = 1e-12      # relative to max-abs entry
    normalization: float = 1e-12
    psd: float = 1e-12
    report: float = 1e-10           # GurReport.satisfied threshold
    violation: float = 1e-9         # region extraction in sweeps
    zero_expectation: float = 1e-300
    branch_cut_angle: float = 1e-8
    branch_cut_modulus: float = 1e-12
    eigvec_condition: float = 1e12
    commutator: float = 1e-10
    variance: float = 1e-12
    series_term: float = 1e-16

    def with_overrides(self, **kwargs) -> "Tolerances":
        return replace(self, **kwargs)


DEFAULT = Tolerances()
