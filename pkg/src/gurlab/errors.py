"""Exception and warning types shared across the package."""


class GurError(Exception):
    """Base class for all errors raised by gurlab."""


class ValidationError(GurError, ValueError):
    pass


class DimensionError(GurError, ValueError):
    pass


class NotHermitian(ValidationError):
    pass


class InvalidState(ValidationError):
    pass


class EigenvalueOnBranchCut(GurError, ArithmeticError):
    pass


class NotDiagonalizable(GurError, ArithmeticError):
    pass


class ZeroExpectation(GurError, ArithmeticError):
    pass


class ZeroObservable(GurError, ValueError):
    pass


class NonCommuting(GurError, ValueError):
    pass


class DegenerateVariance(GurError, ArithmeticError):
    pass


class EtaOutOfRange(GurError, ValueError):
    pass


class UnknownInequality(GurError, KeyError):
    pass


class BindingError(GurError, ValueError):
    pass


class NoSignChange(GurError, ValueError):
    pass


class ProblemFileError(GurError, ValueError):
    pass


class OutOfConvergenceRegion(UserWarning):
    """The cumulant power series is not guaranteed to converge at this parameter."""


class SmallParameterWarning(UserWarning):
    """A truncated (small-parameter) relation was evaluated at a large parameter."""
