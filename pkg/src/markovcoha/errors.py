"""Exception hierarchy shared by all modules."""


class MarkovCohaError(Exception):
    """Base class for every error raised by the package."""


class InputError(MarkovCohaError, ValueError):
    """Malformed or inconsistent user input (bad quiver, vertex mismatch...)."""


class WindowError(MarkovCohaError, ValueError):
    """An operation would lose information held in a truncated series."""


class ComputationRefused(MarkovCohaError):
    """A computation finished but its output fails a certification check."""


class IntegralityError(ComputationRefused):
    """A BPS invariant did not come out as a Laurent polynomial."""


class InterpolationError(ComputationRefused):
    """Holdout samples disagree with the interpolated polynomial."""


class BudgetExceeded(MarkovCohaError):
    """Enumeration would exceed the configured budget."""


class NonGenericError(MarkovCohaError):
    """Stability condition is not generic on the requested box."""


class ReductionError(MarkovCohaError):
    """Formal 2-cycle elimination did not converge within the truncation."""
