"""Exception hierarchy shared by all cptsim modules."""


class CPTError(Exception):
    """Base class for cptsim errors."""


class InvalidArgumentError(CPTError, ValueError):
    """Malformed quantum numbers, unknown names, mismatched dimensions."""


class DegenerateInputError(CPTError, ValueError):
    """An analytic construction needs an amplitude that is zero."""


class SingularityError(CPTError, ArithmeticError):
    """A denominator (e.g. a one-photon detuning) vanishes."""


class NumericalError(CPTError, ArithmeticError):
    """A linear solve or integration failed its residual check."""


class NonUniqueSteadyStateError(NumericalError):
    """The Liouvillian has more than one stationary state."""
