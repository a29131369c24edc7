"""Exception hierarchy shared by all warmq modules."""


class WarmqError(Exception):
    """Base class for every error raised by warmq."""


class InvalidStateError(WarmqError, ValueError):
    """Matrix fails the density-matrix checks (Hermitian, unit trace, PSD)."""


class NotHermitianError(InvalidStateError):
    pass


class WrongDimensionError(WarmqError, ValueError):
    pass


class IndexOutOfRangeError(WarmqError, IndexError):
    pass


class InvalidBipartitionError(WarmqError, ValueError):
    pass


class InvalidFrequencyError(WarmqError, ValueError):
    pass


class NegativeTimeError(WarmqError, ValueError):
    pass


class ZeroTemperatureError(WarmqError, ValueError):
    pass


class StepBudgetExceeded(WarmqError, RuntimeError):
    pass


class NotEntangledError(WarmqError, ValueError):
    pass


class NumericalIntegrityError(WarmqError, ArithmeticError):
    """A quantity that must be non-negative (or bracketed) came out inconsistent."""


class NoConvergenceError(NumericalIntegrityError):
    pass


class SearchExhausted(WarmqError, RuntimeError):
    """Random search ran out of trials; ``best`` holds the largest value seen."""

    def __init__(self, message, best=0.0):
        super().__init__(message)
        self.best = best
