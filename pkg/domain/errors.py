from __future__ import annotations

from typing import Optional


class QAccordError(Exception):
    """Base class for every error raised by the library."""


class DimensionMismatch(QAccordError):
    pass


class NotHermitian(QAccordError):
    pass


class NotPSD(QAccordError):
    pass


class NotAState(QAccordError):
    """The matrix fails one of the density-matrix invariants."""


class NotADistribution(QAccordError):
    """Weights are negative or do not sum to one."""


class OutOfRange(QAccordError):
    pass


class ZeroProbabilityOutcome(QAccordError):
    pass


class OptimizerDidNotConverge(QAccordError):
    """
    Pattern search did not shrink its step below the configured tolerance
    within its budget of step reductions and improving moves.
    """

    def __init__(self, message: str, iterations: int, final_step: float) -> None:
        super().__init__(message)
        self.iterations = iterations
        self.final_step = final_step

    def __reduce__(self):
        return type(self), (self.args[0], self.iterations, self.final_step)


class InconsistentMeasure(QAccordError):
    """A correlation measure came out clearly negative (an internal bug)."""


class ConfigurationError(QAccordError):
    pass


class StateFileError(QAccordError):
    """Parse error in a state file; `line` is 1-based when known."""

    def __init__(self, message: str, line: Optional[int] = None) -> None:
        prefix = f"line {line}: " if line is not None else ""
        super().__init__(prefix + message)
        self.message = message
        self.line = line

    def __reduce__(self):
        return type(self), (self.message, self.line)
