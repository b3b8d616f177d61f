"""Exception hierarchy shared by all modules."""


class NStirapError(Exception):
    """Base class for all package errors."""


class UnnormalizedState(NStirapError):
    """A state vector violates the unit-norm requirement."""


class DivisionByZeroDetuning(NStirapError):
    """A mixing parameter or resonance condition was requested at zero detuning."""


class ZeroRabiR(NStirapError):
    """Dark-state construction requires a nonzero R coupling."""


class NoSolution(NStirapError):
    """The phase-matching wavevector triangle cannot be closed."""


class ScheduleError(NStirapError):
    """Invalid pulse-schedule parameters or discontinuous piecewise envelope."""


class StepSizeUnderflow(NStirapError):
    """Adaptive step control drove the step below the minimum step size."""


class InvariantBreach(NStirapError):
    """A density-matrix invariant (trace, Hermiticity) drifted beyond tolerance."""


class PumpTimeout(NStirapError):
    """Optical-pumping preparation did not reach threshold within the horizon."""


class ParseError(NStirapError):
    """Config file could not be parsed."""


class ValidationError(NStirapError):
    """Config violates one or more invariants; message lists all of them."""

    def __init__(self, problems):
        self.problems = list(problems)
        super().__init__("; ".join(self.problems))
