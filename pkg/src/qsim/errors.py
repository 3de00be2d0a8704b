"""Exception hierarchy shared by every qsim module."""


class QsimError(Exception):
    """Base class for all simulator errors."""


class DomainError(QsimError, ValueError):
    """An argument lies outside the operation's domain."""


class CapacityError(QsimError):
    """The requested register exceeds the configured qubit guard."""


class ContractViolation(QsimError):
    """A precondition on state or gate structure was broken."""


class DegenerateStateError(QsimError):
    """Measurement was requested on a state with (numerically) zero norm."""


class NoFactorFound(QsimError):
    """Factoring gave up; the partial trace is kept on ``run``."""

    def __init__(self, message, run=None):
        super().__init__(message)
        self.run = run
