"""Exception hierarchy shared by every module."""


class QubitDeskError(Exception):
    pass


class DomainError(QubitDeskError, ValueError):
    """An argument lies outside the operation's domain."""


class ResourceError(QubitDeskError):
    """The request would need a dense object larger than we allow."""


class ValidationError(QubitDeskError, ValueError):
    """A matrix failed its structural check (unitary, stochastic, ...)."""


class StateCorruptionError(QubitDeskError):
    """A state drifted off its norm invariant; never renormalized silently."""


class RecoveryError(QubitDeskError):
    """Period or factor recovery exhausted its attempt budget."""


class CircuitParseError(QubitDeskError):
    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno
