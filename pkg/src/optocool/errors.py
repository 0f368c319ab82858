class OptocoolError(Exception):
    """Base class for all library errors."""


class DomainError(OptocoolError, ValueError):
    """An input violates a physical or mathematical precondition."""


class ScenarioError(OptocoolError, ValueError):
    """A scenario document failed to parse or validate."""


class NumericalError(OptocoolError, ArithmeticError):
    """A linear solve or closed form could not be evaluated reliably."""


class SingularSystemError(NumericalError):
    def __init__(self, msg, condition=None, eigenvalue=None):
        super().__init__(msg)
        self.condition = condition
        self.eigenvalue = eigenvalue


class PoleError(NumericalError):
    """Evaluation too close to a pole of a closed-form expression."""


class DegenerateDarkStateError(DomainError):
    pass
