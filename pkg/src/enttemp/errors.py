"""Exception types shared across the package."""


class InvalidInputError(ValueError):
    """Raised when an argument violates an operation's precondition."""


class ResourceLimitError(RuntimeError):
    """Raised when a dense computation would exceed the supported system size."""


class InfeasibleError(ValueError):
    """Raised when an extraction request exceeds the available Schmidt rank."""


class DegeneracyError(RuntimeError):
    """Raised when a degenerate top Schmidt value makes an expansion ill-defined."""


class ConvergenceError(RuntimeError):
    """Raised when an iterative search fails to converge.

    Carries the best iterate found so far in ``state`` / ``energy`` so callers
    can inspect or resume.
    """

    def __init__(self, message, state=None, energy=None):
        super().__init__(message)
        self.state = state
        self.energy = energy


class RegularizationWarning(UserWarning):
    """Emitted when a rank-deficient density matrix is floored before taking a log."""
