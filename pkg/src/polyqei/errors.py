"""Exception types shared across polyqei."""


class SingularSystemError(ArithmeticError):
    """Raised when an exact linear system has no unique solution."""


class ConvergenceError(RuntimeError):
    """A numerical procedure failed to reach its tolerance.

    ``best`` carries the last estimate produced before giving up, so callers
    can still report it alongside the diagnostics.
    """

    def __init__(self, message, best=None, diagnostics=None):
        super().__init__(message)
        self.best = best
        self.diagnostics = dict(diagnostics or {})


class ConsistencyError(RuntimeError):
    """A physical consistency check failed (e.g. an energy density below its QEI bound)."""
