"""Exception types shared across the package."""


class ConfigError(ValueError):
    """Raised for invalid configuration input (bad field, unknown key, bad file)."""


class NumericError(RuntimeError):
    """Raised when a numeric routine fails (no convergence, non-finite result)."""


class StepError(NumericError):
    """Coupled pump step failed to converge.

    Carries the simulation time and the last pressure residual so a failing
    run can be diagnosed from the exception alone.
    """

    def __init__(self, message, t=None, residual=None):
        super().__init__(message)
        self.t = t
        self.residual = residual
