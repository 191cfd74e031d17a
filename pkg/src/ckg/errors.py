"""Exception hierarchy shared by the solver, diagnostics and run driver."""


class CKGError(Exception):
    """Base class for all errors raised by :mod:`ckg`."""


class ShapeError(CKGError, ValueError):
    """An array does not match the grid it is used with."""


class ParameterError(CKGError, ValueError):
    """A physical or numerical parameter is outside its valid range."""


class BlowUpError(CKGError, FloatingPointError):
    """The numerical solution became non-finite or exceeded the blow-up bound."""

    def __init__(self, step, message="numerical blow-up"):
        self.step = step
        super().__init__(message if step is None else f"{message} at step {step}")


class ResonanceError(CKGError, ArithmeticError):
    """sin(lambda_l * tau) vanishes for some mode, so the velocity cannot be recovered."""

    def __init__(self, mode, tau, value):
        self.mode = mode
        self.tau = tau
        self.value = value
        super().__init__(
            f"mode l={mode} is resonant for tau={tau!r} "
            f"(|sin(lambda_l tau)| = {value:.3e}); choose a different time step"
        )


class ConfigError(CKGError, ValueError):
    """A run configuration is malformed or violates a constraint."""

    def __init__(self, key, message, line=None):
        self.key = key
        self.line = line
        where = f" (line {line})" if line is not None else ""
        super().__init__(f"{key}{where}: {message}")
