"""Exception hierarchy for gradmode."""


class GradmodeError(Exception):
    """Base class for all gradmode errors."""


class NonPositiveMaterial(GradmodeError, ValueError):
    """Permittivity or permeability is not strictly positive."""

    def __init__(self, message, index=None, x=None):
        super().__init__(message)
        self.index = index
        self.x = x


class OutOfDomain(GradmodeError, ValueError):
    """A tabulated profile was asked to extrapolate."""


class LengthMismatch(GradmodeError, ValueError):
    pass


class ConvergenceFailure(GradmodeError, RuntimeError):
    pass


class NotConstantIndex(GradmodeError, ValueError):
    """The product eps*mu varies by more than the requested tolerance."""

    def __init__(self, max_deviation, x_at):
        super().__init__(
            f"eps*mu is not constant: max relative deviation {max_deviation:.3e} at x = {x_at:.6g}"
        )
        self.max_deviation = max_deviation
        self.x_at = x_at


class ShiftMismatch(GradmodeError, ValueError):
    """Spectra were computed on different grids or at different k0."""


class ConfigError(GradmodeError, ValueError):
    def __init__(self, message, path=""):
        super().__init__(f"{path}: {message}" if path else message)
        self.path = path
