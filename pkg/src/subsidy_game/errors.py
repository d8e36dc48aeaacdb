"""Exception and warning types shared across the package."""


class InvalidParameterError(ValueError):
    """A model parameter violates its domain (e.g. T <= 0, g_beta outside [0, 1])."""


class ConfigError(ValueError):
    """Integrator or document configuration is invalid."""


class NumericalOvershootError(ArithmeticError):
    """An integration step left [0, 1] by more than round-off allows."""


class MismatchedGridError(ValueError):
    """Trajectories being compared do not share a time grid."""


class DegenerateParameterWarning(UserWarning):
    """A denominator vanished, so the interior fixed point was skipped."""


class BoundaryWarning(UserWarning):
    """Parameters sit exactly on a regime boundary."""
