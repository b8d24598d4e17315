"""Exception types shared across the package."""


class SupportError(ValueError):
    """Parameter value outside the model's declared support."""


class LatentError(ValueError):
    """Latent source incompatible with the requested simulation."""


class FeatureError(ValueError):
    """Feature-matrix width or layout mismatch."""


class OracleUnavailableError(RuntimeError):
    """Exact density requested for a model that has none."""


class ExplosionError(RuntimeError):
    """Population simulation exceeded its cap before the horizon.

    Carries the parameter value and the number of grid points recorded
    before the blow-up so callers can log or auto-reject.
    """

    def __init__(self, message, theta=None, partial_length=None):
        super().__init__(message)
        self.theta = theta
        self.partial_length = partial_length


class ConfigError(ValueError):
    """Experiment configuration failed validation."""

    def __init__(self, errors):
        if isinstance(errors, str):
            errors = [errors]
        self.errors = list(errors)
        super().__init__("; ".join(self.errors))
