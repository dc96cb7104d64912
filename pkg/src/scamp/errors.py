"""Exception types shared across the package."""


class NeverHeraldedError(RuntimeError):
    """No branch of the amplifier can produce the heralding pattern."""


class InsufficientSignalError(ValueError):
    """Estimator inputs carry no usable signal (zero counts or vanishing exponent)."""


class InvalidEpsilonError(ValueError):
    """Interferometer imperfection too large for the given reference intensity."""


class ConfigError(ValueError):
    """Invalid or malformed run configuration."""
