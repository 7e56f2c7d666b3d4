class CapacityError(ValueError):
    """Requested enumeration or matrix is too large."""


class PreparationError(RuntimeError):
    """State preparation by forward annealing did not reach the target."""


class ConfigError(ValueError):
    """Malformed or inconsistent experiment configuration."""
