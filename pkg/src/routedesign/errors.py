"""Exception types shared across the package."""


class RouteDesignError(Exception):
    """Base class for errors raised by this package."""


class ConfigError(RouteDesignError):
    """A configuration value is out of range or inconsistent."""


class SizeLimitError(RouteDesignError):
    """A requested exhaustive computation exceeds the supported problem size."""


class NumericError(RouteDesignError):
    """A linear-algebra step failed (singular or indefinite system)."""
