"""Exception types shared across the package."""


class ConfigError(ValueError):
    """Invalid configuration file, key, or value."""


class BudgetError(RuntimeError):
    """A dense assembly would exceed the configured entry budget."""
