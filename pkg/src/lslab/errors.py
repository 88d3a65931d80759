"""Shared exception types."""


class BudgetExceeded(ValueError):
    """An exhaustive scan or enumeration would exceed the configured budget.

    Raised instead of silently sampling: callers asked for an exact answer.
    """


class InstanceFormatError(ValueError):
    """An instance file is malformed, has an unknown version, or is inconsistent."""


class ConfigError(ValueError):
    """An experiment configuration is invalid (unknown keys, bad references)."""
