"""Shared exception types."""


class ConfigError(ValueError):
    """A problem configuration failed to parse or validate."""


class ResourceLimitError(RuntimeError):
    """A computation exceeded one of the configured resource caps."""
