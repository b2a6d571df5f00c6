"""Exception hierarchy shared by all sscnav subpackages."""


class SSCNavError(Exception):
    """Base class for errors raised by sscnav."""


class ConfigurationError(SSCNavError, ValueError):
    """Invalid configuration, or shapes that do not match a network's declaration."""

    def __init__(self, message, field=None):
        super().__init__(message if field is None else f"{field}: {message}")
        self.field = field


class UsageError(SSCNavError, RuntimeError):
    """An API was called in an order it does not support."""


class DataError(SSCNavError, ValueError):
    """Input data violates a contract (bad labels, corrupt files)."""


class GenerationError(SSCNavError, RuntimeError):
    """World generation could not satisfy its parameters."""


class NotFoundError(SSCNavError, LookupError):
    """A requested entity (object category, instance) does not exist."""


class CheckpointError(DataError):
    """A checkpoint file is truncated, has the wrong magic, or does not fit the network."""
