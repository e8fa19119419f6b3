class ConfigError(ValueError):
    """Invalid engine or stream configuration."""


class DetectorError(RuntimeError):
    """A detector raised while processing a window."""
