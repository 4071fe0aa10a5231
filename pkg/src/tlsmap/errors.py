"""Exception types shared across the package."""


class ValidationError(ValueError):
    """A physical parameter, grid, or configuration value is out of range."""


class ConfigError(ValidationError):
    """A configuration file failed to parse or validate.

    Carries the offending key and line number when known.
    """

    def __init__(self, message, key=None, line=None):
        self.key = key
        self.line = line
        prefix = ""
        if line is not None:
            prefix += f"line {line}: "
        if key is not None:
            prefix += f"key '{key}': "
        super().__init__(prefix + message)


class MapFormatError(ValueError):
    """A map file is malformed (bad magic, header, or payload length)."""


class CalibrationError(RuntimeError):
    """Probe-pulse calibration could not reach a usable population."""

    def __init__(self, message, achieved=None):
        self.achieved = achieved
        super().__init__(message)


class DegenerateSteadyStateError(RuntimeError):
    """The Liouvillian kernel is not one-dimensional (multiple steady states)."""
