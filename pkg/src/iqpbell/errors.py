"""Exception hierarchy shared by every module."""


class IQPBellError(Exception):
    """Base class for all errors raised by iqpbell."""


class InputShapeError(IQPBellError, ValueError):
    """A bit string, vector or mask has the wrong length or range."""


class QubitCountMismatch(IQPBellError, ValueError):
    pass


class CircuitParseError(IQPBellError, ValueError):
    """Malformed circuit file. ``location`` names the line or field at fault."""

    def __init__(self, message, location=None):
        self.location = location
        if location:
            message = f"{location}: {message}"
        super().__init__(message)


class ResourceError(IQPBellError, RuntimeError):
    """Requested qubit count exceeds the configured cap."""


class ImpossibleEventError(IQPBellError, RuntimeError):
    """Conditioning on an event of (numerically) zero probability."""
