class GfaError(Exception):
    """Base class for all errors raised by gfagraph."""


class ConfigurationError(GfaError, ValueError):
    """Invalid hyperparameters, shapes, strategy names or configuration keys."""


class DomainError(GfaError, ValueError):
    """Numerical input outside the domain of an operation, e.g. negative scores or non-finite data."""


class ParseError(GfaError):
    """Malformed image, tensor or configuration file.

    The message names the byte offset at which parsing failed, if known.
    """

    def __init__(self, message: str, offset: int | None = None):
        self.offset = offset
        if offset is not None:
            message = f"{message} (at byte offset {offset})"
        super().__init__(message)
