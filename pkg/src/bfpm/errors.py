"""Exception hierarchy. Everything subclasses ValueError so callers can catch broadly."""


class BFPMError(ValueError):
    """Base class for errors raised by this package."""


class DataError(BFPMError):
    """Malformed or inconsistent input data."""


class ComputationError(BFPMError):
    """A numerical procedure hit a degenerate state it cannot resolve."""
