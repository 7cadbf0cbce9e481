"""Exception hierarchy shared by all chadd modules."""


class ChaddError(Exception):
    """Base class for errors raised by this package."""


class InputError(ChaddError, ValueError):
    """Invalid argument, malformed file, or incompatible combination of inputs."""


class ResourceError(ChaddError):
    """A dense simulation would exceed the supported Hilbert-space size."""


class NumericalError(ChaddError):
    """Accumulated numerical error exceeded tolerance (e.g. loss of unitarity)."""
