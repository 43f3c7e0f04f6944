"""Exception types shared across the package."""


class InvalidSizeError(ValueError):
    """A transform or matrix extent is not usable (non power-of-two, empty, ...)."""


class ShapeError(ValueError):
    """Buffer shapes disagree with what an operation requires."""


class BoundsError(IndexError):
    """A row/column interval falls outside the matrix it addresses."""


class PlanMisuseError(ValueError):
    """A plan was executed with data of a different kind than it was built for."""


class PartitionError(ValueError):
    """An extent cannot be divided into the requested number of equal parts."""


class ConfigError(ValueError):
    """An execution or planning configuration is inconsistent."""


class RegistryError(KeyError):
    """A task name was resolved that was never registered."""


class ProtocolError(RuntimeError):
    """A collective received a message whose tag or size does not match its own call."""


class CommunicationError(RuntimeError):
    """A transport-level failure (peer gone, timeout, broken frame)."""
