"""Exception hierarchy shared by all polylab modules."""


class PolylabError(Exception):
    """Base class for every error raised by polylab."""


class ConfigurationError(PolylabError, ValueError):
    """Invalid parameters or experiment configuration."""


class DomainError(PolylabError, ValueError):
    """Input lies outside the domain of an operation (zero vector, bad r, ...)."""


class ResourceError(PolylabError, MemoryError):
    """Requested allocation exceeds the configured memory cap."""


class SolverError(PolylabError, RuntimeError):
    """The simplex solver could not reach a reliable answer."""

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = dict(diagnostics or {})


class NetError(PolylabError, RuntimeError):
    """Net construction ran out of probe budget before reaching the target radius."""

    def __init__(self, message, achieved_radius=float("nan")):
        super().__init__(message)
        self.achieved_radius = achieved_radius
