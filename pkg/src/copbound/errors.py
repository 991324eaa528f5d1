"""Exception hierarchy shared by the whole package."""


class CopboundError(Exception):
    """Base class for every error raised by copbound."""


class GraphError(CopboundError, ValueError):
    """Invalid graph construction or generator parameter."""


class Graph6Error(GraphError):
    """Malformed graph6 input."""


class DisconnectedGraphError(GraphError):
    pass


class InstanceTooLarge(CopboundError):
    """An exact solver refused an instance above its vertex cap."""


class BudgetExceeded(CopboundError):
    """A state-space estimate or exploration exceeded its budget."""


class NotApplicable(CopboundError):
    """A strategy's diameter precondition does not hold."""


class IllegalMove(CopboundError):
    """A policy emitted a move of distance greater than one."""

    def __init__(self, message, state=None):
        super().__init__(message)
        self.state = state
