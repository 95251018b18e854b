"""Exception hierarchy shared by the solvers, oracles and the CLI."""


class RelsndError(Exception):
    """Base class for every error raised by relsnd."""


class InvalidArgumentError(RelsndError, ValueError):
    """A precondition on the arguments does not hold."""


class InfeasibleError(RelsndError):
    """An LP or flow request cannot be met.

    `violated` holds the offending LP row when the LP is infeasible;
    `max_value` holds the largest achievable flow when a flow amount is not.
    """

    def __init__(self, message: str, violated=None, max_value=None):
        super().__init__(message)
        self.violated = violated
        self.max_value = max_value


class StructuralError(RelsndError):
    """The graph does not have the structure an algorithm relies on."""


class ResourceLimitError(RelsndError):
    """An enumeration budget, size guard or iteration cap was exceeded."""


class InternalLogicError(RelsndError):
    """A property that holds by proof failed at runtime."""


class InstanceFormatError(RelsndError, ValueError):
    """An instance or solution file is malformed."""
