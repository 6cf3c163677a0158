"""Exception hierarchy shared by every netcover module."""


class NetcoverError(Exception):
    """Base class for all errors raised by netcover."""


class GraphError(NetcoverError):
    """Malformed network: bad lengths, self-loops, disconnection, unknown ids."""


class AssumptionError(NetcoverError):
    """An edge is longer than the covering radius where that is not allowed."""


class ModelError(NetcoverError):
    """Inconsistent model or solution (internal bug or corrupted input)."""


class BackendError(NetcoverError):
    """MILP backend missing or crashed."""


class GuardError(NetcoverError):
    """A brute-force routine refused to run because the instance is too large."""
