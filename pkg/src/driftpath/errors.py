"""Exception hierarchy.

Each class carries the process exit code the command line maps it to.
"""


class DriftPathError(Exception):
    exit_code = 3


class ConfigError(DriftPathError):
    """Invalid configuration, flags or arguments."""

    exit_code = 1


class DataError(DriftPathError):
    """Input data that cannot be parsed or is inconsistent."""

    exit_code = 2


class ComputationError(DriftPathError):
    exit_code = 3


class UnknownStateError(ComputationError):
    """A queried cell is not part of the transition matrix state set."""

    status = "unknown_state"

    def __init__(self, cell, message=None):
        self.cell = cell
        super().__init__(message or f"cell {cell:x} is not a state of the transition matrix")


class DisconnectedError(ComputationError):
    """No path exists between origin and destination in the current graph."""

    status = "disconnected"

    def __init__(self, origin, destination):
        self.origin = origin
        self.destination = destination
        super().__init__(f"no path from {origin:x} to {destination:x}")
