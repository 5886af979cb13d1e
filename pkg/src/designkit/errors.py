"""Exception types shared across the toolkit.

Every error that a caller may reasonably want to catch and respond to gets
its own class here, with enough payload attached (bracket, best value,
iteration history, ...) to diagnose the failure without re-running.
"""


class DesignError(Exception):
    """Base class for all toolkit errors."""


class PolarDataError(DesignError, ValueError):
    """Polar table violates a structural requirement (row count,
    monotonicity, negative drag)."""


class PolarFormatError(PolarDataError):
    """A polar file could not be parsed.  ``line`` is the 1-based line
    number of the offending row, or None if the problem is file-wide."""

    def __init__(self, message, line=None):
        super().__init__(message if line is None else f"line {line}: {message}")
        self.line = line


class GeometryError(DesignError, ValueError):
    """Blade or wing geometry is unusable (non-positive chord, bad tables,
    cutout outside (0, 1), ...)."""


class NoRootError(DesignError):
    """The inflow-angle residual has no sign change in the scanned bracket.

    ``stations`` lists the nondimensional radial positions that failed,
    ``bracket`` the (lo, hi) interval that was scanned.
    """

    def __init__(self, message, stations=(), bracket=None):
        super().__init__(message)
        self.stations = tuple(stations)
        self.bracket = bracket


class TrimError(DesignError):
    """Collective trim could not reach the requested thrust.  ``t_max`` is
    the largest thrust [N] achieved on the scanned collective range."""

    def __init__(self, message, t_max=None):
        super().__init__(message)
        self.t_max = t_max


class StallLimitError(DesignError, ValueError):
    """A wing sizing was requested at a wing loading above the stall limit."""


class EngineCapacityError(DesignError):
    """Required shaft power exceeds what the engine can deliver at the
    geared speed.  ``required_w`` / ``available_w`` are in watts."""

    def __init__(self, message, required_w=None, available_w=None):
        super().__init__(message)
        self.required_w = required_w
        self.available_w = available_w


class DivergenceError(DesignError):
    """A fixed-point iteration failed to converge.  ``history`` holds the
    iterates produced before giving up."""

    def __init__(self, message, history=()):
        super().__init__(message)
        self.history = list(history)


class SimulationAbort(DesignError):
    """The flight simulation left its valid envelope (gimbal lock, ...).
    ``t`` is the simulation time [s] at abort."""

    def __init__(self, message, t=None):
        super().__init__(message)
        self.t = t


class MissionTimeout(DesignError):
    """The vehicle failed to capture all waypoints before the time limit.
    ``remaining_m`` is the distance [m] to the active waypoint at timeout."""

    def __init__(self, message, remaining_m=None, waypoint_index=None):
        super().__init__(message)
        self.remaining_m = remaining_m
        self.waypoint_index = waypoint_index


class ConfigError(DesignError, ValueError):
    """A run specification (JSON config, CLI override) is malformed."""
