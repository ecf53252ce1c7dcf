"""Exception hierarchy shared by all unwindsim modules."""


class UnwindSimError(Exception):
    """Base class for every error raised by this package."""


class InvalidAngle(UnwindSimError):
    """Angle input is NaN or infinite."""


class InvalidRotation(UnwindSimError):
    """Matrix is not orthonormal with determinant +1 (tol 1e-9)."""


class OutOfBounds(UnwindSimError):
    """Query position lies outside the occupancy grid."""


class InvalidEndpoint(UnwindSimError):
    """Planner start or goal is inside an occupied cell or off the map."""


class NoPath(UnwindSimError):
    """Goal is not reachable from start on the given grid."""


class Stuck(UnwindSimError):
    """Every sampled velocity command was rejected by the safety check."""


class TraceTooShort(UnwindSimError):
    """Scripted head trace ends before the replay does."""


class SeriesMismatch(UnwindSimError):
    """Paired time series have different lengths."""


class InvalidSeverity(UnwindSimError):
    """Questionnaire severity outside {0, 1, 2, 3}."""


class DegeneratePointing(UnwindSimError):
    """Pointing ray is too close to vertical to project onto the floor."""


class DegenerateGeometry(UnwindSimError):
    """Origin and final position coincide; home direction undefined."""


class InvalidInput(UnwindSimError):
    """Statistical test input violates its preconditions."""


class InsufficientData(UnwindSimError):
    """Too few usable observations for the requested test."""


class DegenerateVariance(UnwindSimError):
    """Paired differences have zero variance; t statistic undefined."""


class FormatError(UnwindSimError):
    """JSON document missing or carrying the wrong "format" tag."""
