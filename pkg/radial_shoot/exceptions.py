"""
Global radial_shoot exception classes.
"""


class RadialShootError(Exception):
    """Base class for every error raised by the package."""
    pass


class ImproperlyConfigured(RadialShootError):
    """A component is missing a required attribute."""
    pass


class ConfigError(RadialShootError):
    """The run configuration could not be parsed or validated."""
    pass


class InvalidModel(RadialShootError):
    """The nonlinearity definition is malformed."""
    pass


class OutOfDomain(RadialShootError):
    """A point lies outside the domain (gamma_*^-, gamma_*]."""

    def __init__(self, s, lower, upper):
        self.s = s
        self.lower = lower
        self.upper = upper
        super().__init__(f"{s!r} is outside the domain ({lower!r}, {upper!r}]")


class LandmarkNotFound(RadialShootError):
    """A level crossing required by the landmark definitions does not exist."""
    pass


class LevelNotAttained(RadialShootError):
    """F never takes the requested level on the requested interval."""
    pass


class MissingLandmark(RadialShootError):
    """A theorem constant needs a landmark that the model does not have."""
    pass


class IntegrationError(RadialShootError):
    """Base class for numeric failures of the initial value problem."""
    pass


class OscillationFault(IntegrationError):
    """More sign changes than the configured cap; carries the truncated trajectory."""

    def __init__(self, message, trajectory=None):
        self.trajectory = trajectory
        super().__init__(message)


class StepFailure(IntegrationError):
    """The step size controller gave up."""
    pass


class OutOfRange(RadialShootError):
    """A radius outside the computed part of a trajectory was requested."""
    pass


class MalformedTrajectory(RadialShootError):
    """Zeros and extrema of a trajectory do not interleave."""
    pass


class AmbiguousClassification(RadialShootError):
    """The classification margin is below the decision threshold."""

    def __init__(self, message, margin=None):
        self.margin = margin
        super().__init__(message)


class SearchError(RadialShootError):
    """Base class for search failures."""
    pass


class InvalidRange(SearchError):
    pass


class NoSignSplit(SearchError):
    pass


class NotFound(SearchError):
    pass


class NotFoundAtResolution(NotFound):
    """No pair was found even at the finest grid that was tried."""

    def __init__(self, message, grid_points=None):
        self.grid_points = grid_points
        super().__init__(message)


class CommandDoesNotExist(RadialShootError):
    """The requested subcommand is unknown or not allowed."""
    pass
