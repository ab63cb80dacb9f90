"""Exception hierarchy shared by all stepscatter modules."""


class StepScatterError(Exception):
    """Base class for all stepscatter errors."""


class ConfigError(StepScatterError):
    """Invalid configuration value or malformed config file."""


class NonPositiveWavenumberError(ConfigError):
    """Incident wavenumber must be strictly positive."""


class DegenerateEnergyError(ConfigError):
    """k equals kappa0 for a repulsive step; downstream quantities diverge."""


class WrongRegimeError(StepScatterError):
    """Operation called outside its energy regime (propagating vs evanescent)."""


class NoZeroFoundError(StepScatterError):
    """Root bracketing scan found no sign change; indicates an implementation bug."""


class QuadratureNotConvergedError(StepScatterError):
    """Adaptive quadrature exceeded its subdivision budget."""


class SpectralGuardError(StepScatterError):
    """Spectral window of a wave packet crosses the propagating-branch boundary."""


class GridTooSmallError(StepScatterError):
    """Spatial grid does not contain the packet support at the requested time."""


class EmptyChannelError(StepScatterError):
    """Channel norm below threshold; moments are undefined."""


class BadFitWindowError(StepScatterError):
    """Trajectory fit window is contaminated by a nonlinear regime."""
