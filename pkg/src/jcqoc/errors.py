"""Exception types shared across the package."""


class ConfigError(ValueError):
    """A configuration value violates its contract."""


class SectorMismatchError(ValueError):
    """Operands live on incompatible basis sectors."""


class DegenerateGroundStateError(RuntimeError):
    """Ground level is (near-)degenerate; the caller must disambiguate."""


class ZeroPhotonDensityError(ValueError):
    """Normalized photon correlator requested at a site with no photons."""


class IntegrationAccuracyError(RuntimeError):
    """Norm or trace drift exceeded tolerance; reduce the time step."""


class UndefinedSpeedLimitError(ValueError):
    """Speed-limit estimate requested for a trajectory with zero energy fluctuation."""


class ThresholdNotFoundError(RuntimeError):
    """No grid point reached the threshold fidelity."""
