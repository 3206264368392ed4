"""Exception hierarchy shared across the package."""


class EomechError(Exception):
    """Base class for all errors raised by eomech."""


class DimensionError(EomechError, ValueError):
    """Matrix has the wrong shape for the requested operation."""


class PhysicalityError(EomechError, ValueError):
    """Numbers that should describe a physical Gaussian state do not."""


class InstabilityError(EomechError):
    """The drift matrix is not Hurwitz, so no steady state exists."""


class BogoliubovDomainError(EomechError, ValueError):
    """Bogoliubov transformation requested with G+ >= G-."""


class ConfigurationError(EomechError, ValueError):
    """Invalid user configuration (sweep spec, geometry, config file)."""


class OracleFailure(EomechError):
    """The time-domain covariance integration diverged."""
