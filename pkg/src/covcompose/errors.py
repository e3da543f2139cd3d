"""Exception types shared across the package."""


class ComposeError(Exception):
    """Base class for every error this package raises deliberately."""


class DimensionTooSmall(ComposeError):
    """Derivative stencils need at least a 3x3 grid."""


class DimensionMismatch(ComposeError):
    """Two operands that must share a shape do not."""


class ImageTooSmall(ComposeError):
    """The region grid does not fit inside the image."""


class ConvergenceFailure(ComposeError):
    """The symmetric eigensolver failed to converge."""


class NotPositiveDefinite(ComposeError):
    """A matrix required to be positive-definite is not."""


class NotNearlyPSD(ComposeError):
    """A covariance has substantially negative eigenvalues (upstream bug)."""


class DegenerateImage(ComposeError):
    """The image carries no structure the saliency transform can see."""


class WeightOutOfRange(ComposeError):
    """A region weight lies outside [0, 1]."""


class ConfigError(ComposeError):
    """Base class for run-configuration problems."""


class UnknownKey(ConfigError):
    """A config file names a key that does not exist."""


class BadValue(ConfigError):
    """A config value fails validation."""


class MissingInput(ConfigError):
    """A required input (file, flag) is absent or unreadable."""


class UnknownPreset(ConfigError):
    """The requested experiment preset does not exist."""
