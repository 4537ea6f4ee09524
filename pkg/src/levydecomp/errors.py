"""Exception types shared across the package."""


class LevyDecompError(Exception):
    """Base class for all package-specific failures."""


class QuadratureError(LevyDecompError):
    """A numeric integral failed to converge to the requested tolerance."""


class TruncationError(LevyDecompError):
    """No truncation radius satisfying the tail rule exists below the hard cap."""


class CurvatureDivergenceError(LevyDecompError):
    """The small-frequency curvature ratio of the exponent diverges."""


class UnsupportedModelError(LevyDecompError):
    """No exact increment sampler is available for the requested model."""


class RejectionBudgetError(LevyDecompError):
    """The rejection sampler exhausted its proposal budget."""


class HorizonError(LevyDecompError):
    """A path is too short for the requested functional window."""


class ConfigError(LevyDecompError):
    """An experiment configuration is malformed or inconsistent."""
