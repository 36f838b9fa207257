"""Exception types shared across the package."""


class SwarmPaintError(Exception):
    """Base class for all package-specific errors."""


class DegenerateHand(SwarmPaintError):
    """Hand frame has no usable scale (zero palm size or coincident landmarks)."""


class InvalidFrame(SwarmPaintError):
    """Hand frame contains non-finite coordinates or the wrong landmark count."""


class ModelError(SwarmPaintError):
    """Classifier input/weights are inconsistent with the model definition."""


class ConfigError(SwarmPaintError):
    """A configuration value or file is out of its documented range."""


class EmptyStroke(SwarmPaintError):
    """Operation requires at least one stroke point."""


class DegenerateStroke(SwarmPaintError):
    """Stroke has fewer than two distinct points, so it has no arc length."""


class CoincidentSource(SwarmPaintError):
    """A repulsive source coincides exactly with the queried position."""


class DegenerateAnova(SwarmPaintError):
    """F statistic undefined: zero variance both between and within groups."""
