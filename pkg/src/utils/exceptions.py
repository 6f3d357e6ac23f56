"""
Custom Error Classes for Better Error Handling
"""


class ArtmapError(Exception):
    """Base exception for the clustering engine"""

    pass


class DimensionMismatchError(ArtmapError):
    """Raised when a sample does not have the feature count the model was built with"""

    pass


class RangeShrinkError(ArtmapError):
    """Raised when weights are asked to re-scale onto a narrower data range"""

    pass


class IndexUndefinedError(ArtmapError):
    """Raised when a validity index is requested with fewer than two clusters"""

    pass


class InternalConsistencyError(ArtmapError):
    """Raised when incremental bookkeeping drifts away from its batch definition"""

    pass


class EmptyModelError(ArtmapError):
    """Raised when predicting with a model that has not seen any sample"""

    pass


class CompressionNotConvergedError(ArtmapError):
    """Raised when the inner compression network exceeds its epoch cap"""

    pass


class ConfigError(ArtmapError):
    """Raised when an experiment or model configuration is invalid"""

    pass


class DatasetError(ArtmapError):
    """Raised when a dataset file is missing, empty or malformed"""

    pass


class MetricInputError(ArtmapError):
    """Raised when evaluation metrics receive unusable label vectors"""

    pass
