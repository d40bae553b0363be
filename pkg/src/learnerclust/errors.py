"""Exception hierarchy shared by every stage of the pipeline.

``DataError`` subclasses describe problems with the input data (the CLI
exits with status 2); ``UsageError`` subclasses describe bad configuration
or arguments (exit status 1).
"""


class LearnerClustError(Exception):
    """Base class for all package errors."""


class DataError(LearnerClustError):
    """The input data cannot be processed."""


class UsageError(LearnerClustError):
    """The configuration or arguments are invalid."""


class MalformedLine(DataError, ValueError):
    """An access-log line does not have the Common Log Format shape."""


class IoFailure(DataError, OSError):
    """An input source could not be read."""


class InvalidShape(DataError, ValueError):
    """Dataset and cluster count are incompatible (for example n < c)."""


class ShapeMismatch(DataError, ValueError):
    """Arrays passed together do not agree in shape."""


class DegenerateCluster(DataError, ArithmeticError):
    """A cluster lost all of its weight during a center update."""

    def __init__(self, cluster, iteration=None):
        self.cluster = cluster
        self.iteration = iteration
        where = "" if iteration is None else f" at iteration {iteration}"
        super().__init__(f"cluster {cluster} has zero total weight{where}")


class KeyMismatch(DataError, KeyError):
    """Two tables that must share keys do not."""

    def __str__(self):
        return str(self.args[0]) if self.args else ""


class InvalidRule(UsageError, ValueError):
    """Region thresholds violate their ordering constraints."""


class InvalidSpec(UsageError, ValueError):
    """A synthetic archetype specification is inconsistent."""


class ConfigError(UsageError, ValueError):
    """A configuration file or value is invalid."""
