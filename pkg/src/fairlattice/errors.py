"""Exception types.

The three direct subclasses of :class:`FairlatticeError` partition failures
by who has to act: ``ConfigError`` (fix the configuration), ``DataError``
(fix the input data), ``CapacityError`` (shrink the problem or raise the
budget). The CLI maps them to distinct exit codes.
"""


class FairlatticeError(Exception):
    """Base class for all errors raised by this package."""


class ConfigError(FairlatticeError):
    """Invalid user-supplied configuration."""


class DataError(FairlatticeError):
    """Input data violates a precondition of the requested operation."""


class CapacityError(FairlatticeError):
    """Requested problem size exceeds the configured memory/work budget."""


class LevelBoundsError(ConfigError):
    """Level index outside 0..m."""


class InvalidSplitError(FairlatticeError):
    """Attempted to split a subgroup at a position that is not a star."""


class MalformedRowError(DataError):
    """A row holds a value outside {0, 1}."""

    def __init__(self, message, row=None):
        super().__init__(message)
        self.row = row


class ModeError(DataError):
    """Confusion-matrix statistics requested from an outcome-only tally."""


class EmptyLevelError(DataError):
    """Every subgroup on the level has an undefined rate."""


class DegenerateVarianceError(DataError):
    """Fewer than two rate samples; variance is meaningless."""


class BenchmarkError(DataError):
    """The theoretical variance benchmark is zero; the ratio is undefined."""


class UnderpopulatedVertexError(DataError):
    """A vertex holds fewer rows than the requested subsample size."""

    def __init__(self, message, vertex=None, count=None):
        super().__init__(message)
        self.vertex = vertex
        self.count = count


class MappingError(DataError):
    """A cell value has no binarization rule mapping."""
