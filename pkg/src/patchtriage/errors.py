"""Exception and warning types shared across the package."""


class PatchTriageError(Exception):
    """Base class for every domain error raised by this package."""


class InvalidCategory(PatchTriageError, ValueError):
    pass


class DiffParseError(PatchTriageError, ValueError):
    """Malformed normal-format diff text.

    ``line`` is the 1-based line number of the offending input line.
    """

    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


class DiffApplyError(PatchTriageError, ValueError):
    """Edit script does not fit the file it is being applied to."""


class SchemaError(PatchTriageError, ValueError):
    """Record violates the dataset schema. ``index`` is the 0-based record index."""

    def __init__(self, message: str, index: int | None = None):
        if index is not None:
            message = f"record {index}: {message}"
        super().__init__(message)
        self.index = index


class InvalidRatio(PatchTriageError, ValueError):
    pass


class EmptyDiff(PatchTriageError, ValueError):
    pass


class EmptySummary(PatchTriageError, ValueError):
    pass


class EmptyCompletion(PatchTriageError, ValueError):
    pass


class EmptyText(PatchTriageError, ValueError):
    pass


class BackendUnavailable(PatchTriageError, RuntimeError):
    pass


class DimensionMismatch(PatchTriageError, ValueError):
    pass


class TooFewPoints(PatchTriageError, ValueError):
    pass


class DegenerateSeeding(PatchTriageError, ValueError):
    pass


class LengthMismatch(PatchTriageError, ValueError):
    pass


class NotFound(PatchTriageError, LookupError):
    pass


class NotReady(PatchTriageError, RuntimeError):
    pass


class Busy(PatchTriageError, RuntimeError):
    pass


class ConflictingLabelWarning(UserWarning):
    """Identical summary text carries two different category labels."""


class SparseCategoryWarning(UserWarning):
    """A category had too few items to stratify; all of them went to train."""


class ExcludedRecordWarning(UserWarning):
    """Records were left out of an aggregation because required fields were missing."""
