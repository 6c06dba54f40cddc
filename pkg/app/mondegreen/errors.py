"""Exception hierarchy for the Mondegreen pipeline.

Library code raises these; the CLI maps ``exit_code`` to the process status and
the HTTP layer maps them to response codes.
"""
from typing import Optional


class MondegreenError(Exception):
    """Base class for every error raised by the pipeline."""

    exit_code: int = 1


class EmptyQueryError(MondegreenError, ValueError):
    """Raised when a query has no non-whitespace character."""

    exit_code = 2

    def __init__(self, raw: str = "") -> None:
        super().__init__(f"empty query: {raw!r}")
        self.raw = raw


class LogParseError(MondegreenError, ValueError):
    """A log line does not match the tab-separated record format."""

    exit_code = 3

    def __init__(self, message: str, line_number: Optional[int] = None, line: str = "") -> None:
        where = f"line {line_number}: " if line_number is not None else ""
        super().__init__(f"{where}{message}")
        self.line_number = line_number
        self.line = line


class RecordInvariantError(LogParseError):
    """A record parsed but violates a QueryLogRecord invariant."""


class OrderingError(MondegreenError, ValueError):
    """Records are not grouped by user and sorted by timestamp."""

    exit_code = 4


class SnapshotError(MondegreenError):
    """Base class for rewrite snapshot failures."""

    exit_code = 5


class SnapshotMissingError(SnapshotError, FileNotFoundError):
    """The snapshot file does not exist."""


class SnapshotCorruptError(SnapshotError, ValueError):
    """A snapshot line or header cannot be parsed."""

    def __init__(self, message: str, line_number: Optional[int] = None) -> None:
        where = f"line {line_number}: " if line_number is not None else ""
        super().__init__(f"{where}{message}")
        self.line_number = line_number


class DuplicateKeyError(SnapshotCorruptError):
    """A query key appears more than once in a snapshot."""


class SnapshotVersionError(SnapshotError):
    """The snapshot was written by an incompatible format version."""


class LexiconError(MondegreenError, ValueError):
    """A pronouncing lexicon file is malformed or uses unknown phonemes."""

    exit_code = 6


class ConfigError(MondegreenError, ValueError):
    """Configuration values are missing or out of range."""

    exit_code = 7


class ConfusionLexiconError(MondegreenError, ValueError):
    """The confusion lexicon is malformed or cannot satisfy the simulator config."""

    exit_code = 8


class EvaluationError(MondegreenError, ValueError):
    """Evaluation inputs are empty or inconsistent."""

    exit_code = 9


class UsageError(MondegreenError):
    """Unknown subcommand or flag."""

    exit_code = 64


class InputFileError(MondegreenError, FileNotFoundError):
    """A required input file does not exist."""

    exit_code = 66
