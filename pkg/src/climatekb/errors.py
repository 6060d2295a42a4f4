"""Exception types shared across the package."""

from __future__ import annotations


class ClimateKBError(Exception):
    """Base class for all errors raised by this package."""


class IngestError(ClimateKBError):
    """A corpus input file could not be ingested."""

    def __init__(self, message: str, line_number: int | None = None):
        self.line_number = line_number
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)


class DuplicateArticleIdError(IngestError):
    def __init__(self, article_id: str, line_number: int | None = None):
        self.article_id = article_id
        super().__init__(f"duplicate article id {article_id!r}", line_number)


class LexiconError(ClimateKBError):
    """A lexicon or data file is malformed."""


class EvaluationError(ClimateKBError):
    """Predictions and gold labels cannot be aligned."""


class ExtractionFailure(ClimateKBError):
    """A causal sentence yielded no usable cause/effect mention pair."""


class IntegrityError(ClimateKBError):
    """A knowledge-base operation would violate referential integrity."""


class AssociationFileError(ClimateKBError):
    """An association curation file is invalid."""

    def __init__(self, message: str, row_number: int | None = None):
        self.row_number = row_number
        if row_number is not None:
            message = f"row {row_number}: {message}"
        super().__init__(message)


class TurtleSyntaxError(ClimateKBError):
    """A Turtle document does not conform to the supported grammar subset."""

    def __init__(self, message: str, line: int, column: int):
        self.line = line
        self.column = column
        super().__init__(f"line {line}, column {column}: {message}")


class TurtleImportError(ClimateKBError):
    """A syntactically valid Turtle document cannot be mapped back to a KB."""


class ProfileError(ClimateKBError):
    """Questionnaire answers do not form a valid value profile."""

    def __init__(self, message: str, field: str | None = None):
        self.field = field
        super().__init__(message)


class ConfigError(ClimateKBError):
    """A run configuration file is invalid."""
