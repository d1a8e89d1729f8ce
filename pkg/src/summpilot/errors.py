"""Exception taxonomy shared across the pipeline."""

from __future__ import annotations


class SummPilotError(Exception):
    """Base class for all errors raised by this package."""


class InputError(SummPilotError):
    """Invalid caller input: bad encoding, empty document set, oversize body."""


class TemplateError(SummPilotError):
    """A prompt template could not be rendered."""

    def __init__(self, message: str, missing: list[str] | None = None):
        super().__init__(message)
        self.missing = missing or []


class ProviderError(SummPilotError):
    """The completion provider failed after exhausting retries."""

    def __init__(self, message: str, attempts: int = 1):
        super().__init__(message)
        self.attempts = attempts


class ProviderTimeoutError(ProviderError):
    """A completion attempt exceeded its time budget."""


class ProtocolError(SummPilotError):
    """The provider answered, but the payload is not usable."""


class ExtractionEmptyError(SummPilotError):
    """The extraction response contained no parsable triples."""

    def __init__(self, message: str, raw_response: str):
        super().__init__(message)
        self.raw_response = raw_response


class EmptySummaryError(SummPilotError):
    """A summary body is empty where content is required."""


class ConstraintConflictError(SummPilotError):
    """A refinement request includes and excludes the same triples."""

    def __init__(self, overlap: set[int]):
        super().__init__(f"include and exclude overlap on indices {sorted(overlap)}")
        self.overlap = set(overlap)


class ValidationError(SummPilotError):
    """A request referenced indices or versions that do not exist."""
