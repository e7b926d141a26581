"""Shared exception taxonomy.

The CLI maps these onto exit codes: UsageError -> 1, ResourceError -> 2,
anything else -> 3.
"""

from __future__ import annotations


class OnomastError(Exception):
    """Base class for all package errors."""


class UsageError(OnomastError):
    """Caller violated an operation precondition (bad arguments, bad config)."""


class ResourceError(OnomastError):
    """A required file or data resource is missing or unreadable."""


class ConfigurationError(OnomastError):
    """Runtime configuration is inconsistent (e.g. unregistered script)."""


class RuleParseError(UsageError):
    """A rule file line could not be parsed; carries the 1-based line number."""

    def __init__(self, message: str, line_no: int | None = None):
        super().__init__(f"line {line_no}: {message}" if line_no is not None else message)
        self.line_no = line_no


class ConflictError(OnomastError):
    """A state transition was requested twice (e.g. re-deciding a candidate)."""
