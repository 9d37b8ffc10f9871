"""Shared exception types for the risk engine."""

from __future__ import annotations


class ValidationError(ValueError):
    """A domain value or reference violates an invariant.

    Carries a stable machine-readable ``code`` so that the model-file
    validator and the HTTP service can turn raised errors into structured
    diagnostics without string matching.
    """

    def __init__(self, code: str, message: str):
        super().__init__(message)
        self.code = code
        self.message = message


class UnsupportedTopologyError(ValidationError):
    """The sub-network between two nodes is not series-parallel reducible."""
