"""Exception types shared across the toolkit."""

from __future__ import annotations


class TranslatorKitError(Exception):
    """Base class for all toolkit errors."""


class DomainError(TranslatorKitError):
    """An argument violates a documented domain restriction.

    ``param`` names the offending argument so callers (notably the CLI) can
    report machine-readable errors.
    """

    def __init__(self, param: str, message: str):
        super().__init__(message)
        self.param = param


class StepSizeError(TranslatorKitError):
    """An ODE integration produced non-finite or non-monotone output."""


class NotAGraphError(TranslatorKitError):
    """A mesh half is not single-valued over the sweep plane.

    ``cell`` holds the center of the offending projection cell; ``t`` is set
    by sweep drivers to the plane position at which the check failed.
    """

    def __init__(self, message: str, cell: tuple[float, float] | None = None):
        super().__init__(message)
        self.cell = cell
        self.t: float | None = None


class NoContactError(TranslatorKitError):
    """A first-contact sweep exhausted its parameter range without touching."""


class FileFormatError(TranslatorKitError):
    """A profile or mesh file does not match the documented format."""
