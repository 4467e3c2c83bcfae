"""Exception hierarchy shared across the package."""


class DispmonError(Exception):
    """Base class for all package errors."""


class DomainError(DispmonError, ValueError):
    """Input outside the documented domain of an operation."""


class ShapeError(DispmonError, ValueError):
    """Array length / grid mismatch between related series."""


class DataError(DispmonError, ValueError):
    """Non-finite or otherwise unusable sample values."""


class NumericError(DispmonError, ArithmeticError):
    """Linear solve failed; carries condition diagnostics when available."""

    def __init__(self, msg, condition=None):
        super().__init__(msg)
        self.condition = condition


class GapError(DispmonError):
    """Time discontinuity in a sample stream; carries the gap boundaries."""

    def __init__(self, msg, t_before, t_after):
        super().__init__(msg)
        self.t_before = t_before
        self.t_after = t_after


class FrameError(DispmonError, ValueError):
    """A malformed wire frame; skipped and counted, never fatal."""


class ConflictError(DispmonError):
    """Operation rejected by the acquisition state machine."""


class NotFoundError(DispmonError, KeyError):
    """Unknown experiment id."""


class PersistenceError(DispmonError, OSError):
    """Storage-layer failure; caller may retry."""
