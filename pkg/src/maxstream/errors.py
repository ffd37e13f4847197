"""Exception types shared across the package."""

from __future__ import annotations


class ResourceLimitError(RuntimeError):
    """Raised when an iterative procedure hits its configured resource ceiling.

    Carries whatever partial result is certifiable at that point (for the
    path metrics, the best known bracket on the true value).
    """

    def __init__(self, message: str, *, lower: float | None = None,
                 upper: float | None = None):
        super().__init__(message)
        self.lower = lower
        self.upper = upper
