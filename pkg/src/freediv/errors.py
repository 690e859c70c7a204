"""Exception types shared across the package."""
from __future__ import annotations


class FreedivError(Exception):
    """Base class for every error raised by the package."""


class InputError(FreedivError, ValueError):
    """Malformed or out-of-contract input."""


class Inconclusive(FreedivError):
    """The truncation order is too small to decide the question."""


class InternalInconsistency(FreedivError):
    """A computed certificate failed its own re-verification."""


class CertificationError(FreedivError):
    """A Saito certification was rejected.

    ``reason`` is one of ``NOT_REDUCED``, ``NOT_LOGARITHMIC`` (``index`` is the
    offending candidate) or ``DET_NOT_UNIT_MULTIPLE``.
    """

    def __init__(self, reason: str, index: int | None = None, detail: str = ""):
        self.reason = reason
        self.index = index
        label = reason if index is None else f"{reason}({index})"
        super().__init__(f"{label}: {detail}" if detail else label)


class UnsupportedEigenvalues(FreedivError):
    """Eigenvalues outside the rationals were required."""
