"""Exception types shared by every module of the kernel.

Errors are reserved for malformed inputs and out-of-range requests.  Law
violations found by the checkers are data (reports), not exceptions.
"""

from __future__ import annotations


class KernelError(Exception):
    """Base class for every error raised by this package."""


class ValidationError(KernelError):
    """Input data is structurally malformed (bad keys, missing tables, ...)."""


class MissingCell(ValidationError):
    """A map refers to a cell that was never declared."""


class GlobularViolation(ValidationError):
    """Source/target maps break the globular relations.

    Carries the full list of offending ``(dimension, cell)`` pairs in
    ``self.violations``.
    """

    def __init__(self, violations):
        self.violations = list(violations)
        lines = ", ".join(f"dim {i}: {u} ({which})" for i, u, which in self.violations)
        super().__init__(f"globular relations violated at {lines}")


class DimOutOfRange(KernelError):
    """A dimension beyond the declared truncation was requested."""


class IndexOutOfRange(KernelError):
    """A tuple position outside 1..width was requested."""


class ParseError(ValidationError):
    """Text input could not be parsed."""


class ShapeViolation(ValidationError):
    """A dimension table breaks the shape constraint i_k > i'_k, i_{k+1} > i'_k."""

    def __init__(self, position: int, message: str):
        self.position = position
        super().__init__(f"at k={position}: {message}")


class NotComposable(KernelError):
    """Two cells were composed whose iterated boundaries do not match."""

    def __init__(self, message: str, left_boundary=None, right_boundary=None):
        self.left_boundary = left_boundary
        self.right_boundary = right_boundary
        super().__init__(message)


class InversesAbsent(KernelError):
    """An inverse table was requested on a structure that has none."""


class NotAGroup(ValidationError):
    """A multiplication table fails the group laws."""


class NotAbelian(ValidationError):
    """A commutative multiplication table was required but not supplied."""


class GluingViolation(KernelError):
    """Entries of a tuple fail a gluing equation.

    ``self.position`` is the 1-based index of the first failing equation.
    """

    def __init__(self, position: int, message: str):
        self.position = position
        super().__init__(f"gluing equation {position}: {message}")


class NotNatural(ValidationError):
    """A family of per-object choices fails naturality."""
