"""Exception types and the tri-state ``Unknown`` answer."""

from __future__ import annotations


class McdLabError(Exception):
    """Base class for every error raised by the package."""


class DomainError(McdLabError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class TruncationExceeded(McdLabError):
    """A question needs sequence terms beyond an explicit prefix or truncation."""


class SearchOverflow(McdLabError):
    """A bounded search hit its node cap before finishing."""

    def __init__(self, message: str, nodes: int | None = None):
        super().__init__(message)
        self.nodes = nodes


class HypothesisViolation(McdLabError, ValueError):
    """A precondition required by an algorithm does not hold."""


class InvariantViolation(McdLabError, AssertionError):
    """A postcondition check failed. Always a library bug."""


class SpecValidationError(McdLabError, ValueError):
    """Raised by :func:`mcd_lab.spec.validate`; carries every violation found."""

    def __init__(self, violations: list[str]):
        super().__init__("; ".join(violations))
        self.violations = list(violations)


class Unknown:
    """Answer that could not be decided inside truncation ``K``.

    Deliberately refuses ``bool()`` so an unknown answer can never be
    mistaken for ``False``.
    """

    __slots__ = ("truncation", "reason")

    def __init__(self, truncation: int, reason: str = ""):
        self.truncation = truncation
        self.reason = reason

    def __bool__(self):
        raise TypeError("Unknown answer has no truth value; test with is_unknown()")

    def __eq__(self, other):
        return (isinstance(other, Unknown) and other.truncation == self.truncation
                and other.reason == self.reason)

    def __hash__(self):
        return hash((Unknown, self.truncation, self.reason))

    def __repr__(self):
        return f"Unknown(K={self.truncation}, reason={self.reason!r})"


def is_unknown(answer) -> bool:
    return isinstance(answer, Unknown)
