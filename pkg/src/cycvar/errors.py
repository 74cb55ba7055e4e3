"""Exception types shared across the package."""


class CycvarError(Exception):
    """Base class for all package errors."""


class ParseError(CycvarError):
    """Input text does not conform to the expression grammar."""

    def __init__(self, message: str, position: int | None = None):
        self.position = position
        if position is not None:
            message = f"{message} (at column {position + 1})"
        super().__init__(message)


class PreconditionError(CycvarError):
    """An operation was invoked on data that violates its contract."""


class IdentityFailure(CycvarError):
    """A structural identity suite reported a counterexample."""


class BoundExceeded(CycvarError):
    """A configured resource bound (jet order, search budget) was hit."""
