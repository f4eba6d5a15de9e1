"""Exception types shared across the package."""


class HomoglabError(Exception):
    """Base class for all errors raised by homoglab."""


class InputError(HomoglabError, ValueError):
    """An argument is outside the domain of the operation."""


class ParseError(HomoglabError, ValueError):
    """Malformed graph6 text.  ``offset`` is the byte offset of the problem."""

    def __init__(self, message, offset=None):
        if offset is not None:
            message = f"{message} (at byte {offset})"
        super().__init__(message)
        self.offset = offset


class BudgetExceeded(HomoglabError, RuntimeError):
    """A backtracking search hit its node budget.

    ``diagnostics`` holds whatever partial information the search had
    gathered (node count, generators found so far, ...).
    """

    def __init__(self, message, **diagnostics):
        super().__init__(message)
        self.diagnostics = diagnostics


class NotApplicable(HomoglabError):
    """The operation's structural precondition does not hold for this input."""
