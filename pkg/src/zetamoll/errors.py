"""Exception types shared across the package."""


class InvalidArgumentError(ValueError):
    """A precondition on an operation's arguments was violated."""


class BudgetExceededError(RuntimeError):
    """The configured work budget (pair count, panel count) would be exceeded."""


class DegradedPrecisionError(RuntimeError):
    """An accuracy target was not reached and strict mode is on."""


class InvalidResultError(RuntimeError):
    """A computation produced a value outside its meaningful range."""
