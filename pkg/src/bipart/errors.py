class InvalidInput(ValueError):
    """Raised when an input violates an operation's precondition."""


class ResourceExceeded(RuntimeError):
    """Raised when an exact search runs past its node budget.

    Exhausting the budget never produces an answer; callers either raise it
    further or record the instance as undecided.
    """
