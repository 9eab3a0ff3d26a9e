"""Shared exception types."""


class PreconditionError(ValueError):
    """An operation's stated precondition was violated."""
