"""Exception hierarchy shared by all modules."""


class TwwError(ValueError):
    """Base class for domain errors (CLI exit code 1)."""


class GraphError(TwwError):
    pass


class PartitionError(TwwError):
    pass


class SequenceError(TwwError):
    """Malformed contraction sequence; ``step`` is the offending merge index."""

    def __init__(self, message, step=None):
        super().__init__(message)
        self.step = step


class PreconditionError(TwwError):
    pass


class GuardError(TwwError):
    """Input too large for an exhaustive routine."""


class BudgetError(TwwError):
    """Search budget exhausted before an exact answer was proven."""


class InvariantError(RuntimeError):
    """A property guaranteed by construction failed; indicates a bug."""
