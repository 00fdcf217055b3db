"""Exception types shared across the package."""


class TreemtError(Exception):
    """Base class for all errors raised by treemt."""


class InputError(TreemtError, ValueError):
    """Malformed input: unknown vertex, bad edge, invalid structure."""


class PreconditionError(TreemtError, ValueError):
    """An operation was called outside its documented domain."""


class BudgetExceeded(TreemtError, RuntimeError):
    """An exhaustive enumeration would exceed its size budget."""


class ConsistencyError(TreemtError, RuntimeError):
    """An internal invariant failed; indicates a bug rather than bad input."""


class ParseError(InputError):
    """Syntax error in a tree or presentation file.

    ``line`` and ``column`` are 1-based; either may be ``None`` when the error
    is not tied to a location (e.g. a missing production).
    """

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}" + (f", column {column}" if column is not None else "") + ": "
        super().__init__(where + message)
