"""Exception types shared across the package."""


class BstError(Exception):
    """Base class for every error raised by bstree."""


class InputError(BstError, ValueError):
    """Bad arguments: out-of-range ids, self-loops, invalid parameters."""


class ParseError(InputError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class InfeasibleInstanceError(BstError):
    """Some terminal cannot be reached from the others."""


class ContractViolation(BstError):
    """A precondition on a tree or edge set does not hold."""


class RefusalError(BstError):
    """The operation declines to run (size limits, unmet preconditions)."""
