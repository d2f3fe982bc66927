"""Exception hierarchy shared by all modules."""


class UcfError(Exception):
    """Base class for all library errors."""


class ValidationError(UcfError, ValueError):
    """A precondition or type invariant was violated."""


class UniverseMismatchError(ValidationError):
    """Two values over different universes were combined."""


class CapExceededError(UcfError):
    """A resource cap was exceeded; raising it is the caller's decision."""


class ParseError(UcfError):
    """A family or poset file failed to parse."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)
