"""Exception hierarchy shared across the package."""


class DefuzzError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(DefuzzError):
    """Malformed micro-target source text."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class ValidationError(DefuzzError):
    """A structurally well-formed program violates an invariant."""


class TargetResolutionError(DefuzzError):
    """No entry of a target spec could be mapped onto the program."""


class TokenizeError(DefuzzError):
    """Source text contains a byte the lexer cannot handle."""

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        if line is not None:
            message = f"{message} at line {line}, column {column}"
        super().__init__(message)


class TrainingError(DefuzzError):
    """Training cannot proceed (bad corpus, diverged loss, ...)."""


class DataError(DefuzzError):
    """An input file exists but its contents are unusable."""
