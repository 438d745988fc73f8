"""Exception hierarchy shared by every module."""


class SSRError(Exception):
    """Base class for all errors raised by this package."""


class LayoutError(SSRError, ValueError):
    """A basis label does not match the declared mode layout."""


class EmptyStateError(SSRError, ValueError):
    """An operation needed a nonzero state and got the zero vector."""


class ConfigurationError(SSRError, ValueError):
    """Unsupported or malformed configuration (e.g. a non-Abelian rule)."""


class DomainError(SSRError, ValueError):
    """Input is valid but outside the operation's domain (e.g. a product state
    handed to a distillation routine)."""


class ResourceLimitError(DomainError):
    """A requested copy count or truncation exceeds the configured bound."""


class CutoffTooSmallError(DomainError):
    """Fock truncation discards more weight than the configured bound."""

    def __init__(self, message: str, loss: float):
        super().__init__(message)
        self.loss = loss


class ConsistencyError(SSRError, RuntimeError):
    """An internal cross-check failed. This indicates a bug, not bad input."""


class ParseError(SSRError, ValueError):
    """Syntax or semantic error in a state expression."""

    def __init__(self, message: str, line: int = 1, column: int = 1):
        super().__init__(f"{message} (line {line}, column {column})")
        self.reason = message
        self.line = line
        self.column = column
