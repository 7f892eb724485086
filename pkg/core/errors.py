from typing import FrozenSet, Optional


class CalculusError(Exception):
    """Base class for every error raised by the calculus engine."""


class BadParameter(CalculusError, ValueError):
    """An argument lies outside its documented range."""


class PreconditionViolated(CalculusError):
    """An operation was applied to a state that does not satisfy its precondition."""


class UnknownGenerator(CalculusError):
    """A word mentions a generator id the presentation does not declare."""


class InconsistentIdentification(CalculusError):
    """The two loop lists of a Van Kampen amalgamation have different lengths."""


class BasisMismatch(CalculusError):
    """Divisor classes or forms are expressed in different bases."""


class NonIntegralGenus(CalculusError):
    """Riemann-Hurwitz produced an odd 2g-2 or a negative genus."""


class NonIntegralValue(CalculusError):
    """A rational quantity that must be an integer is not."""


class UnknownSurface(CalculusError, KeyError):
    """A surface name is not tracked by the state."""

    def __str__(self) -> str:
        return str(self.args[0]) if self.args else "unknown surface"


class DisconnectedConfiguration(CalculusError):
    """The surfaces handed to resolve do not form a connected configuration."""


class GenusMismatch(CalculusError):
    pass


class NormalBundleMismatch(CalculusError):
    pass


class NotATorus(CalculusError):
    pass


class MissingComplementFact(CalculusError):
    pass


class UnknownBlock(CalculusError):
    pass


class UnknownPipeline(CalculusError):
    pass


class PresentationSyntaxError(CalculusError):
    """A presentation file could not be parsed."""


class DslError(CalculusError):
    """An error in a construction script, located by 1-based line and column."""

    def __init__(self, message: str, line: int = 0, column: int = 0):
        super().__init__(message)
        self.message = message
        self.line = line
        self.column = column

    def __str__(self) -> str:
        return f"line {self.line}:{self.column}: {self.message}"


class DslSyntaxError(DslError):
    def __init__(self, line: int, column: int, token: str, expected: FrozenSet[str]):
        expected_text = ", ".join(sorted(expected)) or "end of input"
        super().__init__(f"unexpected {token!r}, expected {expected_text}", line, column)
        self.token = token
        self.expected = expected


class UnboundName(DslError):
    pass


class RebindingError(DslError):
    pass


class ArityMismatch(DslError):
    pass


class DslRuntimeError(DslError):
    """Wraps an engine error raised while a statement was being evaluated."""

    def __init__(self, cause: Exception, line: int, column: int):
        super().__init__(f"{type(cause).__name__}: {cause}", line, column)
        self.cause: Optional[Exception] = cause
