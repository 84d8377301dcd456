"""Exception types shared by every layer of the package."""

from __future__ import annotations

__all__ = [
    "WritError",
    "ParseError",
    "UnboundVariable",
    "TypeMismatch",
    "UndeclaredSymbol",
    "DuplicateSymbol",
    "StuckTerm",
    "FuelExhausted",
    "MetaTypeMismatch",
    "MissingInterpretation",
    "ShapeMismatch",
    "UnsupportedSymbol",
]


class WritError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(WritError):
    """Concrete syntax could not be read."""

    def __init__(self, message: str, line: int = 0, column: int = 0):
        self.line = line
        self.column = column
        if line:
            message = f"{line}:{column}: {message}"
        super().__init__(message)


class UnboundVariable(WritError):
    """A variable occurs free without a binding in the typing context."""

    def __init__(self, name: str):
        self.name = name
        super().__init__(f"unbound variable {name!r}")


class TypeMismatch(WritError):
    """A term does not have the type its position requires."""

    def __init__(self, expected: str, actual: str, location: str):
        self.expected = expected
        self.actual = actual
        self.location = location
        super().__init__(f"expected {expected}, got {actual} in {location!r}")


class UndeclaredSymbol(WritError):
    """A constructor, function symbol, or datatype is not in the signature."""

    def __init__(self, name: str):
        self.name = name
        super().__init__(f"undeclared symbol {name!r}")


class DuplicateSymbol(WritError):
    """A symbol would be declared twice in one signature."""

    def __init__(self, name: str):
        self.name = name
        super().__init__(f"symbol {name!r} is already declared")


class StuckTerm(WritError):
    """Defensive: a closed non-value had no applicable rewrite.

    Unreachable for well-typed input over a complete rule set.
    """

    def __init__(self, rendered: str):
        super().__init__(f"no rewrite applies to {rendered!r}")


class FuelExhausted(WritError):
    """The step or depth budget ran out before a value was reached."""

    def __init__(self, steps: int):
        self.steps = steps
        super().__init__(f"fuel exhausted after {steps} steps")


class MetaTypeMismatch(WritError):
    """A metalanguage term is ill-typed."""

    def __init__(self, message: str):
        super().__init__(message)


class MissingInterpretation(WritError):
    """An instantiation has no denotation for a required symbol."""

    def __init__(self, symbol: str, hint: str = ""):
        self.symbol = symbol
        msg = f"no interpretation for symbol {symbol!r}"
        if hint:
            msg += f" ({hint})"
        super().__init__(msg)


class ShapeMismatch(WritError):
    """A semantic value did not have the shape an operation needs."""

    def __init__(self, expected: str, got: object):
        self.expected = expected
        super().__init__(f"expected a {expected}, got {type(got).__name__}")


class UnsupportedSymbol(WritError):
    """The requested analysis has no sound treatment of this symbol."""

    def __init__(self, symbol: str, reason: str = ""):
        self.symbol = symbol
        msg = f"analysis does not support symbol {symbol!r}"
        if reason:
            msg += f": {reason}"
        super().__init__(msg)
