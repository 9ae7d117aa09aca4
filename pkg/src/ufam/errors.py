"""Exception hierarchy shared by the library and the CLI."""


class UfamError(Exception):
    """Base class for all errors raised by :mod:`ufam`."""


class DSLError(UfamError, ValueError):
    """A DSL expression could not be parsed."""

    def __init__(self, message: str, text: str = "", pos: int = 0):
        self.message = message
        self.text = text
        self.pos = pos
        super().__init__(self.describe())

    def describe(self) -> str:
        if not self.text:
            return self.message
        return f"{self.message} at position {self.pos}\n  {self.text}\n  {' ' * self.pos}^"


class RejectedGroundSet(UfamError, ValueError):
    """A ground set has no normal form on which run predicates are exact."""


class PreconditionError(UfamError, ValueError):
    """An operation was called outside its documented domain."""
