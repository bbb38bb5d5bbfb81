"""Exception hierarchy.

``InputError`` subclasses describe bad input (CLI exit code 1).
``InvariantError`` signals a violated internal assertion (CLI exit code 2).
"""


class InputError(Exception):
    """The input automaton or request is invalid."""


class ParseError(InputError):
    def __init__(self, message: str, line: int):
        self.line = line
        where = f"line {line}: " if line else ""
        super().__init__(where + message)


class AmbiguityError(InputError):
    """The automaton is not unambiguous."""

    def __init__(self, diamond):
        self.diamond = diamond
        super().__init__("automaton is ambiguous: " + diamond.describe())


class AmbiguityViolation(InputError):
    """A matrix product left {0,1}, so the unambiguity precondition was violated."""


class UnreachableError(InputError):
    pass


class PreconditionError(InputError):
    pass


class InvariantError(RuntimeError):
    """A property guaranteed by the theory failed to hold."""
