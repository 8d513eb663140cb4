"""Exceptions raised by matsman; each carries the exit code the CLI reports."""

from typing import Optional


class MatsmanError(Exception):
    exit_code = 2


class SignatureError(MatsmanError):
    """Raised for an ill-formed signature, an ill-formed formula, or when two
    structures that must share a signature do not."""


class FormulaSyntaxError(MatsmanError):
    """Raised by the formula parser.

    Attributes:
        position: zero-based character offset of the offending token.
    """

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class EvaluationError(MatsmanError):
    """Raised when a formula mentions a variable the assignment does not bind."""

    def __init__(self, variable: str):
        super().__init__(f"unbound variable {variable!r}")
        self.variable = variable


class NotACongruenceError(MatsmanError):
    pass


class PreconditionError(MatsmanError):
    pass


class CapExceededError(MatsmanError):
    exit_code = 3

    def __init__(self, what: str, needed: int, cap: int, flag: Optional[str] = None):
        hint = f"; raise {flag}" if flag else ""
        super().__init__(f"{what} needs {needed}, cap is {cap}{hint}")
        self.needed = needed
        self.cap = cap


class FixtureError(MatsmanError):
    exit_code = 4
