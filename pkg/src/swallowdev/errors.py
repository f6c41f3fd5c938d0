"""Exception hierarchy shared by every module.

The CLI maps these onto exit codes: usage problems exit 1, parse problems
exit 2 and mathematical degeneracies exit 3.
"""


class SwallowdevError(Exception):
    """Base class for all errors raised by the package."""

    exit_code = 3


class JetError(SwallowdevError, ValueError):
    """Misuse of jet arithmetic (degree or base-point mismatch)."""

    exit_code = 1


class JetDomainError(SwallowdevError, ArithmeticError):
    """A jet operation left its mathematical domain."""


class ParseError(SwallowdevError, ValueError):
    """Syntax error in an expression or a surface file."""

    exit_code = 2

    def __init__(self, message, position=None, line=None):
        self.message = message
        self.position = position
        self.line = line
        where = []
        if line is not None:
            where.append(f"line {line}")
        if position is not None:
            where.append(f"position {position}")
        text = f"{message} ({', '.join(where)})" if where else message
        super().__init__(text)


class EvaluationError(SwallowdevError, ValueError):
    """An expression could not be evaluated (unbound variable, bad binding)."""

    exit_code = 2


class SpecError(ParseError):
    """A surface file is structurally invalid or violates the frontal condition."""


class DegeneracyError(SwallowdevError):
    """The geometric construction is undefined for this input."""


class ConsistencyError(SwallowdevError):
    """Two independent computations that must agree did not."""
