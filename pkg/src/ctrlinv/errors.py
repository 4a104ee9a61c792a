"""Typed errors shared across the package.

Every failure mode that callers are expected to handle gets its own class;
plain ValueError/TypeError are reserved for programming errors (bad
dimensions, malformed arguments).
"""


class CtrlInvError(Exception):
    """Base class for all package-specific errors."""


class NotControllableError(CtrlInvError):
    """The controllability matrix is identically singular."""


class SingularChangeError(CtrlInvError):
    """A change of variables is singular somewhere on the time interval."""


class IrrationalPoleError(CtrlInvError):
    """A pole of an invariant is not a rational point.

    Exact Laurent data is only available at rational points, so the
    realizability checks refuse to run rather than fall back to floats.
    """


class InsufficientExpansionError(CtrlInvError):
    """A series coefficient beyond the stored truncation was requested."""


class InconsistentSystemError(CtrlInvError):
    """A dependent recurrence equation failed to hold.

    This signals that the rank condition was violated upstream: the
    recurrence has no solution for the requested free values.
    """


class RankDeficientError(CtrlInvError):
    """The field chain matrix is identically singular."""


class PieceMismatchError(CtrlInvError):
    """Per-piece results of a piecewise system disagree where they must not."""


class ExpressionError(CtrlInvError):
    """Syntax or semantic error in an input expression.

    Carries the source position of the offending token when known.
    """

    def __init__(self, message: str, position: int | None = None):
        self.position = position
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)


class DivisionByXPolynomialError(ExpressionError):
    """Division by a state-dependent subexpression was requested."""


class DescriptionError(CtrlInvError):
    """A system description file is malformed."""
