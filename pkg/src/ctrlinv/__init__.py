"""Exact computer algebra for single-input control systems.

The package computes invariants of linear non-autonomous systems, decides
whether meromorphic tuples arise as such invariants, constructs analytic
series solutions of the associated ODE with a certified convergence
radius, and decides local analytic linearizability of affine systems.
All arithmetic is exact over the rationals.
"""

from .errors import (
    CtrlInvError,
    DescriptionError,
    DivisionByXPolynomialError,
    ExpressionError,
    InconsistentSystemError,
    InsufficientExpansionError,
    IrrationalPoleError,
    NotControllableError,
    PieceMismatchError,
    RankDeficientError,
    SingularChangeError,
)
from .poly import Rat, RationalFunction, UniPoly, falling_factorial, rf_derivative

__all__ = [
    "CtrlInvError",
    "DescriptionError",
    "DivisionByXPolynomialError",
    "ExpressionError",
    "InconsistentSystemError",
    "InsufficientExpansionError",
    "IrrationalPoleError",
    "NotControllableError",
    "PieceMismatchError",
    "RankDeficientError",
    "SingularChangeError",
    "Rat",
    "RationalFunction",
    "UniPoly",
    "falling_factorial",
    "rf_derivative",
]

__version__ = "0.1.0"
