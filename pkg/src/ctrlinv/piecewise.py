"""Piecewise entries: one rational branch per subinterval of the time axis.

Supports coefficients like t^3*|t|, which are rational on each side of a
breakpoint but not globally.  Smoothness across breakpoints is verified to
the extent the representation allows (values and t-derivatives evaluated
exactly from both sides); a mismatch produces a warning-level diagnostic
rather than an error, since callers may knowingly work with rougher data.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Union

from .poly import Rat, RationalFunction
from .xpoly import XPoly

Branch = Union[RationalFunction, XPoly]


@dataclass(frozen=True)
class PiecewiseRF:
    """Branches of a piecewise function over [interval[0], interval[1]].

    breakpoints are strictly increasing interior points; piece i lives on
    [breakpoints[i-1], breakpoints[i]] with the obvious end conventions.
    """

    interval: tuple[Fraction, Fraction]
    breakpoints: tuple[Fraction, ...]
    pieces: tuple[Branch, ...]

    def __init__(
        self,
        interval: tuple[Rat, Rat],
        breakpoints: Sequence[Rat],
        pieces: Sequence[Branch],
    ):
        lo, hi = Fraction(interval[0]), Fraction(interval[1])
        bps = tuple(Fraction(b) for b in breakpoints)
        if lo >= hi:
            raise ValueError("empty or degenerate interval")
        if any(not (lo < b < hi) for b in bps):
            raise ValueError("breakpoints must be interior to the interval")
        if any(b1 >= b2 for b1, b2 in zip(bps, bps[1:])):
            raise ValueError("breakpoints must be strictly increasing")
        if len(pieces) != len(bps) + 1:
            raise ValueError("piece count must be breakpoint count + 1")
        object.__setattr__(self, "interval", (lo, hi))
        object.__setattr__(self, "breakpoints", bps)
        object.__setattr__(self, "pieces", tuple(pieces))

    def subintervals(self) -> list[tuple[Fraction, Fraction]]:
        cuts = [self.interval[0], *self.breakpoints, self.interval[1]]
        return list(zip(cuts, cuts[1:]))

    def branch_at(self, t: Rat) -> Branch:
        t = Fraction(t)
        lo, hi = self.interval
        if not lo <= t <= hi:
            raise ValueError(f"{t} outside the interval")
        for bp, piece in zip(self.breakpoints, self.pieces):
            if t < bp:
                return piece
        return self.pieces[-1]


def _t_derivative(branch: Branch) -> Branch:
    if isinstance(branch, XPoly):
        return branch.t_derivative()
    return branch.derivative()


def _value_at(branch: Branch, t: Fraction):
    if isinstance(branch, XPoly):
        return branch.eval_t(t)
    return branch.eval(t)


def continuity_diagnostics(pw: PiecewiseRF, smoothness: int, label: str = "entry") -> list[str]:
    """Check agreement of values and derivatives up to order `smoothness`.

    Returns human-readable warnings; empty when the requested continuity
    class holds at every breakpoint.  A branch whose coefficients are not
    defined at a breakpoint is itself reported.
    """
    warnings: list[str] = []
    for i, bp in enumerate(pw.breakpoints):
        left, right = pw.pieces[i], pw.pieces[i + 1]
        for order in range(smoothness + 1):
            try:
                lv = _value_at(left, bp)
                rv = _value_at(right, bp)
            except ZeroDivisionError:
                warnings.append(
                    f"{label}: branch undefined at breakpoint t={bp} "
                    f"(derivative order {order})"
                )
                break
            if lv != rv:
                warnings.append(
                    f"{label}: derivative of order {order} jumps at t={bp} "
                    f"(left {lv}, right {rv})"
                )
            left = _t_derivative(left)
            right = _t_derivative(right)
    return warnings
