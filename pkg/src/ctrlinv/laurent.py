"""Truncated Laurent expansions of rational functions at rational points.

An expansion stores exact coefficients from its lowest order (negative for
poles) up to a truncation order.  All arithmetic tracks how far the result
is still trustworthy, so downstream consumers can never silently read a
coefficient that was not actually computed.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

from .errors import InsufficientExpansionError
from .poly import Rat, RationalFunction, UniPoly


class LaurentExpansion:
    """Exact truncated Laurent series of a function at a rational point.

    `coeffs[i]` is the coefficient of (t - point)^(lowest + i); every
    order from `lowest` through `trunc` is stored.  An identically-zero
    expansion has an empty coefficient tuple.
    """

    __slots__ = ("point", "lowest", "coeffs", "trunc")

    def __init__(
        self,
        point: Rat,
        lowest: int,
        coeffs: Iterable[Rat],
        trunc: int | None = None,
    ):
        cs = [Fraction(c) for c in coeffs]
        if trunc is None:
            trunc = lowest + len(cs) - 1
        if lowest + len(cs) - 1 != trunc:
            raise ValueError("coefficient count does not match truncation order")
        # Normalize: drop leading zeros so `lowest` is the true order.
        while cs and cs[0] == 0:
            cs.pop(0)
            lowest += 1
        if not cs:
            lowest = 0  # irrelevant for the zero expansion
        self.point = Fraction(point)
        self.lowest = lowest
        self.coeffs = tuple(cs)
        self.trunc = trunc

    @classmethod
    def zero_through(cls, point: Rat, trunc: int) -> "LaurentExpansion":
        """The zero expansion with all coefficients through `trunc` known zero."""
        out = object.__new__(cls)
        out.point = Fraction(point)
        out.lowest = 0
        out.coeffs = ()
        out.trunc = trunc
        return out

    # -- queries -------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        """True when every computed coefficient vanishes."""
        return not self.coeffs

    def coefficient(self, order: int) -> Fraction:
        """Exact coefficient of (t - point)^order; raises beyond truncation."""
        if order > self.trunc:
            raise InsufficientExpansionError(
                f"coefficient at order {order} requested, expansion truncated at {self.trunc}"
            )
        if self.is_zero or order < self.lowest:
            return Fraction(0)
        return self.coeffs[order - self.lowest]

    @property
    def pole_order(self) -> int:
        return max(0, -self.lowest) if not self.is_zero else 0

    def items(self) -> list[tuple[int, Fraction]]:
        return [(self.lowest + i, c) for i, c in enumerate(self.coeffs)]

    # -- arithmetic ----------------------------------------------------

    def _require_same_point(self, other: "LaurentExpansion") -> None:
        if self.point != other.point:
            raise ValueError("expansions at different points")

    def __add__(self, other: "LaurentExpansion") -> "LaurentExpansion":
        self._require_same_point(other)
        trunc = min(self.trunc, other.trunc)
        if self.is_zero and other.is_zero:
            return LaurentExpansion.zero_through(self.point, trunc)
        low = min(
            self.lowest if not self.is_zero else trunc + 1,
            other.lowest if not other.is_zero else trunc + 1,
        )
        cs = [
            self.coefficient(k) + other.coefficient(k) for k in range(low, trunc + 1)
        ]
        return LaurentExpansion(self.point, low, cs, trunc)

    def __neg__(self) -> "LaurentExpansion":
        return LaurentExpansion(
            self.point, self.lowest, [-c for c in self.coeffs], self.trunc
        )

    def __sub__(self, other: "LaurentExpansion") -> "LaurentExpansion":
        return self + (-other)

    def scale(self, c: Rat) -> "LaurentExpansion":
        c = Fraction(c)
        if c == 0:
            return LaurentExpansion.zero_through(self.point, self.trunc)
        return LaurentExpansion(
            self.point, self.lowest, [c * a for a in self.coeffs], self.trunc
        )

    def __mul__(self, other: "LaurentExpansion") -> "LaurentExpansion":
        self._require_same_point(other)
        if self.is_zero and other.is_zero:
            return LaurentExpansion.zero_through(self.point, self.trunc + other.trunc + 1)
        if self.is_zero or other.is_zero:
            # The product stays known-zero through trunc_zero + lowest_other:
            # the zero factor's unknown tail starts above its truncation.
            zero, nz = (self, other) if self.is_zero else (other, self)
            return LaurentExpansion.zero_through(self.point, zero.trunc + nz.lowest)
        trunc = min(self.trunc + other.lowest, other.trunc + self.lowest)
        low = self.lowest + other.lowest
        out = [Fraction(0)] * (trunc - low + 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            oi = self.lowest + i
            for j, b in enumerate(other.coeffs):
                order = oi + other.lowest + j
                if order > trunc:
                    break
                out[order - low] += a * b
        return LaurentExpansion(self.point, low, out, trunc)

    def derivative(self) -> "LaurentExpansion":
        """Termwise d/dt; the truncation order drops by one."""
        cs = []
        for order, c in self.items():
            if order != 0:
                cs.append((order - 1, c * order))
        trunc = self.trunc - 1
        if not cs:
            return LaurentExpansion.zero_through(self.point, trunc)
        low = cs[0][0]
        out = [Fraction(0)] * (trunc - low + 1)
        for order, c in cs:
            if order <= trunc:
                out[order - low] = c
        return LaurentExpansion(self.point, low, out, trunc)

    def divide(self, other: "LaurentExpansion") -> "LaurentExpansion":
        """Laurent division by an expansion with a nonzero computed part."""
        self._require_same_point(other)
        if other.is_zero:
            raise ZeroDivisionError("division by a zero expansion")
        v = other.lowest
        rel = other.trunc - v  # relative orders known for the divisor unit part
        inv_unit = _invert_unit([other.coeffs[i] if i < len(other.coeffs) else Fraction(0) for i in range(rel + 1)], rel)
        inv = LaurentExpansion(self.point, -v, inv_unit, -v + rel)
        return self * inv

    def truncate(self, order: int) -> "LaurentExpansion":
        if order > self.trunc:
            raise InsufficientExpansionError(
                f"cannot extend truncation from {self.trunc} to {order}"
            )
        if self.is_zero:
            return LaurentExpansion.zero_through(self.point, order)
        cs = [c for (o, c) in self.items() if o <= order]
        if not cs:
            return LaurentExpansion.zero_through(self.point, order)
        return LaurentExpansion(self.point, self.lowest, cs, order)

    def partial_sum(self, x: Rat) -> Fraction:
        """Evaluate the stored terms at x (x must differ from the point for poles)."""
        u = Fraction(x) - self.point
        total = Fraction(0)
        for order, c in self.items():
            total += c * (u**order)
        return total

    # -- protocol ------------------------------------------------------

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, LaurentExpansion)
            and self.point == other.point
            and self.lowest == other.lowest
            and self.coeffs == other.coeffs
            and self.trunc == other.trunc
        )

    def __repr__(self) -> str:
        terms = ", ".join(f"{c}*u^{o}" for o, c in self.items()[:6])
        return f"LaurentExpansion(point={self.point}, [{terms}...], trunc={self.trunc})"


def _invert_unit(unit: list[Fraction], rel: int) -> list[Fraction]:
    """Coefficients of 1/U for a power series U with U(0) != 0, through order rel."""
    u0 = unit[0]
    inv = [1 / u0]
    for k in range(1, rel + 1):
        acc = Fraction(0)
        for j in range(1, k + 1):
            uj = unit[j] if j < len(unit) else Fraction(0)
            acc += uj * inv[k - j]
        inv.append(-acc / u0)
    return inv


def expand(f: RationalFunction, point: Rat, order: int) -> LaurentExpansion:
    """Exact Laurent expansion of f at a rational point through `order`.

    The lowest order is minus the pole order when f has a pole at the
    point, and the multiplicity of the point as a zero of f otherwise.
    """
    point = Fraction(point)
    if f.is_zero:
        return LaurentExpansion.zero_through(point, order)
    num = f.num.compose_shift(point)
    den = f.den.compose_shift(point)
    zn = num.trailing_zeros()
    zd = den.trailing_zeros()
    lowest = zn - zd
    if order < lowest:
        raise ValueError(
            f"requested truncation {order} is below the expansion's lowest order {lowest}"
        )
    num_u = UniPoly(num.coeffs[zn:])
    den_u = UniPoly(den.coeffs[zd:])
    need = order - lowest + 1
    # Power-series long division of num_u by den_u (den_u(0) != 0).
    d0 = den_u.coeffs[0]
    cs: list[Fraction] = []
    for k in range(need):
        acc = num_u.coefficient(k)
        for j in range(1, min(k, den_u.degree) + 1):
            acc -= den_u.coeffs[j] * cs[k - j]
        cs.append(acc / d0)
    return LaurentExpansion(point, lowest, cs, order)


def pole_order(f: RationalFunction, point: Rat) -> int:
    """Multiplicity of the point as a pole of f (0 when f is analytic there)."""
    if f.is_zero:
        return 0
    point = Fraction(point)
    den_mult = _eval_multiplicity(f.den, point)
    if den_mult == 0:
        return 0
    num_mult = _eval_multiplicity(f.num, point)
    return max(0, den_mult - num_mult)


def _eval_multiplicity(p: UniPoly, point: Fraction) -> int:
    m = 0
    lin = UniPoly((-point, 1))
    while not p.is_zero and p.eval(point) == 0:
        p = p.exact_div(lin)
        m += 1
    return m


def expand_vector(
    fs: Sequence[RationalFunction], point: Rat, order: int
) -> tuple[LaurentExpansion, ...]:
    return tuple(expand(f, point, order) for f in fs)
