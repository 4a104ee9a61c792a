"""Exact univariate polynomials and rational functions over the rationals.

Coefficients are arbitrary-precision rationals (`fractions.Fraction`).
Polynomials are stored densely, lowest degree first, with no trailing
zero coefficients; the zero polynomial has an empty coefficient tuple.
Rational functions are kept in canonical form at all times: numerator and
denominator coprime, denominator monic.  Canonical form makes equality
structural, which the higher layers rely on for exact identity checks.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence, Union

Rat = Fraction

Scalar = Union[int, Fraction]


def falling_factorial(k: int, q: int) -> int:
    """k·(k-1)···(k-q+1), i.e. k!/(k-q)!; zero when q exceeds k."""
    if k < 0 or q < 0:
        raise ValueError("falling_factorial requires nonnegative arguments")
    if q > k:
        return 0
    out = 1
    for i in range(q):
        out *= k - i
    return out


def _as_fraction(value: Scalar) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    raise TypeError(f"expected an exact rational, got {type(value).__name__}")


class UniPoly:
    """Dense univariate polynomial with Fraction coefficients."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[Scalar] = ()):
        cs = [_as_fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs: tuple[Fraction, ...] = tuple(cs)

    # -- constructors -------------------------------------------------

    @staticmethod
    def zero() -> "UniPoly":
        return UniPoly(())

    @staticmethod
    def one() -> "UniPoly":
        return UniPoly((1,))

    @staticmethod
    def const(c: Scalar) -> "UniPoly":
        return UniPoly((c,))

    @staticmethod
    def variable() -> "UniPoly":
        return UniPoly((0, 1))

    @staticmethod
    def monomial(degree: int, coeff: Scalar = 1) -> "UniPoly":
        if degree < 0:
            raise ValueError("degree must be nonnegative")
        return UniPoly((0,) * degree + (coeff,))

    @staticmethod
    def from_roots(roots: Iterable[Scalar]) -> "UniPoly":
        """Monic polynomial with the given roots (with multiplicity)."""
        out = UniPoly.one()
        for r in roots:
            out = out * UniPoly((-_as_fraction(r), 1))
        return out

    # -- basic queries -------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    @property
    def leading(self) -> Fraction:
        if not self.coeffs:
            return Fraction(0)
        return self.coeffs[-1]

    def coefficient(self, k: int) -> Fraction:
        if 0 <= k < len(self.coeffs):
            return self.coeffs[k]
        return Fraction(0)

    @property
    def is_constant(self) -> bool:
        return len(self.coeffs) <= 1

    def trailing_zeros(self) -> int:
        """Multiplicity of 0 as a root (0 for the zero polynomial)."""
        for i, c in enumerate(self.coeffs):
            if c != 0:
                return i
        return 0

    # -- arithmetic ----------------------------------------------------

    def __add__(self, other: "UniPoly") -> "UniPoly":
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return UniPoly(out)

    def __neg__(self) -> "UniPoly":
        return UniPoly(tuple(-c for c in self.coeffs))

    def __sub__(self, other: "UniPoly") -> "UniPoly":
        return self + (-other)

    def __mul__(self, other: "UniPoly") -> "UniPoly":
        if self.is_zero or other.is_zero:
            return UniPoly.zero()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return UniPoly(out)

    def scale(self, c: Scalar) -> "UniPoly":
        c = _as_fraction(c)
        if c == 0:
            return UniPoly.zero()
        return UniPoly(tuple(a * c for a in self.coeffs))

    def __pow__(self, n: int) -> "UniPoly":
        if n < 0:
            raise ValueError("negative power of a polynomial")
        out = UniPoly.one()
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def shift_up(self, k: int) -> "UniPoly":
        """Multiply by t^k."""
        if self.is_zero:
            return self
        return UniPoly((Fraction(0),) * k + self.coeffs)

    def __divmod__(self, other: "UniPoly") -> tuple["UniPoly", "UniPoly"]:
        if other.is_zero:
            raise ZeroDivisionError("polynomial division by zero")
        if self.degree < other.degree:
            return UniPoly.zero(), self
        rem = list(self.coeffs)
        dlead = other.leading
        ddeg = other.degree
        quot = [Fraction(0)] * (self.degree - ddeg + 1)
        for k in range(len(quot) - 1, -1, -1):
            c = rem[ddeg + k] / dlead
            if c != 0:
                quot[k] = c
                for j, b in enumerate(other.coeffs):
                    rem[j + k] -= c * b
        return UniPoly(quot), UniPoly(rem)

    def __mod__(self, other: "UniPoly") -> "UniPoly":
        return divmod(self, other)[1]

    def exact_div(self, other: "UniPoly") -> "UniPoly":
        """Quotient self/other, requiring the division to be exact."""
        q, r = divmod(self, other)
        if not r.is_zero:
            raise ValueError("inexact polynomial division")
        return q

    # -- algebra -------------------------------------------------------

    def monic(self) -> "UniPoly":
        if self.is_zero or self.leading == 1:
            return self
        return self.scale(1 / self.leading)

    def primitive(self) -> "UniPoly":
        """Rescale so coefficients are coprime integers with positive leading."""
        if self.is_zero:
            return self
        from math import gcd, lcm

        den = 1
        for c in self.coeffs:
            den = lcm(den, c.denominator)
        nums = [int(c * den) for c in self.coeffs]
        g = 0
        for v in nums:
            g = gcd(g, v)
        if nums[-1] < 0:
            g = -g
        return UniPoly(tuple(Fraction(v, g) for v in nums))

    def gcd(self, other: "UniPoly") -> "UniPoly":
        """Monic greatest common divisor (Euclid with primitive remainders)."""
        a, b = self, other
        if a.is_zero:
            return b.monic()
        if b.is_zero:
            return a.monic()
        # Primitive normalization keeps intermediate coefficients small.
        a, b = a.primitive(), b.primitive()
        while not b.is_zero:
            a, b = b, (a % b)
            if not b.is_zero:
                b = b.primitive()
        return a.monic()

    def derivative(self) -> "UniPoly":
        return UniPoly(tuple(c * k for k, c in enumerate(self.coeffs) if k >= 1))

    def eval(self, point: Scalar) -> Fraction:
        point = _as_fraction(point)
        out = Fraction(0)
        for c in reversed(self.coeffs):
            out = out * point + c
        return out

    def compose_shift(self, c: Scalar) -> "UniPoly":
        """Return p(t + c) as a polynomial in t."""
        c = _as_fraction(c)
        if c == 0 or self.is_zero:
            return self
        shift = UniPoly((c, 1))
        out = UniPoly.zero()
        for coeff in reversed(self.coeffs):
            out = out * shift + UniPoly.const(coeff)
        return out

    def squarefree_part(self) -> "UniPoly":
        if self.is_zero:
            return self
        return self.exact_div(self.gcd(self.derivative())).monic()

    # -- protocol ------------------------------------------------------

    def __eq__(self, other: object) -> bool:
        return isinstance(other, UniPoly) and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __bool__(self) -> bool:
        return not self.is_zero

    def __repr__(self) -> str:
        return f"UniPoly({self.to_str()!r})"

    def to_str(self, var: str = "t") -> str:
        if self.is_zero:
            return "0"
        parts: list[str] = []
        for k in range(self.degree, -1, -1):
            c = self.coeffs[k]
            if c == 0:
                continue
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            if k == 0:
                body = str(mag)
            else:
                tpow = var if k == 1 else f"{var}^{k}"
                body = tpow if mag == 1 else f"{mag}*{tpow}"
            if not parts:
                parts.append(body if sign == "+" else f"-{body}")
            else:
                parts.append(f" {sign} {body}")
        return "".join(parts)


class RationalFunction:
    """Quotient of two UniPoly in canonical (reduced, monic-denominator) form."""

    __slots__ = ("num", "den")

    def __init__(self, num: UniPoly, den: UniPoly | None = None):
        if den is None:
            den = UniPoly.one()
        if den.is_zero:
            raise ZeroDivisionError("rational function with zero denominator")
        if num.is_zero:
            self.num = UniPoly.zero()
            self.den = UniPoly.one()
            return
        g = num.gcd(den)
        if g.degree > 0:
            num = num.exact_div(g)
            den = den.exact_div(g)
        lead = den.leading
        if lead != 1:
            num = num.scale(1 / lead)
            den = den.scale(1 / lead)
        self.num = num
        self.den = den

    # -- constructors -------------------------------------------------

    @staticmethod
    def const(c: Scalar) -> "RationalFunction":
        return RationalFunction(UniPoly.const(c))

    @staticmethod
    def zero() -> "RationalFunction":
        return RationalFunction(UniPoly.zero())

    @staticmethod
    def one() -> "RationalFunction":
        return RationalFunction(UniPoly.one())

    @staticmethod
    def variable() -> "RationalFunction":
        return RationalFunction(UniPoly.variable())

    @staticmethod
    def of(value: "RationalFunction | UniPoly | Scalar") -> "RationalFunction":
        if isinstance(value, RationalFunction):
            return value
        if isinstance(value, UniPoly):
            return RationalFunction(value)
        return RationalFunction.const(value)

    # -- queries -------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return self.num.is_zero

    @property
    def is_constant(self) -> bool:
        return self.num.is_constant and self.den.is_constant

    @property
    def is_polynomial(self) -> bool:
        return self.den == UniPoly.one()

    def as_constant(self) -> Fraction:
        if not self.is_constant:
            raise ValueError("not a constant rational function")
        if self.is_zero:
            return Fraction(0)
        return self.num.coeffs[0]

    def as_polynomial(self) -> UniPoly:
        if not self.is_polynomial:
            raise ValueError("not a polynomial")
        return self.num

    # -- arithmetic ----------------------------------------------------

    def __add__(self, other: "RationalFunction") -> "RationalFunction":
        return RationalFunction(
            self.num * other.den + other.num * self.den, self.den * other.den
        )

    def __neg__(self) -> "RationalFunction":
        out = object.__new__(RationalFunction)
        out.num = -self.num
        out.den = self.den
        return out

    def __sub__(self, other: "RationalFunction") -> "RationalFunction":
        return self + (-other)

    def __mul__(self, other: "RationalFunction") -> "RationalFunction":
        return RationalFunction(self.num * other.num, self.den * other.den)

    def __truediv__(self, other: "RationalFunction") -> "RationalFunction":
        if other.is_zero:
            raise ZeroDivisionError("division by the zero rational function")
        return RationalFunction(self.num * other.den, self.den * other.num)

    def scale(self, c: Scalar) -> "RationalFunction":
        out = object.__new__(RationalFunction)
        out.num = self.num.scale(c)
        out.den = self.den if not out.num.is_zero else UniPoly.one()
        if out.num.is_zero:
            out.num = UniPoly.zero()
        return out

    def __pow__(self, n: int) -> "RationalFunction":
        if n < 0:
            return RationalFunction(self.den ** (-n), self.num ** (-n))
        return RationalFunction(self.num**n, self.den**n)

    def derivative(self) -> "RationalFunction":
        """Exact quotient-rule derivative, reduced to canonical form."""
        if self.is_polynomial:
            return RationalFunction(self.num.derivative())
        return RationalFunction(
            self.num.derivative() * self.den - self.num * self.den.derivative(),
            self.den * self.den,
        )

    def eval(self, point: Scalar) -> Fraction:
        d = self.den.eval(point)
        if d == 0:
            raise ZeroDivisionError(f"evaluation at a pole ({point})")
        return self.num.eval(point) / d

    def defined_at(self, point: Scalar) -> bool:
        return self.den.eval(point) != 0

    # -- protocol ------------------------------------------------------

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, RationalFunction)
            and self.num == other.num
            and self.den == other.den
        )

    def __hash__(self) -> int:
        return hash((self.num, self.den))

    def __bool__(self) -> bool:
        return not self.is_zero

    def __repr__(self) -> str:
        return f"RationalFunction({self.to_str()!r})"

    def to_str(self, var: str = "t") -> str:
        if self.is_polynomial:
            return self.num.to_str(var)
        num = self.num.to_str(var)
        den = self.den.to_str(var)
        if self.num.degree > 0 and len(self.num.coeffs) > 1:
            num = f"({num})"
        return f"{num}/({den})"


def poly_lcm(a: UniPoly, b: UniPoly) -> UniPoly:
    if a.is_zero or b.is_zero:
        return UniPoly.zero()
    return (a * b).exact_div(a.gcd(b)).monic()


def rf_derivative(f: RationalFunction) -> RationalFunction:
    """Functional form of RationalFunction.derivative."""
    return f.derivative()


def rf_matrix(rows: Sequence[Sequence[object]]) -> tuple[tuple[RationalFunction, ...], ...]:
    """Coerce a nested sequence of scalars/polynomials into an RF matrix."""
    return tuple(tuple(RationalFunction.of(v) for v in row) for row in rows)


def rf_vector(entries: Sequence[object]) -> tuple[RationalFunction, ...]:
    return tuple(RationalFunction.of(v) for v in entries)
