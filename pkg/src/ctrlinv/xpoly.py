"""Polynomials in the state variables x1..xn over rational functions of t.

This is the coefficient class for affine control systems: every entry of
the vector fields is polynomial in x with exact rational-function
t-coefficients.  Terms are kept sparse (exponent tuple -> coefficient);
zero coefficients are never stored, so structural equality is semantic
equality.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .poly import RationalFunction, Scalar, UniPoly

Exponent = tuple[int, ...]


def _zero_exp(nvars: int) -> Exponent:
    return (0,) * nvars


class XPoly:
    """Sparse polynomial in x1..xn with RationalFunction coefficients."""

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: Mapping[Exponent, object] | None = None):
        self.nvars = nvars
        clean: dict[Exponent, RationalFunction] = {}
        for exp, coeff in (terms or {}).items():
            if len(exp) != nvars or any(e < 0 for e in exp):
                raise ValueError(f"bad exponent {exp} for {nvars} variables")
            rf = RationalFunction.of(coeff)
            if not rf.is_zero:
                clean[tuple(exp)] = rf
        self.terms = clean

    # -- constructors ---------------------------------------------------

    @staticmethod
    def zero(nvars: int) -> "XPoly":
        return XPoly(nvars)

    @staticmethod
    def const(nvars: int, value: object) -> "XPoly":
        return XPoly(nvars, {_zero_exp(nvars): RationalFunction.of(value)})

    @staticmethod
    def variable(nvars: int, index: int) -> "XPoly":
        """The polynomial x_{index+1} (0-based index)."""
        if not 0 <= index < nvars:
            raise ValueError(f"variable index {index} out of range")
        exp = [0] * nvars
        exp[index] = 1
        return XPoly(nvars, {tuple(exp): RationalFunction.one()})

    # -- queries ----------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def is_x_free(self) -> bool:
        return all(exp == _zero_exp(self.nvars) for exp in self.terms)

    def as_rational_function(self) -> RationalFunction:
        if self.is_zero:
            return RationalFunction.zero()
        if not self.is_x_free:
            raise ValueError("polynomial depends on the state variables")
        return self.terms[_zero_exp(self.nvars)]

    def x_degree(self) -> int:
        if self.is_zero:
            return 0
        return max(sum(exp) for exp in self.terms)

    # -- arithmetic --------------------------------------------------------

    def _check(self, other: "XPoly") -> None:
        if self.nvars != other.nvars:
            raise ValueError("mixed variable counts")

    def __add__(self, other: "XPoly") -> "XPoly":
        self._check(other)
        out = dict(self.terms)
        for exp, c in other.terms.items():
            cur = out.get(exp)
            out[exp] = c if cur is None else cur + c
        return XPoly(self.nvars, out)

    def __neg__(self) -> "XPoly":
        return XPoly(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other: "XPoly") -> "XPoly":
        return self + (-other)

    def __mul__(self, other: "XPoly") -> "XPoly":
        self._check(other)
        out: dict[Exponent, RationalFunction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                exp = tuple(a + b for a, b in zip(e1, e2))
                prod = c1 * c2
                cur = out.get(exp)
                out[exp] = prod if cur is None else cur + prod
        return XPoly(self.nvars, out)

    def __pow__(self, n: int) -> "XPoly":
        if n < 0:
            raise ValueError("negative power of an x-polynomial")
        out = XPoly.const(self.nvars, 1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def scale(self, c: object) -> "XPoly":
        rf = RationalFunction.of(c)
        return XPoly(self.nvars, {e: a * rf for e, a in self.terms.items()})

    def divide_by(self, c: object) -> "XPoly":
        rf = RationalFunction.of(c)
        if rf.is_zero:
            raise ZeroDivisionError("division by zero scalar")
        return XPoly(self.nvars, {e: a / rf for e, a in self.terms.items()})

    # -- calculus ------------------------------------------------------------

    def t_derivative(self) -> "XPoly":
        return XPoly(self.nvars, {e: c.derivative() for e, c in self.terms.items()})

    def x_partial(self, index: int) -> "XPoly":
        out: dict[Exponent, RationalFunction] = {}
        for exp, c in self.terms.items():
            k = exp[index]
            if k == 0:
                continue
            new = list(exp)
            new[index] = k - 1
            key = tuple(new)
            term = c.scale(k)
            cur = out.get(key)
            out[key] = term if cur is None else cur + term
        return XPoly(self.nvars, out)

    # -- evaluation ------------------------------------------------------------

    def eval_x(self, x: Sequence[Scalar]) -> RationalFunction:
        """Substitute rational values for all state variables."""
        if len(x) != self.nvars:
            raise ValueError("wrong number of state values")
        xs = [Fraction(v) for v in x]
        total = RationalFunction.zero()
        for exp, c in self.terms.items():
            factor = Fraction(1)
            for v, e in zip(xs, exp):
                factor *= v**e
            total = total + c.scale(factor)
        return total

    def eval_t(self, t: Scalar) -> dict[Exponent, Fraction]:
        """Substitute a rational time value; raises at coefficient poles.

        Zero values are dropped so the result dict is canonical.
        """
        out = {}
        for exp, c in self.terms.items():
            v = c.eval(t)
            if v != 0:
                out[exp] = v
        return out

    # -- protocol ------------------------------------------------------------

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, XPoly)
            and self.nvars == other.nvars
            and self.terms == other.terms
        )

    def __repr__(self) -> str:
        return f"XPoly({self.to_str()!r})"

    def to_str(self, tvar: str = "t") -> str:
        if self.is_zero:
            return "0"
        parts = []
        for exp in sorted(self.terms, key=lambda e: (sum(e), e)):
            c = self.terms[exp]
            mono = "*".join(
                f"x{i + 1}" if k == 1 else f"x{i + 1}^{k}"
                for i, k in enumerate(exp)
                if k > 0
            )
            cstr = c.to_str(tvar)
            if mono:
                if cstr == "1":
                    parts.append(mono)
                elif cstr == "-1":
                    parts.append(f"-{mono}")
                else:
                    wrap = f"({cstr})" if ("+" in cstr[1:] or "-" in cstr[1:] or "/" in cstr) else cstr
                    parts.append(f"{wrap}*{mono}")
            else:
                parts.append(f"({cstr})" if "/" in cstr else cstr)
        return " + ".join(parts)


# ---------------------------------------------------------------------------
# Vector-field helpers


def xp_vector(nvars: int, entries: Iterable[object]) -> tuple[XPoly, ...]:
    out = []
    for e in entries:
        if isinstance(e, XPoly):
            if e.nvars != nvars:
                raise ValueError("mixed variable counts in vector")
            out.append(e)
        else:
            out.append(XPoly.const(nvars, e))
    return tuple(out)


def jacobian_x(field: Sequence[XPoly]) -> list[list[XPoly]]:
    """Jacobian of a vector field with respect to the state variables."""
    nvars = field[0].nvars
    return [[f.x_partial(j) for j in range(nvars)] for f in field]


def xp_mat_vec(m: Sequence[Sequence[XPoly]], v: Sequence[XPoly]) -> list[XPoly]:
    out = []
    for row in m:
        acc = XPoly.zero(v[0].nvars)
        for a, b in zip(row, v):
            acc = acc + a * b
        out.append(acc)
    return out


def xp_det(m: Sequence[Sequence[XPoly]]) -> XPoly:
    """Determinant by cofactor expansion (dimensions here are small)."""
    n = len(m)
    if any(len(row) != n for row in m):
        raise ValueError("determinant of a non-square matrix")
    if n == 0:
        raise ValueError("empty matrix")
    if n == 1:
        return m[0][0]
    nvars = m[0][0].nvars
    det = XPoly.zero(nvars)
    for j in range(n):
        if m[0][j].is_zero:
            continue
        minor = [[row[k] for k in range(n) if k != j] for row in m[1:]]
        cof = m[0][j] * xp_det(minor)
        det = det + cof if j % 2 == 0 else det - cof
    return det


def xp_replace_column(
    m: Sequence[Sequence[XPoly]], col: int, vec: Sequence[XPoly]
) -> list[list[XPoly]]:
    out = [list(row) for row in m]
    for i, v in enumerate(vec):
        out[i][col] = v
    return out


class XFraction:
    """Ratio of two XPoly, reduced as far as cheap exact steps allow.

    Full multivariate gcd is not implemented; instead the ratio is
    normalized by (a) collapsing to a plain rational function of t when
    the numerator is a t-dependent multiple of the denominator, and
    (b) exact polynomial division when the denominator divides the
    numerator termwise through a leading-term division loop.  Equality is
    decided exactly by cross-multiplication regardless of normal form.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: XPoly, den: XPoly):
        if den.is_zero:
            raise ZeroDivisionError("XFraction with zero denominator")
        self.num = num
        self.den = den

    def x_free_value(self) -> RationalFunction | None:
        """The ratio as a function of t alone, or None if state-dependent."""
        if self.num.is_zero:
            return RationalFunction.zero()
        exp, dcoeff = next(iter(sorted(self.den.terms.items())))
        ncoeff = self.num.terms.get(exp)
        if ncoeff is None:
            return None
        candidate = ncoeff / dcoeff
        if self.den.scale(candidate) == self.num:
            return candidate
        return None

    def __eq__(self, other: object) -> bool:
        if isinstance(other, XFraction):
            return self.num * other.den == other.num * self.den
        if isinstance(other, RationalFunction):
            return self.num == self.den.scale(other)
        return NotImplemented

    def __repr__(self) -> str:
        return f"XFraction(({self.num.to_str()}) / ({self.den.to_str()}))"
