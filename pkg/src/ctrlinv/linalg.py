"""Exact linear algebra over the rationals and over rational functions.

Rank and determinant use fraction-free (Bareiss) elimination: every
intermediate entry is a minor of the cleared input matrix, so divisions
are exact and coefficient growth stays polynomial.  Matrices of rational
functions are cleared row-by-row to polynomial matrices first; clearing a
row by a nonzero polynomial changes neither the rank nor the vanishing of
the determinant, and the determinant itself is recovered by dividing the
cleared factors back out.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Sequence

from .poly import RationalFunction, UniPoly, poly_lcm

Matrix = Sequence[Sequence[object]]


def _dims(m: Matrix) -> tuple[int, int]:
    rows = len(m)
    if rows == 0:
        return 0, 0
    cols = len(m[0])
    if any(len(r) != cols for r in m):
        raise ValueError("matrix is not rectangular")
    return rows, cols


def _clear_rf_rows(m: Matrix) -> tuple[list[list[UniPoly]], list[UniPoly]]:
    """Multiply each row by the lcm of its denominators; return multipliers."""
    cleared: list[list[UniPoly]] = []
    factors: list[UniPoly] = []
    for row in m:
        rfs = [RationalFunction.of(v) for v in row]
        mult = UniPoly.one()
        for f in rfs:
            mult = poly_lcm(mult, f.den)
        cleared.append([f.num * mult.exact_div(f.den) for f in rfs])
        factors.append(mult)
    return cleared, factors


def _bareiss(
    m: list[list[object]],
    one: object,
    zero: object,
    is_zero: Callable[[object], bool],
    exact_div: Callable[[object, object], object],
) -> tuple[int, object, int]:
    """Fraction-free elimination; returns (rank, last pivot, swap sign).

    The last pivot equals the determinant of the leading rank-sized minor
    (up to the swap sign); for a full-rank square matrix that is det(m).
    """
    rows, cols = len(m), len(m[0]) if m else 0
    rank = 0
    sign = 1
    prev = one
    r = 0
    for c in range(cols):
        pivot_row = None
        for i in range(r, rows):
            if not is_zero(m[i][c]):
                pivot_row = i
                break
        if pivot_row is None:
            continue
        if pivot_row != r:
            m[r], m[pivot_row] = m[pivot_row], m[r]
            sign = -sign
        pivot = m[r][c]
        for i in range(r + 1, rows):
            for j in range(c + 1, cols):
                num = m[i][j] * pivot - m[i][c] * m[r][j]
                m[i][j] = exact_div(num, prev)
            m[i][c] = zero
        prev = pivot
        rank += 1
        r += 1
        if r == rows:
            break
    return rank, prev, sign


def _bareiss_fraction(m: list[list[Fraction]]) -> tuple[int, Fraction, int]:
    return _bareiss(m, Fraction(1), Fraction(0), lambda v: v == 0, lambda a, b: a / b)


def _bareiss_poly(m: list[list[UniPoly]]) -> tuple[int, UniPoly, int]:
    return _bareiss(
        m, UniPoly.one(), UniPoly.zero(), lambda p: p.is_zero, lambda a, b: a.exact_div(b)
    )


def exact_rank(m: Matrix) -> int:
    """Rank of a matrix of Fractions/ints or rational functions."""
    rows, cols = _dims(m)
    if rows == 0 or cols == 0:
        return 0
    if _all_scalar(m):
        work = [[Fraction(v) for v in row] for row in m]
        return _bareiss_fraction(work)[0]
    cleared, _ = _clear_rf_rows(m)
    return _bareiss_poly(cleared)[0]


def _all_scalar(m: Matrix) -> bool:
    return all(isinstance(v, (int, Fraction)) for row in m for v in row)


def exact_det(m: Matrix) -> RationalFunction | Fraction:
    """Determinant of a square matrix; Fraction in, Fraction out."""
    rows, cols = _dims(m)
    if rows != cols:
        raise ValueError("determinant of a non-square matrix")
    if rows == 0:
        return Fraction(1)
    if _all_scalar(m):
        work = [[Fraction(v) for v in row] for row in m]
        rank, last, sign = _bareiss_fraction(work)
        if rank < rows:
            return Fraction(0)
        return sign * last
    cleared, factors = _clear_rf_rows(m)
    rank, last, sign = _bareiss_poly(cleared)
    if rank < rows:
        return RationalFunction.zero()
    det = RationalFunction(last).scale(sign)
    for f in factors:
        det = det / RationalFunction(f)
    return det


def replace_column(m: Matrix, col: int, vec: Sequence[object]) -> list[list[object]]:
    out = [list(row) for row in m]
    for i, v in enumerate(vec):
        out[i][col] = v
    return out


def cramer_solve(
    m: Sequence[Sequence[RationalFunction]], rhs: Sequence[RationalFunction]
) -> tuple[RationalFunction, ...]:
    """Solve m·x = rhs over the rational-function field by Cramer's rule.

    Keeps per-component provenance (numerator over det m), which the pole
    bookkeeping downstream depends on.  Raises ZeroDivisionError when the
    determinant vanishes identically.
    """
    det = exact_det(m)
    det = RationalFunction.of(det)
    if det.is_zero:
        raise ZeroDivisionError("singular system in cramer_solve")
    out = []
    for j in range(len(rhs)):
        dj = RationalFunction.of(exact_det(replace_column(m, j, rhs)))
        out.append(dj / det)
    return tuple(out)


def mat_vec(m: Matrix, vec: Sequence[object]) -> list:
    rows, cols = _dims(m)
    if cols != len(vec):
        raise ValueError("dimension mismatch in mat_vec")
    out = []
    for row in m:
        acc = None
        for a, b in zip(row, vec):
            term = a * b
            acc = term if acc is None else acc + term
        out.append(acc)
    return out


def mat_mul(a: Matrix, b: Matrix) -> list[list]:
    ra, ca = _dims(a)
    rb, cb = _dims(b)
    if ca != rb:
        raise ValueError("dimension mismatch in mat_mul")
    return [
        [
            _dot(a[i], [b[k][j] for k in range(rb)])
            for j in range(cb)
        ]
        for i in range(ra)
    ]


def _dot(u: Sequence[object], v: Sequence[object]):
    acc = None
    for a, b in zip(u, v):
        term = a * b
        acc = term if acc is None else acc + term
    return acc
