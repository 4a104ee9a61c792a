"""Deciding whether meromorphic functions are invariants of a linear system.

Given candidate invariants gamma_1..gamma_n (reduced rational functions on
a closed interval), the decision runs three checks at every pole:

  (i)   the pole order of gamma_s is at most n - s + 1;
  (ii)  a degree-n polynomial built from the most singular Laurent
        coefficients (the indicial polynomial) has n distinct nonnegative
        integer roots;
  (iii) a finite block of recurrence coefficients assembled from deeper
        Laurent data has a prescribed rank.

All pole points must be rational: the Laurent data that (ii) and (iii)
consume is then exact, and the checks are decidable with no rounding.
The rank test has an equivalent formulation through a family of minors,
which is computed alongside for auditability.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import InsufficientExpansionError, IrrationalPoleError
from .laurent import LaurentExpansion, expand, pole_order
from .linalg import exact_det, exact_rank
from .linsys import InvariantVector
from .poly import Rat, RationalFunction, UniPoly, falling_factorial
from .roots import count_real_roots_closed, deflate_rational_roots, integer_roots


def invariant_components(gamma) -> tuple[RationalFunction, ...]:
    """Coerce an InvariantVector or plain sequence into component tuple form."""
    if isinstance(gamma, InvariantVector):
        return gamma.components
    return tuple(RationalFunction.of(g) for g in gamma)


def falling_factorial_poly(m: int) -> UniPoly:
    """k(k-1)...(k-m+1) as a polynomial in k."""
    out = UniPoly.one()
    for i in range(m):
        out = out * UniPoly((-i, 1))
    return out


def pole_set(gamma, interval: tuple[Rat, Rat]) -> list[Fraction]:
    """All poles of the components inside the closed interval, sorted.

    Components are reduced, so denominator roots are genuine poles.
    Raises IrrationalPoleError when a denominator has a non-rational real
    root in the interval, since exact Laurent data is unavailable there.
    """
    lo, hi = Fraction(interval[0]), Fraction(interval[1])
    points: set[Fraction] = set()
    for g in invariant_components(gamma):
        if g.den.degree == 0:
            continue
        rational, rest = deflate_rational_roots(g.den)
        for r in rational:
            if lo <= r <= hi:
                points.add(r)
        if rest.degree > 0 and count_real_roots_closed(rest, lo, hi):
            raise IrrationalPoleError(
                f"denominator {g.den.to_str()} has a non-rational real root "
                f"in [{lo}, {hi}]"
            )
    return sorted(points)


@dataclass(frozen=True)
class PoleOrderReport:
    """Condition (i): per-component pole orders against their bounds."""

    point: Fraction
    orders: tuple[int, ...]  # pole order of gamma_s, s = 1..n
    bounds: tuple[int, ...]  # allowed maximum n - s + 1
    passed: bool

    @property
    def offenders(self) -> list[int]:
        return [
            s + 1 for s, (o, b) in enumerate(zip(self.orders, self.bounds)) if o > b
        ]


def check_pole_orders(gamma, point: Rat) -> PoleOrderReport:
    comps = invariant_components(gamma)
    n = len(comps)
    point = Fraction(point)
    orders = tuple(pole_order(g, point) for g in comps)
    bounds = tuple(n - s + 1 for s in range(1, n + 1))
    passed = all(o <= b for o, b in zip(orders, bounds))
    return PoleOrderReport(point, orders, bounds, passed)


@dataclass(frozen=True)
class IndicialData:
    """The indicial polynomial and its nonnegative integer roots.

    `roots` is populated (sorted, exactly n of them) only when the
    admissibility condition holds; `failure` explains why otherwise.
    """

    poly: UniPoly
    roots: tuple[int, ...] | None
    failure: str | None

    @property
    def passed(self) -> bool:
        return self.roots is not None


def indicial(expansions: Sequence[LaurentExpansion]) -> IndicialData:
    """Indicial data from the component expansions at one point.

    The polynomial is built from the coefficients at order -s of
    component n - s + 1; expansions must therefore reach order >= 0.
    """
    n = len(expansions)
    poly = falling_factorial_poly(n)
    for s in range(1, n + 1):
        coeff = expansions[n - s].coefficient(-s)
        if coeff != 0:
            poly = poly - falling_factorial_poly(n - s).scale(coeff)
    if poly.degree != n:
        raise AssertionError("indicial polynomial must have degree n")
    roots = integer_roots(poly)
    nonneg = sorted(r for r in roots if r >= 0)
    if len(nonneg) == n and all(roots[r] == 1 for r in nonneg):
        return IndicialData(poly, tuple(nonneg), None)
    return IndicialData(
        poly,
        None,
        f"indicial polynomial has nonnegative integer roots {nonneg}, needs {n} distinct",
    )


@dataclass(frozen=True)
class RecurrenceBlock:
    """The finite coefficient block whose rank decides solvability.

    Rows are recurrence indices k1+1..kn, columns are series indices
    k1..kn-1; the entry at (k, j) couples series coefficient j into
    recurrence equation k.  Entries above the first superdiagonal vanish
    structurally.
    """

    roots: tuple[int, ...]
    rows: tuple[int, ...]
    cols: tuple[int, ...]
    entries: tuple[tuple[Fraction, ...], ...]

    @property
    def target_rank(self) -> int:
        n = len(self.roots)
        return self.roots[-1] - self.roots[0] - n + 1

    def entry(self, k: int, j: int) -> Fraction:
        return self.entries[k - self.rows[0]][j - self.cols[0]]

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> list[list[Fraction]]:
        return [[self.entry(k, j) for j in cols] for k in rows]


def recurrence_coefficient(
    expansions: Sequence[LaurentExpansion], k: int, j: int
) -> Fraction:
    """Coupling of series coefficient j into recurrence equation k (j < k)."""
    n = len(expansions)
    total = Fraction(0)
    for s in range(1, n + 1):
        ff = falling_factorial(j, n - s)
        if ff:
            total -= ff * expansions[n - s].coefficient(k - j - s)
    return total


def indicial_value(expansions: Sequence[LaurentExpansion], k: int) -> Fraction:
    """Diagonal recurrence coefficient: the indicial polynomial at k."""
    n = len(expansions)
    total = Fraction(falling_factorial(k, n))
    for s in range(1, n + 1):
        ff = falling_factorial(k, n - s)
        if ff:
            total -= ff * expansions[n - s].coefficient(-s)
    return total


def required_expansion_order(roots: Sequence[int], n: int) -> int:
    """Deepest Laurent index the block can touch, plus safety margin."""
    return roots[-1] - roots[0] + n


def recurrence_block(
    expansions: Sequence[LaurentExpansion], roots: Sequence[int]
) -> RecurrenceBlock:
    """Assemble the rank-test block; expansions must be deep enough.

    Raises InsufficientExpansionError if a needed coefficient lies beyond
    a stored truncation.
    """
    roots = tuple(sorted(roots))
    k1, kn = roots[0], roots[-1]
    rows = tuple(range(k1 + 1, kn + 1))
    cols = tuple(range(k1, kn))
    entries = []
    for k in rows:
        row = []
        for j in cols:
            if j > k:
                row.append(Fraction(0))
            elif j == k:
                row.append(indicial_value(expansions, k))
            else:
                row.append(recurrence_coefficient(expansions, k, j))
        entries.append(tuple(row))
    return RecurrenceBlock(roots, rows, cols, tuple(entries))


@dataclass(frozen=True)
class RankReport:
    """Condition (iii): block rank against its target."""

    rank: int
    target: int
    required: bool  # False for first-order problems, where the test is vacuous
    passed: bool


def rank_condition(block: RecurrenceBlock) -> RankReport:
    n = len(block.roots)
    if n == 1:
        return RankReport(0, 0, False, True)
    rank = exact_rank(block.entries) if block.rows else 0
    target = block.target_rank
    return RankReport(rank, target, True, rank == target)


def minor_conditions(
    block: RecurrenceBlock, roots: Sequence[int] | None = None
) -> dict[tuple[int, int], Fraction]:
    """The n(n-1)/2 determinants equivalent to the rank condition.

    For root indices i < j (1-based), the minor takes rows k_i+1..k_j and
    columns k_i..k_j-1 of the block, then deletes the rows and columns of
    the interior roots k_s (i < s < j).  All minors vanish exactly when
    the rank condition holds.
    """
    roots = tuple(sorted(roots)) if roots is not None else block.roots
    n = len(roots)
    out: dict[tuple[int, int], Fraction] = {}
    for i in range(1, n):
        for j in range(i + 1, n + 1):
            ki, kj = roots[i - 1], roots[j - 1]
            interior = {roots[s - 1] for s in range(i + 1, j)}
            rows = [k for k in range(ki + 1, kj + 1) if k not in interior]
            cols = [c for c in range(ki, kj) if c not in interior]
            sub = block.submatrix(rows, cols)
            out[(i, j)] = Fraction(exact_det(sub)) if sub else Fraction(1)
    return out


@dataclass(frozen=True)
class PoleReport:
    """Every check run at one point, in short-circuit order."""

    point: Fraction
    orders: PoleOrderReport
    indicial: IndicialData | None
    rank: RankReport | None
    minors: dict[tuple[int, int], Fraction] | None
    passed: bool


def check_point(gamma, point: Rat) -> PoleReport:
    """Run the three conditions at a single (rational) point.

    At a point where every component is analytic this returns the trivial
    outcome: indicial roots 0..n-1, a zero block, and a passing rank.
    """
    comps = invariant_components(gamma)
    n = len(comps)
    point = Fraction(point)
    orders = check_pole_orders(comps, point)
    if not orders.passed:
        return PoleReport(point, orders, None, None, None, False)
    shallow = [expand(g, point, n) for g in comps]
    ind = indicial(shallow)
    if not ind.passed:
        return PoleReport(point, orders, ind, None, None, False)
    depth = required_expansion_order(ind.roots, n)
    deep = [expand(g, point, depth) for g in comps]
    block = recurrence_block(deep, ind.roots)
    rank = rank_condition(block)
    minors = minor_conditions(block)
    return PoleReport(point, orders, ind, rank, minors, rank.passed)


@dataclass(frozen=True)
class RealizabilityVerdict:
    """Outcome of the pole-by-pole checks over an interval."""

    interval: tuple[Fraction, Fraction]
    poles: tuple[Fraction, ...]
    reports: tuple[PoleReport, ...]
    realizable: bool

    def report_at(self, point: Rat) -> PoleReport:
        point = Fraction(point)
        for r in self.reports:
            if r.point == point:
                return r
        raise KeyError(f"no report at {point}")


def realizability_verdict(gamma, interval: tuple[Rat, Rat]) -> RealizabilityVerdict:
    """Decide whether the components are invariants of some linear system.

    The conditions hold automatically wherever the components are
    analytic, so only the poles inside the interval are examined; with no
    poles the verdict is positive outright.
    """
    lo, hi = Fraction(interval[0]), Fraction(interval[1])
    poles = pole_set(gamma, (lo, hi))
    reports = tuple(check_point(gamma, p) for p in poles)
    return RealizabilityVerdict(
        (lo, hi), tuple(poles), reports, all(r.passed for r in reports)
    )


@dataclass(frozen=True)
class OdeCoefficients:
    """Coefficients p_s = -gamma_{n-s+1} of the equivalent n-th order ODE.

    The ODE reads y^(n) + sum_s p_s y^(n-s) = 0; its analytic solutions
    are exactly the candidate driftless input components.
    """

    p: tuple[RationalFunction, ...]

    @staticmethod
    def from_invariants(gamma) -> "OdeCoefficients":
        comps = invariant_components(gamma)
        n = len(comps)
        return OdeCoefficients(tuple(-comps[n - s] for s in range(1, n + 1)))

    @property
    def n(self) -> int:
        return len(self.p)
