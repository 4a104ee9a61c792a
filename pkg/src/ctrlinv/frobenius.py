"""Analytic power-series solutions of the invariant ODE at a point.

With the admissibility conditions satisfied at an expansion point, the
n-th order ODE y^(n) + sum_s p_s y^(n-s) = 0 (p_s = -gamma_{n-s+1}) has n
independent analytic solutions.  The coefficients at the indicial roots
are free; every other coefficient follows from an explicit recurrence,
and the dependent equations at the root indices are verified rather than
assumed.  A certified convergence radius comes from an exact geometric
bound on the coefficient growth.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .errors import InconsistentSystemError, InsufficientExpansionError
from .laurent import LaurentExpansion, expand
from .linsys import LinearSystem
from .poly import Rat, RationalFunction, UniPoly, falling_factorial
from .realize import (
    IndicialData,
    RealizabilityVerdict,
    falling_factorial_poly,
    indicial,
    indicial_value,
    invariant_components,
    recurrence_coefficient,
)
from .roots import cauchy_positive_bound, nonzero_root_modulus_lower_bound


class SeriesProblem:
    """Laurent data of the invariants at one expansion point.

    Carries the component expansions (deep enough for a recurrence run to
    truncation `depth`), the indicial data, and optionally the rational
    components themselves for radius certification.
    """

    def __init__(
        self,
        expansions: Sequence[LaurentExpansion],
        rationals: Sequence[RationalFunction] | None = None,
    ):
        self.expansions = tuple(expansions)
        self.n = len(self.expansions)
        self.point = self.expansions[0].point
        self.rationals = tuple(rationals) if rationals is not None else None
        self.indicial: IndicialData = indicial(self.expansions)

    @staticmethod
    def from_invariants(gamma, point: Rat, depth: int) -> "SeriesProblem":
        comps = invariant_components(gamma)
        return SeriesProblem(
            [expand(g, point, depth) for g in comps], comps
        )

    @property
    def roots(self) -> tuple[int, ...]:
        if self.indicial.roots is None:
            raise InconsistentSystemError(
                "no admissible indicial roots at this point: "
                f"{self.indicial.failure}"
            )
        return self.indicial.roots

    def p_expansion(self, s: int) -> LaurentExpansion:
        """Expansion of the ODE coefficient p_s = -gamma_{n-s+1}."""
        return self.expansions[self.n - s].scale(-1)


@dataclass(frozen=True)
class SeriesSolution:
    """Power-series solution with prescribed values at the root indices."""

    point: Fraction
    coeffs: tuple[Fraction, ...]  # indices 0..truncation
    free_values: dict[int, Fraction]
    roots: tuple[int, ...]

    @property
    def truncation(self) -> int:
        return len(self.coeffs) - 1

    def coefficient(self, k: int) -> Fraction:
        if k < 0:
            return Fraction(0)
        if k >= len(self.coeffs):
            raise InsufficientExpansionError(f"series truncated below index {k}")
        return self.coeffs[k]

    def as_expansion(self) -> LaurentExpansion:
        return LaurentExpansion(self.point, 0, self.coeffs, self.truncation)

    def tail_zero_from(self) -> int:
        """Smallest index m with every stored coefficient from m on zero."""
        m = len(self.coeffs)
        while m > 0 and self.coeffs[m - 1] == 0:
            m -= 1
        return m

    @property
    def is_terminating(self) -> bool:
        """Zero beyond the top root, attested by at least n trailing zeros."""
        kn = self.roots[-1]
        n = len(self.roots)
        return self.truncation >= kn + n and self.tail_zero_from() <= kn + 1

    def polynomial(self) -> UniPoly:
        """The solution as a polynomial in t (valid when terminating)."""
        series = UniPoly(self.coeffs)
        return series.compose_shift(-self.point)


def solve_recurrence(
    problem: SeriesProblem,
    free: Mapping[int, Rat],
    truncation: int,
) -> SeriesSolution:
    """Run the coefficient recurrence with prescribed root-index values.

    The dependent equations at the upper root indices must balance on
    their own; a failure raises InconsistentSystemError and means the
    rank condition does not hold at this point.
    """
    roots = problem.roots
    k1, kn = roots[0], roots[-1]
    if truncation < kn:
        raise ValueError(f"truncation {truncation} below top root {kn}")
    free_vals = {int(k): Fraction(v) for k, v in free.items()}
    if set(free_vals) != set(roots):
        raise ValueError(f"free values must be given exactly at roots {roots}")
    exps = problem.expansions
    root_set = set(roots)
    y: list[Fraction] = [Fraction(0)] * (truncation + 1)
    for k in range(k1, truncation + 1):
        balance = Fraction(0)
        for j in range(k1, k):
            if y[j] != 0:
                balance += recurrence_coefficient(exps, k, j) * y[j]
        if k in root_set:
            if balance != 0:
                raise InconsistentSystemError(
                    f"dependent equation at index {k} fails (imbalance {balance}); "
                    "rank condition violated upstream"
                )
            y[k] = free_vals[k]
        else:
            y[k] = -balance / indicial_value(exps, k)
    return SeriesSolution(problem.point, tuple(y), free_vals, roots)


def solution_basis(problem: SeriesProblem, truncation: int) -> list[SeriesSolution]:
    """n solutions with unit free values, one per indicial root.

    Their leading orders are the distinct roots, so they are linearly
    independent by construction.
    """
    roots = problem.roots
    out = []
    for r in roots:
        free = {k: Fraction(1 if k == r else 0) for k in roots}
        out.append(solve_recurrence(problem, free, truncation))
    return out


def residual(
    sol: SeriesSolution, problem: SeriesProblem, order: int
) -> list[tuple[int, Fraction]]:
    """Coefficients of y^(n) + sum_s p_s y^(n-s) through the given order.

    Computed by independent series arithmetic (termwise derivatives and
    Laurent products), not through the recurrence tables, so it serves as
    a check on them.  Returns (order, coefficient) pairs starting at the
    lowest order the sum can touch; all must vanish for a true solution.
    """
    n = problem.n
    if order > sol.truncation - n:
        raise ValueError("residual order exceeds what the truncation supports")
    derivs = [sol.as_expansion()]
    for _ in range(n):
        derivs.append(derivs[-1].derivative())
    total = derivs[n]
    for s in range(1, n + 1):
        total = total + problem.p_expansion(s) * derivs[n - s]
    if total.trunc < order:
        raise InsufficientExpansionError(
            f"expansions too shallow: residual known to {total.trunc}, need {order}"
        )
    low = min(total.lowest if not total.is_zero else 0, 0)
    low = min(low, sol.roots[0] - n)
    return [(m, total.coefficient(m)) for m in range(low, order + 1)]


@dataclass(frozen=True)
class GrowthBound:
    """Certified geometric bound |y_k| <= C1 * C^k, hence radius >= 1/C.

    C dominates the coefficient growth of the ODE coefficients
    (|p_{s,i}| <= C^{s+i} for i >= -s+1, checked on all stored
    coefficients and justified for the tails by the pole distances);
    beyond k0 the recurrence itself contracts, which pins the constant
    C1 to the finitely many leading coefficients.
    """

    C: Fraction
    C1: Fraction
    k0: int
    radius_lb: Fraction


def _growth_base(problem: SeriesProblem) -> Fraction:
    """1 / (distance lower bound to the nearest foreign pole); 0 if none."""
    if problem.rationals is None:
        raise ValueError("radius certification needs the rational components")
    best: Fraction | None = None
    for g in problem.rationals:
        den = g.den
        if den.degree == 0:
            continue
        shifted = den.compose_shift(problem.point)
        bound = nonzero_root_modulus_lower_bound(shifted)
        if bound is not None and (best is None or bound < best):
            best = bound
    return Fraction(0) if best is None else 1 / best


def _coefficient_bound_holds(problem: SeriesProblem, c: Fraction) -> bool:
    for s in range(1, problem.n + 1):
        exp = problem.p_expansion(s)
        if exp.is_zero:
            continue
        for i, value in exp.items():
            if i < -s + 1 or value == 0:
                continue
            if abs(value) > c ** (s + i):
                return False
    return True


def contraction_index(problem: SeriesProblem) -> int:
    """Smallest k0 >= top root beyond which the recurrence contracts.

    For first-order problems the specialised argument applies and k0 is
    the single root itself.  Otherwise k0 is the first index from which
    the comparison polynomial stays below the indicial values forever
    (verified exactly out to a real-root bound, automatic beyond it).
    """
    roots = problem.roots
    n = problem.n
    if n == 1:
        return roots[0]
    comparison = UniPoly.zero()
    for s in range(1, n + 1):
        m = n - s + 1
        comparison = comparison + falling_factorial_poly(m).scale(Fraction(1, m))
    margin = problem.indicial.poly - comparison
    bound = max(cauchy_positive_bound(margin), roots[-1])
    k0 = roots[-1]
    for k in range(roots[-1], bound + 1):
        if margin.eval(k) < 0:
            k0 = k + 1
    return k0


def growth_bound(problem: SeriesProblem, sol: SeriesSolution) -> GrowthBound:
    """Certify |y_k| <= C1 * C^k for the given solution.

    The inequality is also verified exactly on every stored coefficient;
    a violation would indicate a defect and raises AssertionError.
    """
    base = _growth_base(problem)
    mu = Fraction(1)
    while True:
        c = max(Fraction(1), mu * base) if base > 0 else mu
        if _coefficient_bound_holds(problem, c):
            break
        mu *= 2
    k0 = contraction_index(problem)
    if sol.truncation < k0:
        raise InsufficientExpansionError(
            f"growth bound needs coefficients through {k0}, have {sol.truncation}"
        )
    c1 = max(abs(sol.coefficient(k)) for k in range(k0 + 1))
    power = Fraction(1)
    for k in range(sol.truncation + 1):
        if abs(sol.coefficient(k)) > c1 * power:
            raise AssertionError(f"certified bound violated at index {k}")
        power *= c
    return GrowthBound(c, c1, k0, 1 / c)


@dataclass(frozen=True)
class DriftlessRealization:
    """A driftless linear system whose invariants are the given functions.

    The input-vector components are the basis series; when every basis
    series terminates the system is emitted exactly with polynomial data.
    """

    point: Fraction
    roots: tuple[int, ...]
    basis: tuple[SeriesSolution, ...]
    bounds: tuple[GrowthBound, ...]
    exact_system: LinearSystem | None
    interval: tuple[Fraction, Fraction]


def default_truncation(problem: SeriesProblem, requested: int | None = None) -> int:
    """Truncation covering the contraction index and a comfortable tail."""
    kn = problem.roots[-1]
    k0 = contraction_index(problem)
    base = kn + 24 if requested is None else max(requested, kn)
    return max(base, k0)


def realize_system(
    gamma,
    verdict: RealizabilityVerdict,
    point: Rat | None = None,
    truncation: int | None = None,
) -> DriftlessRealization:
    """Build the driftless realization promised by a positive verdict.

    The expansion point defaults to the first pole (the interval midpoint
    when there is none).  Residuals of every basis series are rechecked.
    """
    if not verdict.realizable:
        raise ValueError("cannot realize: the verdict is negative")
    comps = invariant_components(gamma)
    if point is None:
        point = verdict.poles[0] if verdict.poles else (
            verdict.interval[0] + verdict.interval[1]
        ) / 2
    point = Fraction(point)
    probe = SeriesProblem.from_invariants(comps, point, len(comps))
    k = default_truncation(probe, truncation)
    problem = SeriesProblem.from_invariants(comps, point, k + 1)
    basis = solution_basis(problem, k)
    for sol in basis:
        bad = [(m, v) for m, v in residual(sol, problem, k - problem.n) if v != 0]
        if bad:
            raise InconsistentSystemError(f"nonzero residual terms {bad[:3]}")
    bounds = tuple(growth_bound(problem, sol) for sol in basis)
    exact = None
    if all(sol.is_terminating for sol in basis):
        g = [RationalFunction(sol.polynomial()) for sol in basis]
        exact = LinearSystem.driftless(g, verdict.interval)
    return DriftlessRealization(
        point, problem.roots, tuple(basis), bounds, exact, verdict.interval
    )
