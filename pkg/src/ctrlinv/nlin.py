"""Affine nonlinear control systems and the linearizability decision.

For dx/dt = a(t,x) + b(t,x)u the input field b is pushed through the
derivation phi -> phi_t + phi_x a - a_x phi, the nonlinear counterpart of
the linear chain.  Commutation of the chain fields, generic rank of the
chain matrix, state-independence of the induced invariant candidate and
its realizability as invariants of a linear system together decide local
analytic linearizability; fixing a target linear system instead turns the
last step into an exact equality of invariants.

Entries are polynomial in the state with rational-function t-coefficients
(optionally piecewise in t): the widest class in which every check runs
in exact arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import frobenius, linsys, realize
from .errors import RankDeficientError
from .piecewise import PiecewiseRF, continuity_diagnostics
from .poly import Rat, RationalFunction
from .roots import RootLocation, isolate_real_roots
from .xpoly import (
    XFraction,
    XPoly,
    jacobian_x,
    xp_det,
    xp_mat_vec,
    xp_replace_column,
    xp_vector,
)

Domain = tuple[tuple[Fraction | None, Fraction | None], ...]


def _branch_xp(entry, interval: tuple[Fraction, Fraction], nvars: int) -> XPoly:
    if isinstance(entry, PiecewiseRF):
        mid = (interval[0] + interval[1]) / 2
        value = entry.branch_at(mid)
        if isinstance(value, XPoly):
            return value
        return XPoly.const(nvars, value)
    if isinstance(entry, XPoly):
        return entry
    return XPoly.const(nvars, entry)


@dataclass(frozen=True)
class AffinePiece:
    interval: tuple[Fraction, Fraction]
    a: tuple[XPoly, ...]
    b: tuple[XPoly, ...]

    @property
    def n(self) -> int:
        return len(self.b)


class AffineSystem:
    """dx/dt = a(t,x) + b(t,x)u over a domain box and a time interval.

    The drift must be twice and the input field once continuously
    differentiable across piece boundaries; exact violations are attached
    as warnings, not errors.
    """

    def __init__(
        self,
        a: Sequence[object],
        b: Sequence[object],
        interval: tuple[Rat, Rat],
        domain: Domain | None = None,
    ):
        lo, hi = Fraction(interval[0]), Fraction(interval[1])
        if lo >= hi:
            raise ValueError("empty time interval")
        n = len(b)
        if len(a) != n:
            raise ValueError("drift and input field must have equal length")
        self.n = n
        self.interval = (lo, hi)
        self.domain: Domain = domain if domain is not None else tuple(
            (None, None) for _ in range(n)
        )
        if len(self.domain) != n:
            raise ValueError("domain box must have one range per coordinate")
        self.warnings: list[str] = []

        cuts: set[Fraction] = set()
        for e in list(a) + list(b):
            if isinstance(e, PiecewiseRF):
                if e.interval != (lo, hi):
                    raise ValueError("piecewise entry declared on a different interval")
                cuts.update(e.breakpoints)
        boundaries = [lo, *sorted(cuts), hi]
        pieces = []
        for plo, phi in zip(boundaries, boundaries[1:]):
            pa = tuple(_branch_xp(e, (plo, phi), n) for e in a)
            pb = tuple(_branch_xp(e, (plo, phi), n) for e in b)
            pieces.append(AffinePiece((plo, phi), pa, pb))
        self.pieces: tuple[AffinePiece, ...] = tuple(pieces)

        for i, e in enumerate(a):
            if isinstance(e, PiecewiseRF):
                self.warnings += continuity_diagnostics(e, 2, f"a[{i + 1}]")
        for i, e in enumerate(b):
            if isinstance(e, PiecewiseRF):
                self.warnings += continuity_diagnostics(e, 1, f"b[{i + 1}]")

    @property
    def is_piecewise(self) -> bool:
        return len(self.pieces) > 1

    def single_piece(self) -> AffinePiece:
        if self.is_piecewise:
            raise ValueError("operation needs a single piece; use .pieces")
        return self.pieces[0]


def affine_from_linear(sys: linsys.LinearSystem) -> AffineSystem:
    """Encode a (single-piece) linear system as an affine one: a = A(t)x."""
    piece = sys.single_piece()
    n = piece.n
    a = []
    for i in range(n):
        acc = XPoly.zero(n)
        for j in range(n):
            acc = acc + XPoly.variable(n, j).scale(piece.A[i][j])
        a.append(acc)
    b = [XPoly.const(n, f) for f in piece.b]
    return AffineSystem(a, b, sys.interval)


# ---------------------------------------------------------------------------
# Chain construction


def chain_step(phi: Sequence[XPoly], a: Sequence[XPoly]) -> tuple[XPoly, ...]:
    """One derivation step: phi_t + phi_x a - a_x phi."""
    if len(phi) != len(a):
        raise ValueError("field dimensions differ")
    jac_phi = jacobian_x(phi)
    jac_a = jacobian_x(a)
    first = xp_mat_vec(jac_phi, a)
    second = xp_mat_vec(jac_a, phi)
    return tuple(
        p.t_derivative() + f - s for p, f, s in zip(phi, first, second)
    )


@dataclass(frozen=True)
class FieldChain:
    """Iterated derivation of the input field: entries 0..n."""

    vectors: tuple[tuple[XPoly, ...], ...]

    @property
    def n(self) -> int:
        return len(self.vectors[0])

    def vector(self, k: int) -> tuple[XPoly, ...]:
        return self.vectors[k]

    @property
    def matrix(self) -> tuple[tuple[XPoly, ...], ...]:
        """Columns are chain vectors 0..n-1."""
        n = self.n
        return tuple(
            tuple(self.vectors[k][i] for k in range(n)) for i in range(n)
        )


def field_chain(piece: AffinePiece | AffineSystem) -> FieldChain:
    if isinstance(piece, AffineSystem):
        piece = piece.single_piece()
    vectors = [piece.b]
    for _ in range(piece.n):
        vectors.append(chain_step(vectors[-1], piece.a))
    return FieldChain(tuple(vectors))


def lie_bracket(phi: Sequence[XPoly], psi: Sequence[XPoly]) -> tuple[XPoly, ...]:
    """[phi, psi] with the convention psi_x phi - phi_x psi."""
    if len(phi) != len(psi):
        raise ValueError("field dimensions differ")
    first = xp_mat_vec(jacobian_x(psi), phi)
    second = xp_mat_vec(jacobian_x(phi), psi)
    return tuple(f - s for f, s in zip(first, second))


# ---------------------------------------------------------------------------
# Condition checks


@dataclass(frozen=True)
class CommutationReport:
    """Pairwise commutation of the first n chain fields."""

    passed: bool
    failures: tuple[tuple[int, int], ...]  # offending (j, k) pairs, j < k

    def __bool__(self) -> bool:
        return self.passed


def commutation_check(chain: FieldChain) -> CommutationReport:
    n = chain.n
    failures = []
    for j in range(n):
        for k in range(j + 1, n):
            bracket = lie_bracket(chain.vector(j), chain.vector(k))
            if any(not c.is_zero for c in bracket):
                failures.append((j, k))
    return CommutationReport(not failures, tuple(failures))


@dataclass(frozen=True)
class RankCheckReport:
    """Generic-rank status of the chain matrix.

    status 'pass': determinant is state-free and not identically zero;
    the singular set lists its real time-zeros in the interval.
    status 'fail': determinant vanishes identically.
    status 'indeterminate': determinant genuinely depends on the state;
    whether it vanishes somewhere on the domain box is not decided.
    """

    status: str  # pass | fail | indeterminate
    det: XPoly
    singular: tuple[RootLocation, ...]

    @property
    def passed(self) -> bool:
        return self.status == "pass"


def generic_rank_check(
    chain: FieldChain,
    interval: tuple[Rat, Rat],
    domain: Domain | None = None,
) -> RankCheckReport:
    det = xp_det(chain.matrix)
    if det.is_zero:
        return RankCheckReport("fail", det, ())
    if not det.is_x_free:
        return RankCheckReport("indeterminate", det, ())
    rf = det.as_rational_function()
    lo, hi = Fraction(interval[0]), Fraction(interval[1])
    if rf.num.degree < 1:
        return RankCheckReport("pass", det, ())
    singular = tuple(isolate_real_roots(rf.num, lo, hi))
    return RankCheckReport("pass", det, singular)


@dataclass(frozen=True)
class InvariantField:
    """Solution of (chain matrix) * gamma = chain vector n.

    Components are exact ratios; when each one collapses to a function of
    t alone, `x_free` holds and `rationals` carries the collapsed values.
    """

    components: tuple[XFraction, ...]
    x_free: bool
    rationals: tuple[RationalFunction, ...] | None

    @property
    def n(self) -> int:
        return len(self.components)


def invariant_field(chain: FieldChain) -> InvariantField:
    det = xp_det(chain.matrix)
    if det.is_zero:
        raise RankDeficientError("chain matrix is identically singular")
    comps = []
    rationals = []
    x_free = True
    for j in range(chain.n):
        numerator = xp_det(xp_replace_column(chain.matrix, j, chain.vector(chain.n)))
        frac = XFraction(numerator, det)
        collapsed = frac.x_free_value()
        comps.append(frac)
        if collapsed is None:
            x_free = False
        else:
            rationals.append(collapsed)
    return InvariantField(
        tuple(comps), x_free, tuple(rationals) if x_free else None
    )


def verify_field_identity(chain: FieldChain, field: InvariantField) -> bool:
    """Check (chain matrix) * gamma == chain vector n by cross-multiplying."""
    m = chain.matrix
    target = chain.vector(chain.n)
    for i in range(chain.n):
        lhs = XPoly.zero(chain.n)
        for j in range(chain.n):
            term = m[i][j] * field.components[j].num
            for k in range(chain.n):
                if k != j:
                    term = term * field.components[k].den
            lhs = lhs + term
        rhs = target[i]
        for k in range(chain.n):
            rhs = rhs * field.components[k].den
        if lhs != rhs:
            return False
    return True


# ---------------------------------------------------------------------------
# Verdicts


@dataclass(frozen=True)
class LinearizabilityVerdict:
    """Aggregated outcome of the linearizability conditions.

    `overall` is True/False when decided, None when the rank condition
    was indeterminate (state-dependent determinant) and nothing else
    failed.
    """

    overall: bool | None
    reasons: tuple[str, ...]
    commutation: tuple[CommutationReport, ...]
    rank: tuple[RankCheckReport, ...]
    x_free: bool | None
    gamma: tuple[RationalFunction, ...] | None
    realizability: realize.RealizabilityVerdict | None
    realization: frobenius.DriftlessRealization | None
    warnings: tuple[str, ...]


def linearizability_verdict(
    sys: AffineSystem, series_point: Rat | None = None
) -> LinearizabilityVerdict:
    """Run the full decision and, on success, attach a target system.

    Piecewise systems must pass every check on every piece and produce
    identical invariants across pieces.
    """
    reasons: list[str] = []
    commutation: list[CommutationReport] = []
    rank: list[RankCheckReport] = []
    gammas: list[tuple[RationalFunction, ...] | None] = []
    x_free: bool | None = True
    indeterminate = False

    for piece in sys.pieces:
        chain = field_chain(piece)
        comm = commutation_check(chain)
        commutation.append(comm)
        if not comm.passed:
            reasons.append(
                f"chain fields do not commute on piece starting at "
                f"t={piece.interval[0]}: pairs {comm.failures}"
            )
        rk = generic_rank_check(chain, piece.interval, sys.domain)
        rank.append(rk)
        if rk.status == "fail":
            reasons.append("chain matrix is identically singular")
            gammas.append(None)
            continue
        if rk.status == "indeterminate":
            indeterminate = True
        field = invariant_field(chain)
        if not field.x_free:
            x_free = False
            reasons.append(
                "invariant candidate depends on the state variables"
            )
            gammas.append(None)
        else:
            gammas.append(field.rationals)

    gamma: tuple[RationalFunction, ...] | None = None
    if all(g is not None for g in gammas):
        gamma = gammas[0]
        for g in gammas[1:]:
            if g != gamma:
                reasons.append("invariants differ between pieces")
                gamma = None
                break

    realizability = None
    realization = None
    if gamma is not None and not reasons:
        realizability = realize.realizability_verdict(gamma, sys.interval)
        if realizability.realizable:
            realization = frobenius.realize_system(
                gamma, realizability, point=series_point
            )
        else:
            failed = [r.point for r in realizability.reports if not r.passed]
            reasons.append(f"invariants not realizable; failing poles {failed}")

    if reasons:
        overall: bool | None = False
    elif indeterminate:
        overall = None
        reasons.append(
            "rank condition indeterminate: determinant depends on the state"
        )
    else:
        overall = True
    return LinearizabilityVerdict(
        overall,
        tuple(reasons),
        tuple(commutation),
        tuple(rank),
        x_free,
        gamma,
        realizability,
        realization,
        tuple(sys.warnings),
    )


@dataclass(frozen=True)
class MappabilityReport:
    """Outcome of matching an affine system against a fixed linear target."""

    passed: bool | None
    reasons: tuple[str, ...]
    target_invariants: tuple[RationalFunction, ...]


def mappable_to(sys: AffineSystem, target: linsys.LinearSystem) -> MappabilityReport:
    """Decide mappability to the given linear controllable system.

    Requires commuting chain fields, a generically nonsingular chain
    matrix, and exact equality of the induced invariants with those of
    the target.
    """
    if sys.n != target.n:
        raise ValueError("dimension mismatch between system and target")
    target_gamma = linsys.invariants(target)
    reasons: list[str] = []
    indeterminate = False
    for piece in sys.pieces:
        chain = field_chain(piece)
        comm = commutation_check(chain)
        if not comm.passed:
            reasons.append(f"chain fields do not commute: pairs {comm.failures}")
            continue
        rk = generic_rank_check(chain, piece.interval, sys.domain)
        if rk.status == "fail":
            reasons.append("chain matrix is identically singular")
            continue
        if rk.status == "indeterminate":
            indeterminate = True
        field = invariant_field(chain)
        if not field.x_free:
            reasons.append("invariant candidate depends on the state variables")
            continue
        if field.rationals != target_gamma.components:
            reasons.append(
                "invariants differ from the target's on piece starting at "
                f"t={piece.interval[0]}"
            )
    if reasons:
        passed: bool | None = False
    elif indeterminate:
        passed = None
        reasons.append("rank condition indeterminate")
    else:
        passed = True
    return MappabilityReport(passed, tuple(reasons), target_gamma.components)
