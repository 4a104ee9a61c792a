"""Linear non-autonomous single-input systems with exact rational data.

A system dx/dt = A(t)x + b(t)u on a closed interval carries the chain of
vectors obtained by iterating (-A(t) + d/dt) on b(t); the first n of them
form the controllability matrix, and solving that matrix against the
(n+1)-st chain vector yields the invariant vector of the system, which is
unchanged under analytic changes of variables.  Everything here is exact:
entries are rational functions whose denominators are verified root-free
on the time interval at construction.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import NotControllableError, PieceMismatchError, SingularChangeError
from .laurent import expand
from .linalg import cramer_solve, exact_det, mat_vec, replace_column
from .piecewise import PiecewiseRF, continuity_diagnostics
from .poly import Rat, RationalFunction, UniPoly
from .roots import RootLocation, count_real_roots_closed, isolate_real_roots

Entry = object  # RationalFunction | UniPoly | int | Fraction | PiecewiseRF


def _is_piecewise(entries) -> bool:
    return any(isinstance(e, PiecewiseRF) for row in entries for e in row)


def _branch(entry: Entry, interval: tuple[Fraction, Fraction]) -> RationalFunction:
    if isinstance(entry, PiecewiseRF):
        mid = (interval[0] + interval[1]) / 2
        value = entry.branch_at(mid)
        if not isinstance(value, RationalFunction):
            raise TypeError("linear systems need rational-function branches")
        return value
    return RationalFunction.of(entry)


@dataclass(frozen=True)
class LinearPiece:
    """One subinterval with plain rational-function data."""

    interval: tuple[Fraction, Fraction]
    A: tuple[tuple[RationalFunction, ...], ...]
    b: tuple[RationalFunction, ...]

    @property
    def n(self) -> int:
        return len(self.b)


class LinearSystem:
    """dx/dt = A(t)x + b(t)u with entries analytic on the interval.

    Entries may be piecewise; the system is then split at the union of the
    breakpoints and smoothness across them is reported as warnings.
    """

    def __init__(self, A: Sequence[Sequence[Entry]], b: Sequence[Entry], interval: tuple[Rat, Rat]):
        lo, hi = Fraction(interval[0]), Fraction(interval[1])
        if lo >= hi:
            raise ValueError("empty time interval")
        n = len(b)
        if len(A) != n or any(len(row) != n for row in A):
            raise ValueError("A must be n x n with n = len(b)")
        self.n = n
        self.interval = (lo, hi)
        self.warnings: list[str] = []

        cuts: set[Fraction] = set()
        all_entries = [e for row in A for e in row] + list(b)
        for e in all_entries:
            if isinstance(e, PiecewiseRF):
                if e.interval != (lo, hi):
                    raise ValueError("piecewise entry declared on a different interval")
                cuts.update(e.breakpoints)
        boundaries = [lo, *sorted(cuts), hi]
        pieces = []
        for plo, phi in zip(boundaries, boundaries[1:]):
            piece_A = tuple(
                tuple(_branch(e, (plo, phi)) for e in row) for row in A
            )
            piece_b = tuple(_branch(e, (plo, phi)) for e in b)
            _check_analytic(piece_A, piece_b, (plo, phi))
            pieces.append(LinearPiece((plo, phi), piece_A, piece_b))
        self.pieces: tuple[LinearPiece, ...] = tuple(pieces)

        for i, row in enumerate(A):
            for j, e in enumerate(row):
                if isinstance(e, PiecewiseRF):
                    self.warnings += continuity_diagnostics(e, 2, f"A[{i + 1},{j + 1}]")
        for i, e in enumerate(b):
            if isinstance(e, PiecewiseRF):
                self.warnings += continuity_diagnostics(e, 2, f"b[{i + 1}]")

    # -- convenience ----------------------------------------------------

    @staticmethod
    def driftless(g: Sequence[Entry], interval: tuple[Rat, Rat]) -> "LinearSystem":
        n = len(g)
        zero = [[RationalFunction.zero()] * n for _ in range(n)]
        return LinearSystem(zero, g, interval)

    @property
    def is_piecewise(self) -> bool:
        return len(self.pieces) > 1

    def single_piece(self) -> LinearPiece:
        if self.is_piecewise:
            raise ValueError("operation needs a single-piece system; use .pieces")
        return self.pieces[0]

    def piece_system(self, index: int) -> "LinearSystem":
        p = self.pieces[index]
        return LinearSystem(p.A, p.b, p.interval)

    def piece_at(self, point: Rat) -> LinearPiece:
        t = Fraction(point)
        if not self.interval[0] <= t <= self.interval[1]:
            raise ValueError(f"{t} outside the system interval")
        for p in self.pieces:
            if p.interval[0] <= t < p.interval[1]:
                return p
        return self.pieces[-1]


def _check_analytic(A, b, interval) -> None:
    for row in list(A) + [b]:
        for f in row:
            if f.den.degree > 0 and count_real_roots_closed(
                f.den, interval[0], interval[1]
            ):
                raise ValueError(
                    f"entry {f.to_str()} has a pole inside [{interval[0]}, {interval[1]}]"
                )


@dataclass(frozen=True)
class ControllabilityData:
    """The chain vectors, the controllability matrix and its determinant."""

    vectors: tuple[tuple[RationalFunction, ...], ...]  # chain index 0..m
    matrix: tuple[tuple[RationalFunction, ...], ...]  # columns are chain 0..n-1
    det: RationalFunction

    @property
    def n(self) -> int:
        return len(self.matrix)

    def vector(self, k: int) -> tuple[RationalFunction, ...]:
        return self.vectors[k]


@dataclass(frozen=True)
class InvariantVector:
    """Solution of (controllability matrix) * gamma = last chain vector."""

    components: tuple[RationalFunction, ...]

    @property
    def n(self) -> int:
        return len(self.components)

    def __iter__(self):
        return iter(self.components)

    def __getitem__(self, s: int) -> RationalFunction:
        return self.components[s]


@dataclass(frozen=True)
class SingularSet:
    """Real zeros of the controllability determinant inside the interval."""

    points: tuple[RootLocation, ...]

    def rational_points(self) -> list[Fraction]:
        return [p.exact for p in self.points if p.is_exact]


def controllability_chain(sys: LinearSystem | LinearPiece, m: int | None = None) -> ControllabilityData:
    """Chain vectors through index m (default n) and the matrix they form."""
    piece = sys.single_piece() if isinstance(sys, LinearSystem) else sys
    n = piece.n
    if m is None:
        m = n
    vectors = [piece.b]
    current = piece.b
    for _ in range(m):
        a_cur = mat_vec(piece.A, current)
        current = tuple(f.derivative() - g for f, g in zip(current, a_cur))
        vectors.append(current)
    matrix = tuple(
        tuple(vectors[k][i] for k in range(n)) for i in range(n)
    )
    det = RationalFunction.of(exact_det(matrix))
    return ControllabilityData(tuple(vectors), matrix, det)


def invariants(sys: LinearSystem) -> InvariantVector:
    """The invariant vector; per-piece results must agree exactly.

    Raises NotControllableError when the controllability determinant is
    identically zero, PieceMismatchError when pieces disagree.
    """
    results = []
    for piece in sys.pieces:
        data = controllability_chain(piece, piece.n)
        if data.det.is_zero:
            raise NotControllableError(
                "controllability determinant vanishes identically"
            )
        gamma = cramer_solve(data.matrix, data.vector(piece.n))
        results.append(InvariantVector(gamma))
    first = results[0]
    for got, piece in zip(results[1:], sys.pieces[1:]):
        if got.components != first.components:
            raise PieceMismatchError(
                f"invariants differ on piece starting at t={piece.interval[0]}"
            )
    return first


def autonomous_invariants(
    A: Sequence[Sequence[Rat]], b: Sequence[Rat]
) -> tuple[Fraction, ...]:
    """Constant invariants of a constant system from its Kalman data."""
    n = len(b)
    cols: list[list[Fraction]] = [[Fraction(v) for v in b]]
    for _ in range(n):
        prev = cols[-1]
        cols.append(
            [-sum(Fraction(A[i][j]) * prev[j] for j in range(n)) for i in range(n)]
        )
    kalman = [[cols[k][i] for k in range(n)] for i in range(n)]
    det = exact_det(kalman)
    if det == 0:
        raise NotControllableError("Kalman matrix is singular")
    rhs = cols[n]
    out = []
    for j in range(n):
        out.append(Fraction(exact_det(replace_column(kalman, j, rhs))) / det)
    return tuple(out)


def singular_points(sys: LinearSystem) -> SingularSet:
    """All real zeros of the controllability determinant in the interval."""
    locations: list[RootLocation] = []
    for piece in sys.pieces:
        data = controllability_chain(piece, max(piece.n - 1, 1))
        if data.det.is_zero:
            raise NotControllableError(
                "controllability determinant vanishes identically"
            )
        num = data.det.num
        if num.degree < 1:
            continue
        for loc in isolate_real_roots(num, piece.interval[0], piece.interval[1]):
            if all(not _same_location(loc, seen) for seen in locations):
                locations.append(loc)
    locations.sort(key=lambda loc: loc.midpoint())
    return SingularSet(tuple(locations))


def _same_location(a: RootLocation, b: RootLocation) -> bool:
    if a.is_exact and b.is_exact:
        return a.exact == b.exact
    return a.lo == b.lo and a.hi == b.hi


def apply_linear_change(
    sys: LinearSystem, F: Sequence[Sequence[Entry]]
) -> LinearSystem:
    """Transform by z = F(t) x; requires F invertible on the whole interval.

    The transformed data is ((dF/dt) + F A) F^{-1} and F b.
    """
    n = sys.n
    F_rf = tuple(tuple(RationalFunction.of(e) for e in row) for row in F)
    if len(F_rf) != n or any(len(row) != n for row in F_rf):
        raise ValueError("change-of-variables matrix has wrong shape")
    lo, hi = sys.interval
    for row in F_rf:
        for f in row:
            if f.den.degree > 0 and count_real_roots_closed(f.den, lo, hi):
                raise SingularChangeError(
                    f"entry {f.to_str()} of F has a pole inside the interval"
                )
    det = RationalFunction.of(exact_det(F_rf))
    if det.is_zero:
        raise SingularChangeError("det F is identically zero")
    if det.num.degree > 0 and count_real_roots_closed(det.num, lo, hi):
        raise SingularChangeError("det F vanishes inside the interval")

    inv = rf_matrix_inverse(F_rf, det)
    new_pieces_A = []
    new_pieces_b = []
    for piece in sys.pieces:
        fdot = tuple(tuple(f.derivative() for f in row) for row in F_rf)
        fa = _rf_mat_mul(F_rf, piece.A)
        top = tuple(
            tuple(fdot[i][j] + fa[i][j] for j in range(n)) for i in range(n)
        )
        new_A = _rf_mat_mul(top, inv)
        new_b = tuple(mat_vec(F_rf, piece.b))
        new_pieces_A.append(new_A)
        new_pieces_b.append(new_b)
    if not sys.is_piecewise:
        return LinearSystem(new_pieces_A[0], new_pieces_b[0], sys.interval)
    # Rebuild piecewise entries from the transformed pieces.
    bps = [p.interval[1] for p in sys.pieces[:-1]]
    A_entries = [
        [
            PiecewiseRF(sys.interval, bps, [pa[i][j] for pa in new_pieces_A])
            for j in range(n)
        ]
        for i in range(n)
    ]
    b_entries = [
        PiecewiseRF(sys.interval, bps, [pb[i] for pb in new_pieces_b])
        for i in range(n)
    ]
    return LinearSystem(A_entries, b_entries, sys.interval)


def rf_matrix_inverse(
    m: Sequence[Sequence[RationalFunction]], det: RationalFunction | None = None
) -> tuple[tuple[RationalFunction, ...], ...]:
    """Inverse of a rational-function matrix via the adjugate."""
    n = len(m)
    if det is None:
        det = RationalFunction.of(exact_det(m))
    if det.is_zero:
        raise ZeroDivisionError("matrix is singular")
    if n == 1:
        return ((RationalFunction.one() / m[0][0],),)
    out = [[RationalFunction.zero()] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            minor = [
                [m[r][c] for c in range(n) if c != j]
                for r in range(n)
                if r != i
            ]
            cof = RationalFunction.of(exact_det(minor))
            if (i + j) % 2:
                cof = -cof
            out[j][i] = cof / det
    return tuple(tuple(row) for row in out)


def _rf_mat_mul(a, b):
    n = len(a)
    cols = len(b[0])
    inner = len(b)
    return tuple(
        tuple(
            sum(
                (a[i][k] * b[k][j] for k in range(inner)),
                RationalFunction.zero(),
            )
            for j in range(cols)
        )
        for i in range(n)
    )


def verify_invariant_identity(data: ControllabilityData, gamma: InvariantVector) -> bool:
    """Check (controllability matrix) * gamma == chain vector n, exactly."""
    produced = mat_vec(data.matrix, gamma.components)
    return all(p == q for p, q in zip(produced, data.vector(data.n)))


@dataclass(frozen=True)
class FundamentalSeries:
    """Taylor data of the fundamental matrix and of the driftless input vector.

    phi satisfies phi' = A phi with phi(point) = identity, as power series
    in (t - point) through the requested order; g is the series of
    phi^{-1} b, the input vector of the equivalent driftless system.
    """

    point: Fraction
    order: int
    phi: tuple  # phi[k] is an n x n tuple-matrix of Fractions
    phi_inv: tuple
    g: tuple  # g[k] is an n-vector of Fractions


def fundamental_matrix_series(
    sys: LinearSystem, point: Rat, order: int
) -> FundamentalSeries:
    """Power-series solution of the matrix Cauchy problem at a rational point."""
    point = Fraction(point)
    piece = sys.piece_at(point)
    n = piece.n
    a_series = [
        [expand(piece.A[i][j], point, order) for j in range(n)] for i in range(n)
    ]
    b_series = [expand(piece.b[i], point, order) for i in range(n)]
    for row in a_series + [b_series]:
        for s in row:
            if not s.is_zero and s.lowest < 0:
                raise ValueError("system entry has a pole at the expansion point")

    def zeros() -> list[list[Fraction]]:
        return [[Fraction(0)] * n for _ in range(n)]

    ident = [[Fraction(1 if i == j else 0) for j in range(n)] for i in range(n)]
    phi: list[list[list[Fraction]]] = [ident]
    for k in range(order):
        nxt = zeros()
        for i_idx in range(k + 1):
            for r in range(n):
                for c in range(n):
                    acc = Fraction(0)
                    for m_idx in range(n):
                        acc += a_series[r][m_idx].coefficient(i_idx) * phi[k - i_idx][m_idx][c]
                    nxt[r][c] += acc
        phi.append([[v / (k + 1) for v in row] for row in nxt])

    phi_inv: list[list[list[Fraction]]] = [ident]
    for k in range(1, order + 1):
        acc = zeros()
        for i_idx in range(k):
            for r in range(n):
                for c in range(n):
                    s = Fraction(0)
                    for m_idx in range(n):
                        s += phi_inv[i_idx][r][m_idx] * phi[k - i_idx][m_idx][c]
                    acc[r][c] += s
        phi_inv.append([[-v for v in row] for row in acc])

    g: list[list[Fraction]] = []
    for k in range(order + 1):
        vec = [Fraction(0)] * n
        for i_idx in range(k + 1):
            for r in range(n):
                acc = Fraction(0)
                for m_idx in range(n):
                    acc += phi_inv[i_idx][r][m_idx] * b_series[m_idx].coefficient(k - i_idx)
                vec[r] += acc
        g.append(vec)

    def freeze(mats):
        return tuple(tuple(tuple(row) for row in m) for m in mats)

    return FundamentalSeries(
        point, order, freeze(phi), freeze(phi_inv), tuple(tuple(v) for v in g)
    )
