"""Exact root machinery for univariate polynomials.

Integer and rational roots are found completely by divisor enumeration
(rational root theorem).  Real roots are isolated with Sturm sequences on
the squarefree part; multiplicities come from a Yun squarefree
decomposition.  Complex root magnitudes are bounded (never approximated)
with power-of-two Cauchy-style bounds so that downstream radius estimates
stay valid underestimates.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Sequence

from .poly import Rat, UniPoly


def _integer_coeffs(p: UniPoly) -> list[int]:
    """Coefficients of p rescaled to coprime integers."""
    prim = p.primitive()
    return [int(c) for c in prim.coeffs]


def _divisors(n: int) -> list[int]:
    n = abs(n)
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d != n // d:
                large.append(n // d)
        d += 1
    return small + large[::-1]


def _root_multiplicity(p: UniPoly, root: Fraction) -> int:
    m = 0
    lin = UniPoly((-root, 1))
    while not p.is_zero and p.eval(root) == 0:
        p = p.exact_div(lin)
        m += 1
    return m


def integer_roots(p: UniPoly) -> dict[int, int]:
    """All integer roots of p with multiplicities.

    Denominators are cleared, the power of the variable dividing p is
    factored out (contributing the root 0), and the remaining candidates
    are the divisors of the constant term, tested by exact evaluation.
    """
    if p.is_zero:
        raise ValueError("integer_roots of the zero polynomial")
    coeffs = _integer_coeffs(p)
    shift = 0
    while coeffs and coeffs[0] == 0:
        coeffs.pop(0)
        shift += 1
    roots: dict[int, int] = {}
    if shift:
        roots[0] = shift
    if not coeffs or len(coeffs) == 1:
        return roots
    reduced = UniPoly(coeffs)
    for d in _divisors(coeffs[0]):
        for cand in (d, -d):
            if reduced.eval(cand) == 0:
                roots[cand] = _root_multiplicity(reduced, Fraction(cand))
    return roots


def rational_roots(p: UniPoly) -> dict[Fraction, int]:
    """All rational roots of p with multiplicities (rational root theorem)."""
    if p.is_zero:
        raise ValueError("rational_roots of the zero polynomial")
    coeffs = _integer_coeffs(p)
    shift = 0
    while coeffs and coeffs[0] == 0:
        coeffs.pop(0)
        shift += 1
    roots: dict[Fraction, int] = {}
    if shift:
        roots[Fraction(0)] = shift
    if not coeffs or len(coeffs) == 1:
        return roots
    reduced = UniPoly(coeffs)
    for q in _divisors(coeffs[-1]):
        for d in _divisors(coeffs[0]):
            if gcd(d, q) != 1:
                continue
            for cand in (Fraction(d, q), Fraction(-d, q)):
                if cand not in roots and reduced.eval(cand) == 0:
                    roots[cand] = _root_multiplicity(reduced, cand)
    return roots


def deflate_rational_roots(p: UniPoly) -> tuple[dict[Fraction, int], UniPoly]:
    """Split p into its rational roots and the rational-root-free cofactor."""
    roots = rational_roots(p)
    rest = p
    for r, m in roots.items():
        rest = rest.exact_div(UniPoly((-r, 1)) ** m)
    return roots, rest


# ---------------------------------------------------------------------------
# Sturm sequences and real-root isolation


def sturm_chain(p: UniPoly) -> list[UniPoly]:
    """Sturm chain of the squarefree part of p."""
    f = p.squarefree_part().primitive()
    chain = [f, f.derivative().primitive()]
    while not chain[-1].is_zero:
        r = -(chain[-2] % chain[-1])
        if r.is_zero:
            break
        chain.append(r.primitive())
    return [q for q in chain if not q.is_zero]


def _sign_variations(values: Sequence[Fraction]) -> int:
    signs = [1 if v > 0 else -1 for v in values if v != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def sturm_variations(chain: Sequence[UniPoly], x: Fraction) -> int:
    return _sign_variations([q.eval(x) for q in chain])


def count_roots_half_open(chain: Sequence[UniPoly], a: Fraction, b: Fraction) -> int:
    """Number of distinct real roots in (a, b] for a chain of squarefree p."""
    if a >= b:
        return 0
    return sturm_variations(chain, a) - sturm_variations(chain, b)


@dataclass(frozen=True)
class RootLocation:
    """A single real root: exact if rational, else an isolating interval.

    For interval roots the open interval (lo, hi) contains exactly one
    root of the squarefree part and neither endpoint is a root.
    """

    lo: Fraction
    hi: Fraction
    exact: Fraction | None
    multiplicity: int

    @property
    def is_exact(self) -> bool:
        return self.exact is not None

    def midpoint(self) -> Fraction:
        if self.exact is not None:
            return self.exact
        return (self.lo + self.hi) / 2

    def width(self) -> Fraction:
        if self.exact is not None:
            return Fraction(0)
        return self.hi - self.lo


def squarefree_decomposition(p: UniPoly) -> list[tuple[UniPoly, int]]:
    """Yun's algorithm: p = lead · ∏ q_i^i with the q_i squarefree, coprime."""
    if p.is_zero:
        raise ValueError("squarefree decomposition of zero")
    p = p.monic()
    if p.degree == 0:
        return []
    out: list[tuple[UniPoly, int]] = []
    g = p.gcd(p.derivative())
    if g.degree == 0:
        return [(p, 1)]
    w = p.exact_div(g)
    y = p.derivative().exact_div(g)
    i = 1
    while True:
        z = y - w.derivative()
        if z.is_zero:
            if w.degree > 0:
                out.append((w.monic(), i))
            return out
        f = w.gcd(z)
        if f.degree > 0:
            out.append((f.monic(), i))
        w = w.exact_div(f)
        y = z.exact_div(f)
        i += 1


def _refine_onto(chain: Sequence[UniPoly], f: UniPoly, lo: Fraction, hi: Fraction, width: Fraction) -> RootLocation | None:
    """Shrink (lo, hi] around its single root; returns exact hit if found."""
    mult = 1  # caller overwrites
    while hi - lo > width:
        mid = (lo + hi) / 2
        if f.eval(mid) == 0:
            return RootLocation(mid, mid, mid, mult)
        if count_roots_half_open(chain, lo, mid) == 1:
            hi = mid
        else:
            lo = mid
    return RootLocation(lo, hi, None, mult)


def isolate_real_roots(
    p: UniPoly,
    lo: Fraction,
    hi: Fraction,
    width: Fraction = Fraction(1, 1024),
) -> list[RootLocation]:
    """Isolate all distinct real roots of p in the closed interval [lo, hi].

    Rational roots are reported exactly; the rest get pairwise disjoint
    isolating intervals no wider than `width`, none containing a rational
    root.  Multiplicities refer to p itself.
    """
    if p.is_zero:
        raise ValueError("cannot isolate roots of the zero polynomial")
    if lo > hi:
        raise ValueError("empty interval")
    exact: list[RootLocation] = []
    rat, rest = deflate_rational_roots(p)
    for r, m in sorted(rat.items()):
        if lo <= r <= hi:
            exact.append(RootLocation(r, r, r, m))
    # (chain, factor, mult, lo, hi) work items; the open interval holds
    # exactly one root of its own squarefree factor.
    pending: list[tuple[list[UniPoly], UniPoly, int, Fraction, Fraction]] = []
    if rest.degree > 0:
        for factor, mult in squarefree_decomposition(rest):
            if factor.degree == 0:
                continue
            chain = sturm_chain(factor)
            # Endpoints are never roots here: rational roots were deflated.
            stack = [(lo, hi, count_roots_half_open(chain, lo, hi))]
            while stack:
                a, b, count = stack.pop()
                if count == 0:
                    continue
                if count == 1:
                    a, b = _shrink(chain, a, b, width)
                    pending.append((chain, factor, mult, a, b))
                    continue
                mid = (a + b) / 2
                left = count_roots_half_open(chain, a, mid)
                stack.append((a, mid, left))
                stack.append((mid, b, count - left))
    pending = _separate(pending, exact)
    out = exact + [RootLocation(a, b, None, m) for (_, _, m, a, b) in pending]
    out.sort(key=lambda loc: loc.midpoint())
    return out


def _shrink(
    chain: Sequence[UniPoly], lo: Fraction, hi: Fraction, width: Fraction
) -> tuple[Fraction, Fraction]:
    """Bisect (lo, hi], known to hold one chain root, down to `width`."""
    while hi - lo > width:
        mid = (lo + hi) / 2
        if count_roots_half_open(chain, lo, mid) == 1:
            hi = mid
        else:
            lo = mid
    return lo, hi


def _separate(pending: list, exact: list[RootLocation]) -> list:
    """Shrink intervals until disjoint from each other and all exact roots."""
    while True:
        pending.sort(key=lambda item: item[3])
        clash = False
        for (_, _, _, a1, b1), (_, _, _, a2, _) in zip(pending, pending[1:]):
            if b1 > a2:
                clash = True
        for loc in exact:
            for _, _, _, a, b in pending:
                if a < loc.exact < b:
                    clash = True
        if not clash:
            return pending
        pending = [
            (chain, f, m) + _shrink(chain, a, b, (b - a) / 4)
            for (chain, f, m, a, b) in pending
        ]


def real_roots_in_interval(
    p: UniPoly, interval: tuple[Rat, Rat], width: Fraction = Fraction(1, 1024)
) -> list[RootLocation]:
    """Spec entry point: distinct real roots of p inside a closed interval."""
    return isolate_real_roots(p, Fraction(interval[0]), Fraction(interval[1]), width)


def refine_root(p: UniPoly, loc: RootLocation, width: Fraction) -> RootLocation:
    """Narrow an isolating interval to the requested width."""
    if loc.is_exact or loc.width() <= width:
        return loc
    chain = sturm_chain(p)
    refined = _refine_onto(chain, p.squarefree_part(), loc.lo, loc.hi, width)
    assert refined is not None
    return RootLocation(refined.lo, refined.hi, refined.exact, loc.multiplicity)


def count_real_roots_closed(p: UniPoly, lo: Fraction, hi: Fraction) -> int:
    """Number of distinct real roots of p in [lo, hi]."""
    if p.is_zero:
        raise ValueError("zero polynomial")
    if p.is_constant:
        return 0
    chain = sturm_chain(p)
    n = count_roots_half_open(chain, lo, hi)
    if p.eval(lo) == 0:
        n += 1
    return n


def has_real_root_in(p: UniPoly, lo: Fraction, hi: Fraction) -> bool:
    return count_real_roots_closed(p, lo, hi) > 0


# ---------------------------------------------------------------------------
# Exact magnitude bounds for complex roots


def root_modulus_upper_bound(p: UniPoly) -> Fraction:
    """Smallest power of two r with |root| <= r for every complex root.

    Uses the certificate |a_d| r^d >= sum_{i<d} |a_i| r^i, which rules out
    roots of modulus beyond r; the power-of-two choice keeps the bound
    reproducible across runs.
    """
    if p.degree < 1:
        raise ValueError("bound needs degree >= 1")
    coeffs = [abs(c) for c in p.coeffs]
    lead = coeffs[-1]
    d = len(coeffs) - 1

    def holds(r: Fraction) -> bool:
        total = Fraction(0)
        power = Fraction(1)
        for c in coeffs[:-1]:
            total += c * power
            power *= r
        return lead * power >= total

    r = Fraction(1)
    if holds(r):
        while holds(r / 2):
            r /= 2
            if r < Fraction(1, 2**64):  # all roots at 0; caller deflated them
                break
        return r
    while not holds(r):
        r *= 2
    return r


def nonzero_root_modulus_lower_bound(p: UniPoly) -> Fraction | None:
    """Power-of-two lower bound on |root| over all nonzero complex roots.

    None when p has no nonzero roots.  The reciprocal polynomial maps
    nonzero roots to their inverses, so an upper bound there inverts to a
    valid lower bound here.
    """
    if p.is_zero:
        raise ValueError("zero polynomial")
    coeffs = list(p.coeffs)
    while coeffs and coeffs[0] == 0:
        coeffs.pop(0)
    if len(coeffs) <= 1:
        return None
    reversed_poly = UniPoly(tuple(reversed(coeffs)))
    return 1 / root_modulus_upper_bound(reversed_poly)


def cauchy_positive_bound(p: UniPoly) -> int:
    """Integer B such that p has no real root > B (Cauchy bound, ceiling)."""
    if p.degree < 1:
        raise ValueError("bound needs degree >= 1")
    lead = abs(p.leading)
    mx = max(abs(c) for c in p.coeffs[:-1]) if p.degree >= 1 else Fraction(0)
    bound = 1 + mx / lead
    return int(bound) + 1
