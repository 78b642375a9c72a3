"""Diagonal F-threshold estimation from top socle degree samples.

The diagonal F-threshold c^I(R) is the limit of t.s.d(R/I^[q])/q.  For a
complete intersection presentation the sequence (t.s.d - a)/q is
nondecreasing (a the a-invariant), which gives certified lower bounds;
the estimate itself comes from fitting the eventually-affine law
t.s.d(q) = floor(alpha q) + beta against the computed samples with
small-denominator rational reconstruction.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .engine import SliceRing
from .graded_quotient import hilbert_kunz, top_socle_degree
from .polyring import RingSpec, parse_ideal, poly_degree

__all__ = [
    "AInvariantReport",
    "FThresholdEstimate",
    "KVBoundReport",
    "NotCompleteIntersectionError",
    "a_invariant",
    "estimate_c",
    "ehk_from_c",
    "kv_bound_check",
]


class NotCompleteIntersectionError(ValueError):
    """The relations do not present a complete intersection."""


@dataclass
class AInvariantReport:
    a: int
    relation_degrees: tuple
    nvars: int


def _ci_series_coeffs(degrees, nvars: int, through: int) -> list:
    """Coefficients of prod(1 - t^d) / (1 - t)^nvars through a degree."""
    coeffs = [0] * (through + 1)
    # (1 - t)^{-nvars}
    from math import comb

    for i in range(through + 1):
        coeffs[i] = comb(i + nvars - 1, nvars - 1)
    for d in degrees:
        nxt = list(coeffs)
        for i in range(d, through + 1):
            nxt[i] -= coeffs[i - d]
        coeffs = nxt
    return coeffs


def a_invariant(spec: RingSpec) -> AInvariantReport:
    """a(R) = sum(deg f_i) - #vars for a complete intersection S/(f_1..f_t).

    Certifies the regular-sequence hypothesis by comparing slice
    dimensions of S/(relations) against the complete-intersection Hilbert
    series through degree sum(deg f_i); raises otherwise.
    """
    degrees = tuple(poly_degree(r) for r in spec.relations)
    through = sum(degrees) if degrees else 0
    expected = _ci_series_coeffs(degrees, spec.nvars, through)
    ring = SliceRing(spec.p, spec.nvars, list(spec.relations))
    for d in range(through + 1):
        if ring.dim(d) != expected[d]:
            raise NotCompleteIntersectionError(
                f"Hilbert series mismatch at degree {d}: "
                f"{ring.dim(d)} != {expected[d]} (relations are not a regular sequence)"
            )
    return AInvariantReport(sum(degrees) - spec.nvars, degrees, spec.nvars)


def is_complete_intersection(spec: RingSpec) -> bool:
    try:
        a_invariant(spec)
        return True
    except NotCompleteIntersectionError:
        return False


@dataclass
class FThresholdEstimate:
    samples: list  # [(q, tsd)]
    lower_bounds: list  # [(q, Fraction)] -- (tsd - a)/q, CI case only
    fitted: tuple | None  # (alpha, beta, q0)
    c: Fraction | None  # point estimate when a law fits
    interval: tuple | None  # (lo, hi) otherwise
    a: int | None
    prop_bound: Fraction | None  # c >= -a for CI with I = m
    hypersurface_bound: Fraction | None  # c >= (#vars)/2 for hypersurfaces, I = m
    empirical: bool = False

    @property
    def c_or_upper(self) -> Fraction:
        return self.c if self.c is not None else self.interval[1]


def _fit_affine_law(samples, max_den: int):
    """Find (alpha, beta, q0) with tsd = floor(alpha q) + beta on a sample tail.

    Requires the last two samples to fit; q0 is the earliest sample from
    which the law reproduces every sample.  Smallest denominator, then
    smallest numerator, wins.
    """
    if len(samples) < 2:
        return None
    (q1, t1), (q2, t2) = samples[-2], samples[-1]
    slope = Fraction(t2 - t1, q2 - q1)
    for den in range(1, max_den + 1):
        lo = int((slope - 1) * den)
        hi = int((slope + 1) * den) + 1
        for num in range(max(lo, 0), hi + 1):
            alpha = Fraction(num, den)
            if alpha.denominator != den:
                continue  # canonical form only
            beta = t2 - (alpha * q2).__floor__()
            if t1 != (alpha * q1).__floor__() + beta:
                continue
            q0 = None
            for q, t in samples:
                if t == (alpha * q).__floor__() + beta:
                    if q0 is None:
                        q0 = q
                else:
                    q0 = None
            if q0 is not None:
                return alpha, beta, q0
    return None


def estimate_c(spec: RingSpec, ideal_gens, q_max: int, *, strategy: str = "auto") -> FThresholdEstimate:
    """Sample t.s.d(R/I^[q]) at q = p, p^2, ..., <= q_max and estimate c^I(R).

    With a fitted affine law the estimate is exact (c = alpha); otherwise
    an interval [best lower bound, tsd(q_max)/q_max + nvars/q_max] is
    reported.  Estimates for rings that are not certified complete
    intersections are flagged empirical.
    """
    p = spec.p
    qs = []
    q = p
    while q <= q_max:
        qs.append(q)
        q *= p
    if not qs:
        raise ValueError(f"q_max {q_max} below p = {p}")
    samples = [(q, top_socle_degree(spec, ideal_gens, q, strategy=strategy)) for q in qs]

    ci = is_complete_intersection(spec)
    a = None
    lower_bounds = []
    prop_bound = None
    hyp_bound = None
    if ci:
        a = a_invariant(spec).a
        lower_bounds = [(q, Fraction(t - a, q)) for q, t in samples]
        seq = [b for _, b in lower_bounds]
        if any(seq[i] > seq[i + 1] for i in range(len(seq) - 1)):
            raise AssertionError(
                "lower-bound sequence (tsd - a)/q decreased; "
                "this indicates a bug or a non-CI input"
            )
        gens = parse_ideal(spec, ideal_gens)
        is_m = sorted(map(tuple, (next(iter(g)) for g in gens))) == sorted(
            tuple(1 if j == i else 0 for j in range(spec.nvars)) for i in range(spec.nvars)
        ) and all(len(g) == 1 for g in gens)
        if is_m:
            prop_bound = Fraction(-a)
            if len(spec.relations) == 1:
                hyp_bound = Fraction(spec.nvars, 2)

    fitted = _fit_affine_law(samples, max_den=2 * p * p)
    if fitted is not None:
        alpha, beta, q0 = fitted
        lows = [b for _, b in lower_bounds]
        if lows and alpha < max(lows):
            raise AssertionError("fitted slope below a certified lower bound")
        return FThresholdEstimate(
            samples, lower_bounds, (alpha, beta, q0), alpha, None, a,
            prop_bound, hyp_bound, empirical=not ci,
        )
    q_last, t_last = samples[-1]
    lo = max((b for _, b in lower_bounds), default=Fraction(0))
    hi = Fraction(t_last, q_last) + Fraction(spec.nvars, q_last)
    return FThresholdEstimate(
        samples, lower_bounds, None, None, (lo, hi), a,
        prop_bound, hyp_bound, empirical=True,
    )


def ehk_from_c(h: int, c) -> Fraction:
    """Hilbert-Kunz multiplicity h(c^2 - 3c + 3) of a degree-h plane curve."""
    c = Fraction(c)
    return h * (c * c - 3 * c + 3)


@dataclass
class KVBoundReport:
    s: int  # t.s.d(R/I)
    a: int
    rows: list  # [(q, tsd, bound, holds, slack)]

    @property
    def all_hold(self) -> bool:
        return all(r[3] for r in self.rows)

    @property
    def all_strict(self) -> bool:
        return all(r[4] > 0 for r in self.rows)


def kv_bound_check(spec: RingSpec, ideal_gens, qs) -> KVBoundReport:
    """Check t.s.d(R/I^[q]) >= (s - a) q + a with s = t.s.d(R/I).

    Requires a complete intersection presentation; reports per-q slack and
    whether the bound is strict everywhere.
    """
    a = a_invariant(spec).a
    s = top_socle_degree(spec, ideal_gens, 1)
    rows = []
    for q in qs:
        t = top_socle_degree(spec, ideal_gens, q)
        bound = (s - a) * q + a
        rows.append((q, t, bound, t >= bound, t - bound))
    return KVBoundReport(s, a, rows)
