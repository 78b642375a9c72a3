"""Strong-semistability classification for syzygy bundles on Fermat curves.

For R = F_p[x,y,z]/(x^n + y^n + z^n) with p not dividing n and
I = (x^d, y^d, z^d), finiteness of pd I^[q] is decided from the Hilbert
series of R/I^[q]: when the quotient has the two-step free resolution
with back twists b1 <= b2, its series times (1-t)^3/(1-t^n) collapses to
1 - 3 t^{qd} + t^{b1} + t^{b2}, and the division is exact.  The verdict
tree combines that probe with the syzygy-gap test (n | d) and the
diagonal F-threshold estimate.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import isqrt

from .fthreshold import estimate_c
from .graded_quotient import hilbert_kunz
from .polyring import RingSpec, parse_poly

__all__ = [
    "PdProbe",
    "SemistabilityVerdict",
    "pd_probe",
    "syzygy_gap",
    "classify",
]


def _fermat_spec(p: int, n: int) -> RingSpec:
    base = RingSpec(p, ("x", "y", "z"))
    rel = parse_poly(f"x^{n}+y^{n}+z^{n}", base)
    return RingSpec(p, ("x", "y", "z"), (rel,))


def _diagonal_gens(spec: RingSpec, d: int):
    return [parse_poly(f"{v}^{d}", spec) for v in spec.vars]


@dataclass
class PdProbe:
    q: int
    finite: bool
    b1: int | None
    b2: int | None
    series: list  # Hilbert series coefficients of R/I^[q]


def _poly_mul_list(a: list, b: list) -> list:
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] += ai * bj
    return out


def _poly_divide_exact(num: list, den: list):
    """Exact division of integer polynomials; None if inexact."""
    num = list(num)
    while num and num[-1] == 0:
        num.pop()
    den = list(den)
    while den and den[-1] == 0:
        den.pop()
    if not num:
        return []
    if len(num) < len(den):
        return None
    out = [0] * (len(num) - len(den) + 1)
    lead = den[-1]
    for k in range(len(out) - 1, -1, -1):
        if num[k + len(den) - 1] % lead:
            return None
        c = num[k + len(den) - 1] // lead
        out[k] = c
        if c:
            for j, dj in enumerate(den):
                num[k + j] -= c * dj
    if any(num[: len(den) - 1]):
        return None
    return out


def pd_probe(p: int, n: int, d: int, q: int) -> PdProbe:
    """Probe finiteness of pd I^[q] and extract back twists when finite."""
    if n % p == 0:
        raise ValueError("need p not dividing n (smooth curve)")
    if n < 3 or d < 1:
        raise ValueError("need n >= 3 and d >= 1")
    spec = _fermat_spec(p, n)
    table = hilbert_kunz(spec, _diagonal_gens(spec, d), q)
    series = table.series()

    one_minus_t_cubed = [1, -3, 3, -1]
    num = _poly_mul_list(series, one_minus_t_cubed)
    den = [1] + [0] * (n - 1) + [-1]  # 1 - t^n times -1 ... handled below
    # divide by (1 - t^n): coefficients [1, 0, ..., 0, -1]
    quotient = _poly_divide_exact(num, [1] + [0] * (n - 1) + [-1])
    if quotient is None:
        return PdProbe(q, False, None, None, series)
    # match 1 - 3 t^{qd} + t^{b1} + t^{b2}
    coeffs = dict(enumerate(quotient))
    coeffs = {k: v for k, v in coeffs.items() if v}
    if coeffs.get(0) != 1:
        return PdProbe(q, False, None, None, series)
    coeffs.pop(0)
    qd = q * d
    coeffs[qd] = coeffs.get(qd, 0) + 3
    if any(v < 0 for v in coeffs.values()) or sum(coeffs.values()) != 2:
        return PdProbe(q, False, None, None, series)
    twists = sorted(k for k, v in coeffs.items() for _ in range(v))
    if len(twists) != 2 or any(b < 1 for b in twists):
        return PdProbe(q, False, None, None, series)
    b1, b2 = twists
    assert b1 + b2 == 3 * q * d, "back twists must sum to 3qd"
    return PdProbe(q, True, b1, b2, series)


def syzygy_gap(a: int, p: int) -> int:
    """Syzygy gap of x^a, y^a, (x+y)^a in F_p[x,y].

    delta^2 = 4 * length(F_p[x,y]/(x^a, y^a, (x+y)^a)) - 3 a^2; the right
    side is always a perfect square (an assertion guards this).
    """
    if a < 1:
        raise ValueError("need a >= 1")
    spec = RingSpec(p, ("x", "y"))
    gens = [
        parse_poly(f"x^{a}", spec),
        parse_poly(f"y^{a}", spec),
        parse_poly(f"(x+y)^{a}", spec),
    ]
    lam = hilbert_kunz(spec, gens, 1).total_length
    val = 4 * lam - 3 * a * a
    assert val >= 0, "syzygy gap square must be nonnegative"
    root = isqrt(val)
    assert root * root == val, f"4*lambda - 3a^2 = {val} is not a perfect square"
    return root


@dataclass
class SemistabilityVerdict:
    status: str  # SS | NotSS | SS-empirical | Inconclusive
    evidence: list = field(default_factory=list)  # (rule, data) pairs
    c_estimate: Fraction | None = None
    probes: list = field(default_factory=list)
    note: str | None = None


def classify(p: int, n: int, d: int, q_max: int | None = None) -> SemistabilityVerdict:
    """Decide strong semistability of Syz(x^d, y^d, z^d) on x^n+y^n+z^n = 0.

    (i) n | d: decided by the syzygy gap of x^a, y^a, (x+y)^a, a = d/n.
    (ii) otherwise probe q = 1, p, p^2, ... <= q_max; the first finite-pd
    probe decides via b1 = b2.  (iii) all probes infinite: SS-empirical
    with the diagonal F-threshold estimate as supporting evidence,
    downgraded to Inconclusive if that estimate exceeds 3d/2.
    """
    if n % p == 0:
        raise ValueError("need p not dividing n")
    if n < 3 or d < 1:
        raise ValueError("need n >= 3 and d >= 1")
    if q_max is None:
        q_max = 128 if p == 2 else p**3
    note = (
        "p=2 verdicts rely on the Hilbert-series division test alone"
        if p == 2
        else None
    )

    if n % 1 == 0 and d % n == 0:
        a = d // n
        delta = syzygy_gap(a, p)
        if delta == 0:
            return SemistabilityVerdict(
                "SS", [("syzygy_gap", {"a": a, "delta": 0})], Fraction(3 * d, 2), [], note
            )
        return SemistabilityVerdict(
            "NotSS", [("syzygy_gap", {"a": a, "delta": delta})], None, [], note
        )

    probes = []
    q = 1
    seen_finite = False
    while q <= q_max:
        probe = pd_probe(p, n, d, q)
        probes.append(probe)
        if seen_finite and not probe.finite:
            raise AssertionError(
                "pd finiteness is monotone in q; infinite probe after a finite one"
            )
        if probe.finite:
            seen_finite = True
            c_est = Fraction(max(probe.b1, probe.b2), probe.q)
            if probe.b1 == probe.b2:
                return SemistabilityVerdict(
                    "SS",
                    [("back_twists", {"q": probe.q, "b1": probe.b1, "b2": probe.b2})],
                    c_est,
                    probes,
                    note,
                )
            return SemistabilityVerdict(
                "NotSS",
                [("back_twists", {"q": probe.q, "b1": probe.b1, "b2": probe.b2})],
                c_est,
                probes,
                note,
            )
        q = p if q == 1 else q * p

    spec = _fermat_spec(p, n)
    est = estimate_c(spec, _diagonal_gens(spec, d), q_max)
    c_val = est.c if est.c is not None else est.interval[0]
    evidence = [
        ("all_probes_infinite", {"q_max": q_max}),
        ("c_estimate", {"c": str(c_val), "fitted": est.fitted is not None}),
    ]
    if c_val > Fraction(3 * d, 2):
        return SemistabilityVerdict("Inconclusive", evidence, c_val, probes, note)
    return SemistabilityVerdict("SS-empirical", evidence, c_val, probes, note)
