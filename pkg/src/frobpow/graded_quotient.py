"""Hilbert functions, socles and colon slices of Artinian quotients R/I^[q].

Everything is degree-by-degree exact linear algebra over F_p.  For a ring
R = S/(relations) and homogeneous generators g_1,...,g_s of I, the slices
of R/I^[q] are the slices of S modulo (relations) + (g_1^q,...,g_s^q);
iteration stops at the first zero slice (a standard graded quotient stays
zero afterwards) and a safety bound turns runaway iteration into a
NonArtinian error.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .engine import MacaulaySlices, NonArtinianError, SliceRing, caps_from_gens
from .gfp_linalg import rank
from .polyring import (
    Poly,
    RingSpec,
    frobenius_power,
    is_homogeneous,
    parse_ideal,
    poly_degree,
    poly_key,
)

__all__ = [
    "HilbertTable",
    "SocleProfile",
    "QuotientSlice",
    "NonArtinianError",
    "quotient_slices",
    "hilbert_kunz",
    "socle_profile",
    "top_socle_degree",
    "colon_slice",
    "socle_growth_report",
]


@dataclass
class HilbertTable:
    """degree -> dimension of an Artinian graded quotient."""

    dims: dict

    @property
    def total_length(self) -> int:
        return sum(self.dims.values())

    @property
    def top_degree(self) -> int:
        return max((d for d, k in self.dims.items() if k), default=-1)

    def series(self) -> list:
        """Hilbert series as a dense coefficient list."""
        top = self.top_degree
        return [self.dims.get(d, 0) for d in range(top + 1)]


@dataclass
class SocleProfile:
    """degree -> dimension of the socle (0 : m) of an Artinian quotient."""

    dims: dict

    @property
    def total(self) -> int:
        return sum(self.dims.values())

    @property
    def top_degree(self) -> int:
        return max((d for d, k in self.dims.items() if k), default=-1)


@dataclass
class QuotientSlice:
    degree: int
    basis: tuple
    _reduce: object = field(repr=False, default=None)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def reduce(self, mono) -> np.ndarray:
        """Coordinates of an ambient monomial of this degree over the basis."""
        if sum(mono) != self.degree:
            raise ValueError("monomial degree does not match slice degree")
        return self._reduce(mono)


def _frobenius_gens(spec: RingSpec, ideal_gens, q: int) -> list:
    gens = parse_ideal(spec, ideal_gens)
    if not gens:
        raise ValueError("ideal needs at least one generator")
    for g in gens:
        if not is_homogeneous(g):
            raise ValueError("ideal generators must be homogeneous")
    return [frobenius_power(g, q, spec.p) for g in gens]


def _artinian_bound(spec: RingSpec, fgens) -> int:
    caps = caps_from_gens(spec.nvars, list(spec.relations) + fgens)
    if all(c is not None for c in caps):
        return sum(c - 1 for c in caps) + 1
    rel = sum(poly_degree(r) for r in spec.relations)
    return rel + sum(poly_degree(g) for g in fgens) + spec.nvars


def _engine_dims(ring, bound: int) -> dict:
    dims = {}
    d = 0
    while True:
        k = ring.dim(d)
        if k == 0:
            return dims
        dims[d] = k
        d += 1
        if d > bound:
            raise NonArtinianError(
                f"slices still nonzero past degree bound {bound}", dims=dims
            )


def _build(spec: RingSpec, ideal_gens, q: int, strategy: str):
    """Slice backend plus its Artinian dimension table."""
    fgens = _frobenius_gens(spec, ideal_gens, q)
    all_gens = list(spec.relations) + fgens
    bound = _artinian_bound(spec, fgens)
    if strategy in ("auto", "engine"):
        ring = SliceRing(spec.p, spec.nvars, all_gens)
        dims = _engine_dims(ring, bound)
        return ring, dims
    if strategy == "capped":
        mac = MacaulaySlices(spec.p, spec.nvars, all_gens, capped=True)
    elif strategy == "naive":
        mac = MacaulaySlices(spec.p, spec.nvars, all_gens, capped=False)
    else:
        raise ValueError(f"unknown strategy {strategy!r}")
    dims = mac.top_bound_scan(bound)
    return mac, dims


_table_cache: dict = {}
_socle_cache: dict = {}


def _cache_key(spec: RingSpec, ideal_gens, q: int, strategy: str):
    gens = parse_ideal(spec, ideal_gens)
    return (spec.key(), tuple(poly_key(g) for g in gens), q, strategy)


def quotient_slices(spec: RingSpec, ideal_gens, q: int, *, strategy: str = "auto"):
    """Map degree -> QuotientSlice of R/I^[q], R = S/(relations)."""
    backend, dims = _build(spec, ideal_gens, q, strategy)
    out = {}
    if isinstance(backend, SliceRing):
        for d in dims:
            out[d] = QuotientSlice(d, tuple(backend.basis(d)), backend.reduce_monomial)
    else:
        for d in dims:
            coords = backend.reduce_matrix(d)
            index = {m: i for i, m in enumerate(backend._slice(d)[0])}

            def make_reduce(coords=coords, index=index):
                def _reduce(mono):
                    j = index.get(tuple(mono))
                    if j is None:
                        return np.zeros(coords.shape[0], dtype=np.int64)
                    return coords[:, j].copy()

                return _reduce

            out[d] = QuotientSlice(d, tuple(backend.basis(d)), make_reduce())
    return out


def hilbert_kunz(spec: RingSpec, ideal_gens, q: int, *, strategy: str = "auto") -> HilbertTable:
    """Hilbert table of R/I^[q]; its total length is the Hilbert-Kunz value."""
    key = _cache_key(spec, ideal_gens, q, strategy)
    hit = _table_cache.get(key)
    if hit is None:
        _, dims = _build(spec, ideal_gens, q, strategy)
        hit = HilbertTable(dict(dims))
        _table_cache[key] = hit
    return HilbertTable(dict(hit.dims))


def top_socle_degree(spec: RingSpec, ideal_gens, q: int, *, strategy: str = "auto") -> int:
    """Largest degree with a nonzero slice of R/I^[q]."""
    return hilbert_kunz(spec, ideal_gens, q, strategy=strategy).top_degree


def socle_profile(spec: RingSpec, ideal_gens, q: int, *, strategy: str = "auto") -> SocleProfile:
    """Per-degree dimensions of (0 : m) in R/I^[q].

    The socle in degree d is the joint kernel of multiplication by every
    variable into degree d+1, computed as the nullspace of the stacked
    multiplication matrices.
    """
    key = _cache_key(spec, ideal_gens, q, strategy)
    hit = _socle_cache.get(key)
    if hit is None:
        backend, dims = _build(spec, ideal_gens, q, strategy)
        p = spec.p
        soc = {}
        for d, k in dims.items():
            stacked = np.vstack([backend.mult(i, d) for i in range(spec.nvars)])
            nullity = k - rank(stacked, p)
            if nullity:
                soc[d] = nullity
        hit = SocleProfile(soc)
        _socle_cache[key] = hit
    return SocleProfile(dict(hit.dims))


def colon_slice(spec: RingSpec, modulus_gens, divisor, q: int, *, scan_window: int = None) -> HilbertTable:
    """Per-degree dims of ((J^[q] : u^q)/J^[q]) for J = (modulus_gens), u = divisor.

    Degree d of the colon quotient is the kernel dimension of
    multiplication by u^q from slice d of R/J^[q] into slice d + q*deg(u).
    When R/J^[q] is Artinian the scan stops at its top degree; otherwise
    J + uR must be m-primary and the scan runs to a bound derived from
    t.s.d(R/(J+uR)^[q]), asserting a trailing window of zero dims.
    """
    gens = parse_ideal(spec, modulus_gens)
    u = parse_ideal(spec, [divisor] if isinstance(divisor, (str, dict)) else divisor)[0]
    du = poly_degree(u)
    fgens = [frobenius_power(g, q, spec.p) for g in gens]
    uq = frobenius_power(u, q, spec.p)
    ring = SliceRing(spec.p, spec.nvars, list(spec.relations) + fgens)

    bound = _artinian_bound(spec, fgens)
    dims_td = {}
    artinian = True
    d = 0
    while True:
        k = ring.dim(d)
        if k == 0:
            break
        dims_td[d] = k
        d += 1
        if d > bound:
            artinian = False
            break
    if artinian:
        scan_to = max(dims_td, default=-1)
        window = 0
    else:
        combined = hilbert_kunz(spec, gens + [u], q)  # must be Artinian
        window = scan_window if scan_window is not None else q * du + 2
        scan_to = combined.top_degree + q * du + window

    out = {}
    last_nonzero = -1
    for d in range(scan_to + 1):
        k = ring.dim(d)
        if k == 0:
            if artinian:
                break
            continue
        target = ring.dim(d + q * du)
        if target == 0:
            nullity = k
        else:
            nullity = k - rank(ring.poly_action(uq, d), spec.p)
        if nullity:
            out[d] = nullity
            last_nonzero = d
    if not artinian and last_nonzero > scan_to - window:
        raise NonArtinianError(
            "colon scan bound reached with nonzero slices; increase scan_window",
            dims=out,
        )
    return HilbertTable(out)


def socle_growth_report(spec: RingSpec, ideal_gens, qs, *, ring_dim: int = None):
    """Socle lengths and their q^{max(0, dim-2)}-normalized ratios.

    ring_dim defaults to nvars - #relations (correct for complete
    intersection presentations).
    """
    from fractions import Fraction

    n = ring_dim if ring_dim is not None else spec.nvars - len(spec.relations)
    e = max(0, n - 2)
    rows = []
    for q in qs:
        length = socle_profile(spec, ideal_gens, q).total
        rows.append((q, length, Fraction(length, q**e)))
    return rows
