"""Degree-by-degree presentations of graded quotients S/(g_1,...,g_r).

Three slice strategies live here.

`SliceRing` is the production path: it never touches the full ambient
monomial basis.  Degree d is presented as a quotient of (n+1) copies of
degree d-1 via multiplication by the variables; the relation space of that
presentation is spanned by the Koszul rows x_j (x_i b) - x_i (x_j b) and,
for each ideal generator g, the rows obtained by splitting one variable
off every term of g * b with b running over the degree-(d - deg g) basis.
(Both families together generate the first syzygies of the variables on
the quotient: lift a syzygy to the free ring, express its value in the
generators, and subtract the corresponding splittings - what remains is a
Koszul syzygy.)  One reduced row echelon form per degree then yields the
slice dimension, monomial coset representatives, and the multiplication
matrices into the next degree.  Matrix widths scale with the quotient's
Hilbert function instead of the ambient monomial count, which is what
makes large Frobenius exponents tractable in four variables.

`macaulay_slice` is the classical ambient approach: row-reduce the span
of {monomial * generator} against a monomial basis of S_d, optionally
restricted to the box cut out by pure-power generators (exponent caps).
The uncapped variant is the brute-force oracle; the capped variant is the
mid-scale cross-check.
"""

from __future__ import annotations

import numpy as np

from .gfp_linalg import matmul_mod, rank, rref
from .polyring import (
    Monomial,
    Poly,
    grlex_key,
    monomial_degree,
    monomials_of_degree,
    poly_degree,
)


class NonArtinianError(ValueError):
    """Quotient slices failed to vanish within the safety bound."""

    def __init__(self, message: str, dims=None):
        super().__init__(message)
        self.dims = dims or {}


class ResourceBudgetError(RuntimeError):
    """A slice matrix would exceed the configured memory budget."""

    def __init__(self, message: str, dims=None):
        super().__init__(message)
        self.dims = dims or {}


def _store_dtype(p: int):
    if p <= 127:
        return np.int8
    if p <= 32749:
        return np.int16
    return np.int64


class SliceRing:
    """Graded slices of S/(gens) with multiplication maps.

    basis(d) lists coset-representative monomials; mult(i, d) is the
    matrix of multiplication by the i-th variable from degree d to d+1,
    in those bases.  Slices are built on demand and, once a slice is
    empty, all higher slices are empty (standard graded quotient).
    """

    def __init__(self, p: int, nvars: int, gens, *, budget_entries: int = 2**28):
        self.p = p
        self.nvars = nvars
        self.gens = [g for g in gens if g]
        for g in self.gens:
            d = poly_degree(g)
            if d == 0:
                # unit ideal: every slice is zero
                self._unit = True
                break
        else:
            self._unit = False
        self.gen_degs = [poly_degree(g) for g in self.gens]
        self.budget_entries = budget_entries
        self._dtype = _store_dtype(p)
        one = (0,) * nvars
        self._basis: list[list[Monomial]] = [[one]] if not self._unit else [[]]
        self._mult: list[list[np.ndarray]] = []
        self._top = 0 if self._unit else None  # first zero degree, once seen
        self._reduce_cache: dict = {}

    # -- public views -----------------------------------------------------

    def dim(self, d: int) -> int:
        if d < 0:
            return 0
        self.extend_to(d)
        if d < len(self._basis):
            return len(self._basis[d])
        return 0

    def basis(self, d: int) -> list:
        self.extend_to(d)
        if 0 <= d < len(self._basis):
            return self._basis[d]
        return []

    def basis_index(self, d: int):
        return {m: i for i, m in enumerate(self.basis(d))}

    def mult(self, i: int, d: int) -> np.ndarray:
        """Multiplication by variable i: slice d -> slice d+1."""
        self.extend_to(d + 1)
        if 0 <= d < len(self._mult):
            return np.asarray(self._mult[d][i], dtype=np.int64)
        return np.zeros((self.dim(d + 1), self.dim(d)), dtype=np.int64)

    @property
    def top(self):
        """First degree with a zero slice, if known."""
        return self._top

    def extend_to(self, d: int) -> None:
        while len(self._basis) <= d and self._top is None:
            self._step()

    def is_zero_from(self, d: int) -> bool:
        return self._top is not None and d >= self._top

    # -- construction ------------------------------------------------------

    def _record_zero(self) -> None:
        d = len(self._basis)
        k1 = len(self._basis[d - 1])
        self._mult.append(
            [np.zeros((0, k1), dtype=self._dtype) for _ in range(self.nvars)]
        )
        self._basis.append([])
        if self._top is None:
            self._top = d

    def _step(self) -> None:
        p, nv = self.p, self.nvars
        d = len(self._basis)
        prev = self._basis[d - 1]
        k1 = len(prev)
        if k1 == 0:
            self._record_zero()
            return

        ncols = nv * k1
        prods = [None] * ncols
        for i in range(nv):
            for b, mono in enumerate(prev):
                prods[i * k1 + b] = tuple(
                    e + (1 if j == i else 0) for j, e in enumerate(mono)
                )

        chunks = []
        k2 = len(self._basis[d - 2]) if d >= 2 else 0
        if k2:
            mult2 = [np.asarray(m, dtype=np.int64) for m in self._mult[d - 2]]
            pair_count = nv * (nv - 1) // 2
            kos = np.zeros((pair_count * k2, ncols), dtype=np.int64)
            t = 0
            for i in range(nv):
                for j in range(i + 1, nv):
                    block = kos[t * k2 : (t + 1) * k2]
                    block[:, i * k1 : (i + 1) * k1] = mult2[j].T
                    block[:, j * k1 : (j + 1) * k1] = (p - mult2[i].T) % p
                    t += 1
            chunks.append(kos)

        for g, e in zip(self.gens, self.gen_degs):
            if e > d:
                continue
            kg = len(self._basis[d - e]) if d - e < len(self._basis) else 0
            if kg == 0:
                continue
            chunk = np.zeros((kg, ncols), dtype=np.int64)
            for mono, coef in sorted(g.items()):
                i0 = next(j for j, ex in enumerate(mono) if ex > 0)
                tail = list(mono)
                tail[i0] -= 1
                t_mat = np.eye(kg, dtype=np.int64)
                level = d - e
                for j, ex in enumerate(tail):
                    for _ in range(ex):
                        t_mat = matmul_mod(
                            np.asarray(self._mult[level][j], dtype=np.int64), t_mat, p
                        )
                        level += 1
                block = chunk[:, i0 * k1 : (i0 + 1) * k1]
                block += coef * t_mat.T
            chunk %= p
            chunks.append(chunk)

        rows = (
            np.vstack(chunks) if chunks else np.zeros((0, ncols), dtype=np.int64)
        )
        if rows.size > self.budget_entries:
            raise ResourceBudgetError(
                f"slice at degree {d} needs {rows.size} matrix entries",
                dims={i: len(b) for i, b in enumerate(self._basis)},
            )

        perm = sorted(
            range(ncols),
            key=lambda c: (tuple(-e for e in prods[c]), c // k1),
        )
        red, pivots = rref(rows[:, perm], p)
        pivset = set(pivots)
        free = [c for c in range(ncols) if c not in pivset]

        dim_d = len(free)
        basis_d = [prods[perm[c]] for c in free]
        assert len(set(basis_d)) == dim_d

        coords = np.zeros((dim_d, ncols), dtype=np.int64)
        if free:
            coords[np.arange(dim_d), free] = 1
        if pivots:
            coords[:, pivots] = ((p - red[:, free]) % p).T

        inv = np.empty(ncols, dtype=np.int64)
        inv[np.asarray(perm)] = np.arange(ncols)
        coords_natural = coords[:, inv]
        mults = [
            coords_natural[:, i * k1 : (i + 1) * k1].astype(self._dtype)
            for i in range(nv)
        ]

        order = sorted(range(dim_d), key=lambda t: grlex_key(basis_d[t]))
        if order != list(range(dim_d)):
            basis_d = [basis_d[t] for t in order]
            mults = [m[order] for m in mults]

        self._mult.append(mults)
        self._basis.append(basis_d)
        if dim_d == 0 and self._top is None:
            self._top = d

    # -- derived operators --------------------------------------------------

    def monomial_action(self, mono: Monomial, d: int) -> np.ndarray:
        """Matrix of multiplication by a monomial: slice d -> d + deg."""
        mat = np.eye(self.dim(d), dtype=np.int64)
        level = d
        for j, ex in enumerate(mono):
            for _ in range(ex):
                mat = matmul_mod(self.mult(j, level), mat, self.p)
                level += 1
        return mat

    def poly_action(self, poly: Poly, d: int) -> np.ndarray:
        """Matrix of multiplication by a homogeneous poly: slice d -> d+deg."""
        e = poly_degree(poly)
        if e is None:
            raise ValueError("zero polynomial has no action degree")
        out = np.zeros((self.dim(d + e), self.dim(d)), dtype=np.int64)
        for mono, coef in sorted(poly.items()):
            out = (out + coef * self.monomial_action(mono, d)) % self.p
        return out

    def reduce_monomial(self, mono: Monomial) -> np.ndarray:
        """Coordinates of an ambient monomial's coset in its degree slice."""
        cached = self._reduce_cache.get(mono)
        if cached is not None:
            return cached
        d = monomial_degree(mono)
        if d == 0:
            out = np.ones(self.dim(0), dtype=np.int64)
        else:
            i = next(j for j, e in enumerate(mono) if e > 0)
            sub = tuple(e - (1 if j == i else 0) for j, e in enumerate(mono))
            out = matmul_mod(self.mult(i, d - 1), self.reduce_monomial(sub), self.p)
        self._reduce_cache[mono] = out
        return out

    def reduce_poly(self, poly: Poly, d: int) -> np.ndarray:
        out = np.zeros(self.dim(d), dtype=np.int64)
        for mono, coef in poly.items():
            if monomial_degree(mono) != d:
                raise ValueError("polynomial is not homogeneous of the slice degree")
            out = (out + coef * self.reduce_monomial(mono)) % self.p
        return out


class RingModuloIdeal:
    """Further quotient of a SliceRing by an ideal, in ring coordinates.

    The degree-d piece of (h_1, ..., h_s)R is the span of the columns of
    the multiplication matrices h_j : R_{d - deg h_j} -> R_d; slices of
    the quotient are read off one reduced row echelon form per degree.
    """

    def __init__(self, ring: SliceRing, gens):
        self.ring = ring
        self.gens = [g for g in gens if g]
        self.gen_degs = [poly_degree(g) for g in self.gens]
        self._span: dict[int, tuple] = {}

    def _span_data(self, d: int):
        if d not in self._span:
            rows = []
            n = self.ring.dim(d)
            for g, e in zip(self.gens, self.gen_degs):
                if e <= d and self.ring.dim(d - e) > 0:
                    rows.append(self.ring.poly_action(g, d - e).T)
            mat = np.vstack(rows) if rows else np.zeros((0, n), dtype=np.int64)
            self._span[d] = rref(mat, self.p)
        return self._span[d]

    @property
    def p(self):
        return self.ring.p

    def dim(self, d: int) -> int:
        red, _ = self._span_data(d)
        return self.ring.dim(d) - red.shape[0]

    def span_rref(self, d: int) -> np.ndarray:
        return self._span_data(d)[0]

    def reduce_matrix(self, d: int) -> np.ndarray:
        """Projection R_d -> quotient coordinates (dim_quot x dim_R)."""
        red, pivots = self._span_data(d)
        n = self.ring.dim(d)
        return quotient_coords(red, pivots, n, self.p)

    def embed_matrix(self, d: int) -> np.ndarray:
        """Section of the projection: quotient basis -> R_d coordinates."""
        _, pivots = self._span_data(d)
        n = self.ring.dim(d)
        free = [c for c in range(n) if c not in set(pivots)]
        out = np.zeros((n, len(free)), dtype=np.int64)
        for j, c in enumerate(free):
            out[c, j] = 1
        return out

    def mult(self, i: int, d: int) -> np.ndarray:
        """Multiplication by variable i on quotient slices d -> d+1."""
        act = matmul_mod(self.ring.mult(i, d), self.embed_matrix(d), self.p)
        return matmul_mod(self.reduce_matrix(d + 1), act, self.p)

    def poly_action(self, poly: Poly, d: int) -> np.ndarray:
        e = poly_degree(poly)
        act = matmul_mod(self.ring.poly_action(poly, d), self.embed_matrix(d), self.p)
        return matmul_mod(self.reduce_matrix(d + e), act, self.p)


def quotient_coords(red: np.ndarray, pivots, n: int, p: int) -> np.ndarray:
    """Coordinates map k^n -> k^n / rowspace(red), basis = non-pivot columns."""
    pivset = set(pivots)
    free = [c for c in range(n) if c not in pivset]
    out = np.zeros((len(free), n), dtype=np.int64)
    for j, c in enumerate(free):
        out[j, c] = 1
    if pivots:
        out[:, list(pivots)] = ((p - red[:, free]) % p).T
    return out


# ---------------------------------------------------------------------------
# ambient Macaulay-matrix slices (naive oracle and capped cross-check)
# ---------------------------------------------------------------------------


def caps_from_gens(nvars: int, gens) -> list:
    """Per-variable exponent caps derived from pure-power generators."""
    caps = [None] * nvars
    for g in gens:
        if len(g) != 1:
            continue
        ((mono, coef),) = g.items()
        nz = [(i, e) for i, e in enumerate(mono) if e]
        if len(nz) == 1:
            i, e = nz[0]
            if caps[i] is None or e < caps[i]:
                caps[i] = e
    return caps


def _project_poly(poly: Poly, index: dict, p: int) -> np.ndarray:
    row = np.zeros(len(index), dtype=np.int64)
    for mono, coef in poly.items():
        j = index.get(mono)
        if j is not None:
            row[j] = coef % p
    return row


class MacaulaySlices:
    """Ambient slice computation, uncapped (oracle) or capped.

    Capped mode restricts the column basis to monomials below the caps of
    pure-power generators and drops those generators' rows (their multiples
    project to zero inside the box).
    """

    def __init__(self, p: int, nvars: int, gens, *, capped: bool):
        self.p = p
        self.nvars = nvars
        self.gens = [g for g in gens if g]
        self.capped = capped
        self.caps = caps_from_gens(nvars, self.gens) if capped else None
        if capped:
            self.row_gens = [
                g for g in self.gens
                if not (len(g) == 1 and sum(1 for e in next(iter(g)) if e) == 1)
            ]
        else:
            self.row_gens = self.gens
        self._cache: dict[int, tuple] = {}

    def _slice(self, d: int):
        if d in self._cache:
            return self._cache[d]
        monos = monomials_of_degree(self.nvars, d, self.caps)
        index = {m: i for i, m in enumerate(monos)}
        rows = []
        for g in self.row_gens:
            e = poly_degree(g)
            if e > d:
                continue
            for u in monomials_of_degree(self.nvars, d - e, self.caps):
                prod = {tuple(a + b for a, b in zip(u, mono)): c for mono, c in g.items()}
                row = _project_poly(prod, index, self.p)
                if row.any():
                    rows.append(row)
        mat = np.array(rows, dtype=np.int64) if rows else np.zeros((0, len(monos)), np.int64)
        red, pivots = rref(mat, self.p)
        self._cache[d] = (monos, index, red, pivots)
        return self._cache[d]

    def dim(self, d: int) -> int:
        monos, _, _, pivots = self._slice(d)
        return len(monos) - len(pivots)

    def basis(self, d: int) -> list:
        monos, _, _, pivots = self._slice(d)
        pivset = set(pivots)
        return [m for i, m in enumerate(monos) if i not in pivset]

    def reduce_matrix(self, d: int) -> np.ndarray:
        monos, _, red, pivots = self._slice(d)
        return quotient_coords(red, pivots, len(monos), self.p)

    def mult(self, i: int, d: int) -> np.ndarray:
        """Multiplication by variable i on quotient slices d -> d+1."""
        basis = self.basis(d)
        monos1, index1, _, _ = self._slice(d + 1)
        coords = self.reduce_matrix(d + 1)
        cols = np.zeros((len(monos1), len(basis)), dtype=np.int64)
        for j, m in enumerate(basis):
            mm = tuple(e + (1 if k == i else 0) for k, e in enumerate(m))
            jj = index1.get(mm)
            if jj is not None:
                cols[jj, j] = 1
        return matmul_mod(coords, cols, self.p)

    def top_bound_scan(self, bound: int):
        """Dims per degree until the first zero slice; NonArtinian past bound."""
        dims = {}
        d = 0
        while True:
            k = self.dim(d)
            if k == 0:
                return dims
            dims[d] = k
            d += 1
            if d > bound:
                raise NonArtinianError(
                    f"slices still nonzero past degree bound {bound}", dims=dims
                )
