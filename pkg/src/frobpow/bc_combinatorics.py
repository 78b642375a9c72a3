"""Closed-form combinatorics: minimal Hilbert-Kunz data and socle growth.

Everything here is exact integer/rational arithmetic (no floats):
the lower-bound degree m(q) and minimal Hilbert-Kunz value L(q) for
degree-d hypersurfaces in n+1 variables, coefficients Gamma(i) of the
box generating function (1 + t + ... + t^{q-1})^{n+1}, the socle-length
difference h(q) = Gamma(m(q)) - Gamma(m(q) - d) with its leading
coefficient, Stirling numbers of the first kind, and two alternating
binomial identities together with the forward-difference identity that
proves them.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial

import numpy as np

from .gfp_linalg import rank, rref


def m_of_q(n: int, d: int, q: int) -> int:
    """floor(((n+1)(q-1) + (d-1)) / 2)."""
    if n < 1 or d < 1 or q < 1:
        raise ValueError("need n >= 1, d >= 1, q >= 1")
    return ((n + 1) * (q - 1) + (d - 1)) // 2


def gamma(i: int, n: int, q: int) -> int:
    """Coefficient of t^i in (1 + t + ... + t^{q-1})^{n+1}.

    Expanded as (1 - t^q)^{n+1} (1 - t)^{-(n+1)}; zero outside
    0 <= i <= (n+1)(q-1).
    """
    if i < 0 or i > (n + 1) * (q - 1):
        return 0
    total = 0
    for j in range(i // q + 1):
        total += (-1) ** j * comb(n + 1, j) * comb(i - q * j + n, n)
    return total


def L_of_q(n: int, d: int, q: int) -> int:
    """Coefficient of t^{m(q)} in (1 - t^d)(1 - t^q)^{n+1}(1 - t)^{-n-2}."""
    m = m_of_q(n, d, q)

    def box_partial(i: int) -> int:
        # coefficient of t^i in (1 - t^q)^{n+1} (1 - t)^{-(n+2)}
        if i < 0:
            return 0
        total = 0
        for j in range(i // q + 1):
            total += (-1) ** j * comb(n + 1, j) * comb(i - q * j + n + 1, n + 1)
        return total

    return box_partial(m) - box_partial(m - d)


def epsilon(n: int, q: int) -> Fraction:
    """0 for odd n; (q - 2*floor(q/2))/2 (i.e. q mod 2 over 2) for even n."""
    if n % 2 == 1:
        return Fraction(0)
    return Fraction(q - 2 * (q // 2), 2)


def xi_from_sample(n: int, q: int, tsd: int) -> Fraction:
    """Shift constant xi with m(q) = ((n+1)/2) q + xi + epsilon."""
    return Fraction(tsd) - Fraction(n + 1, 2) * q - epsilon(n, q)


def h_of_q(n: int, d: int, q: int, xi) -> int:
    """Gamma(m) - Gamma(m - d) with m = ((n+1)/2) q + xi + epsilon."""
    m = Fraction(n + 1, 2) * q + Fraction(xi) + epsilon(n, q)
    if m.denominator != 1:
        raise ValueError(f"m(q) = {m} is not an integer; check xi")
    m = int(m)
    return gamma(m, n, q) - gamma(m - d, n, q)


def h_asymptotic(n: int, d: int, xi, eps) -> Fraction:
    """Leading coefficient c with h(q) = c q^{n-2} + O(q^{n-3}).

    Two parity branches: n = 2*nu - 1 uses (nu - i)^{n-2}, n = 2*nu uses
    (nu + 1/2 - i)^{n-2}.
    """
    if n < 1:
        raise ValueError("need n >= 1")
    xi = Fraction(xi)
    eps = Fraction(eps)
    if n % 2 == 1:
        nu = (n + 1) // 2
        total = sum(
            (-1) ** i * comb(n + 1, i) * Fraction(nu - i) ** (n - 2)
            for i in range(nu)
        )
    else:
        nu = n // 2
        total = sum(
            (-1) ** i * comb(n + 1, i) * (Fraction(nu) + Fraction(1, 2) - i) ** (n - 2)
            for i in range(nu)
        )
    return Fraction(d, factorial(n)) * comb(n, 2) * (2 * xi + 2 * eps + n - d + 1) * total


def socle_constant(n: int, d: int) -> Fraction:
    """Leading socle-length coefficient for minimal Hilbert-Kunz hypersurfaces.

    c = d((-1)^{n-d} - 3) / (2 n!) * C(n,2) * sum_i (-1)^i C(n+1,i) s_i^{n-2}
    with s_i = nu - i (n = 2nu - 1 odd) or nu + 1/2 - i (n = 2nu even).
    """
    if n < 1:
        raise ValueError("need n >= 1")
    sign = (-1) ** ((n - d) % 2)
    if n % 2 == 1:
        nu = (n + 1) // 2
        total = sum(
            (-1) ** i * comb(n + 1, i) * Fraction(nu - i) ** (n - 2)
            for i in range(nu)
        )
    else:
        nu = n // 2
        total = sum(
            (-1) ** i * comb(n + 1, i) * (Fraction(nu) + Fraction(1, 2) - i) ** (n - 2)
            for i in range(nu)
        )
    return Fraction(d * (sign - 3), 2 * factorial(n)) * comb(n, 2) * total


@dataclass
class BCParams:
    """Parameters (n, d, q) with the shift decomposition of m(q)."""

    n: int
    d: int
    q: int

    @property
    def m(self) -> int:
        return m_of_q(self.n, self.d, self.q)

    @property
    def eps(self) -> Fraction:
        return epsilon(self.n, self.q)

    @property
    def xi(self) -> Fraction:
        return xi_from_sample(self.n, self.q, self.m)


@dataclass
class StirlingRow:
    """Signed Stirling numbers of the first kind s(n, k), k = 0..n."""

    n: int
    coefficients: tuple

    def evaluate_falling_factorial(self, x: int) -> int:
        out = 1
        for j in range(self.n):
            out *= x - j
        return out

    def evaluate_polynomial(self, x: int) -> int:
        return sum(c * x**k for k, c in enumerate(self.coefficients))


def stirling_row(n: int) -> StirlingRow:
    """Coefficients of x(x-1)...(x-n+1) = sum_k s(n,k) x^k."""
    if n < 0:
        raise ValueError("need n >= 0")
    coeffs = [1]
    for j in range(n):
        nxt = [0] * (len(coeffs) + 1)
        for k, c in enumerate(coeffs):
            nxt[k + 1] += c
            nxt[k] -= j * c
        coeffs = nxt
    return StirlingRow(n, tuple(coeffs))


def identity_C1(n: int) -> int:
    """sum_{i=0}^n (-1)^i C(2n, i) (n-i)^{2n-2}; zero for n >= 2.

    The half-range form is exposed for n >= 2 only: at n = 1 the i = n
    term hits 0^0 and the half-range sum is genuinely ambiguous.  Use
    forward_difference_identity for the full-range statement.
    """
    if n < 2:
        raise ValueError("half-range identity needs n >= 2")
    return sum((-1) ** i * comb(2 * n, i) * (n - i) ** (2 * n - 2) for i in range(n + 1))


def identity_C2(n: int) -> int:
    """sum_{i=0}^n (-1)^i C(2n+1, i) (n-i+1/2)^{2n-1}, denominator cleared.

    Computed over integers as sum (-1)^i C(2n+1,i) (2n-2i+1)^{2n-1};
    zero for n >= 2 (the uncleared sum is this divided by 2^{2n-1}).
    """
    if n < 2:
        raise ValueError("half-range identity needs n >= 2")
    return sum(
        (-1) ** i * comb(2 * n + 1, i) * (2 * n - 2 * i + 1) ** (2 * n - 1)
        for i in range(n + 1)
    )


def forward_difference_identity(n: int, x: int = None) -> int:
    """Full-range sum_{i=0}^{2n} (-1)^i C(2n,i) (x+2n-i)^{2n-2}.

    The 2n-th forward difference of a degree-(2n-2) polynomial, hence zero
    for every x and every n >= 1; defaults to the specialization x = -n.
    """
    if n < 1:
        raise ValueError("need n >= 1")
    if x is None:
        x = -n
    return sum(
        (-1) ** i * comb(2 * n, i) * (x + 2 * n - i) ** (2 * n - 2)
        for i in range(2 * n + 1)
    )


# ---------------------------------------------------------------------------
# brute-force cokernel socle oracle
# ---------------------------------------------------------------------------


def lemma_soc_oracle(n: int, t: int, p: int) -> int:
    """Minimal socle degree of coker(phi), phi(r) = r*(x_0,...,x_n).

    Works over R = F_p[x_0..x_n]/(x_0^t,...,x_n^t) by brute-force linear
    algebra on the truncated box; scale is limited to (n+1)*t <= 10.
    """
    if n < 0 or t < 1:
        raise ValueError("need n >= 0 and t >= 1")
    if (n + 1) * t > 10:
        raise ValueError("brute-force scale exceeded: need (n+1)*t <= 10")
    from .engine import MacaulaySlices, quotient_coords
    from .polyring import monomials_of_degree

    nv = n + 1
    caps = [t] * nv
    top = nv * (t - 1)

    bases = {d: monomials_of_degree(nv, d, caps) for d in range(top + 2)}
    index = {d: {m: i for i, m in enumerate(bases[d])} for d in bases}

    def var_mult(i, d):
        # multiplication by x_i on box slices d -> d+1
        rows = np.zeros((len(bases[d + 1]), len(bases[d])), dtype=np.int64)
        for j, m in enumerate(bases[d]):
            mm = tuple(e + (1 if k == i else 0) for k, e in enumerate(m))
            jj = index[d + 1].get(mm)
            if jj is not None:
                rows[jj, j] = 1
        return rows

    # M_d = R_d^{n+1} / phi(R_{d-1}); block coordinates stack the copies
    def image_rref(d):
        if d == 0 or len(bases[d - 1]) == 0:
            width = nv * len(bases[d])
            return np.zeros((0, width), dtype=np.int64), []
        blocks = [var_mult(i, d - 1) for i in range(nv)]
        img = np.hstack([b.T for b in blocks])  # rows: r in R_{d-1}
        return rref(img, p)

    def embed(piv, width):
        free = [c for c in range(width) if c not in set(piv)]
        out = np.zeros((width, len(free)), dtype=np.int64)
        for j, c in enumerate(free):
            out[c, j] = 1
        return out

    min_socle = None
    for d in range(top + 1):
        kd = len(bases[d])
        if kd == 0:
            break
        red, piv = image_rref(d)
        emb = embed(piv, nv * kd)
        if emb.shape[1] == 0:
            continue
        red1, piv1 = image_rref(d + 1)
        coords1 = quotient_coords(red1, piv1, nv * len(bases[d + 1]), p)
        # multiplication by x_j on M: componentwise on the n+1 copies
        stacked = []
        for j in range(nv):
            mj = var_mult(j, d)
            big = np.zeros((nv * len(bases[d + 1]), nv * kd), dtype=np.int64)
            for i in range(nv):
                big[
                    i * len(bases[d + 1]) : (i + 1) * len(bases[d + 1]),
                    i * kd : (i + 1) * kd,
                ] = mj
            stacked.append((coords1 @ big @ emb) % p)
        joint = np.vstack(stacked) if stacked else np.zeros((0, emb.shape[1]), np.int64)
        nullity = emb.shape[1] - rank(joint, p)
        if nullity:
            min_socle = d
            break
    if min_socle is None:
        min_socle = top
    return min_socle
