"""Exact dense linear algebra over the prime field F_p.

Matrices are numpy int64 arrays with entries reduced mod p; the modulus
travels as a function argument, not per element.  Row reduction defers
modular reduction between pivots (entries stay exact in int64, growing by
at most p^2 per pivot), chooses pivots scanning left-to-right and
top-to-bottom, and returns the canonical reduced row echelon form, so all
downstream bases are reproducible bit for bit.

Extension point: for very large GF(2) problems the dense int64 rows could
be swapped for packed bit rows; callers only rely on rref/rank/nullspace
semantics.
"""

from __future__ import annotations

import numpy as np

# Keeps p^2 * pivot-count comfortably inside int64 during deferred reduction.
MAX_PRIME = 1 << 20


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p < 4:
        return True
    if p % 2 == 0:
        return False
    f = 3
    while f * f <= p:
        if p % f == 0:
            return False
        f += 2
    return True


def check_modulus(p: int) -> None:
    if not is_prime(p):
        raise ValueError(f"modulus {p} is not prime")
    if p > MAX_PRIME:
        raise ValueError(f"modulus {p} exceeds supported bound {MAX_PRIME}")


def inv(a: int, p: int) -> int:
    """Multiplicative inverse of a nonzero residue mod p."""
    a %= p
    if a == 0:
        raise ZeroDivisionError("0 has no inverse")
    return pow(a, -1, p)


def _as_matrix(a) -> np.ndarray:
    m = np.asarray(a, dtype=np.int64)
    if m.ndim != 2:
        raise ValueError("expected a 2-d array")
    return m


def _forward_eliminate(a: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    """In-place echelon pass; returns (matrix, pivot columns).

    Rows 0..rank-1 end up as echelon rows with unit pivots and are fully
    reduced mod p; entries below every pivot are exactly zero.
    """
    m, n = a.shape
    pivots: list[int] = []
    r = 0
    for c in range(n):
        if r == m:
            break
        col = a[r:, c] % p
        nz = np.nonzero(col)[0]
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            a[[r, i]] = a[[i, r]]
        a[r] %= p
        piv = int(a[r, c])
        if piv != 1:
            a[r] = (a[r] * inv(piv, p)) % p
        f = a[r + 1 :, c] % p
        rows = np.nonzero(f)[0]
        if rows.size:
            a[r + 1 :][rows] -= np.outer(f[rows], a[r])
        pivots.append(c)
        r += 1
    return a, pivots


def rref(a, p: int) -> tuple[np.ndarray, list[int]]:
    """Canonical reduced row echelon form over F_p.

    Returns (R, pivots): R has one row per pivot with entries in [0, p),
    pivots is the strictly increasing list of pivot column indices.
    """
    a = _as_matrix(a) % p
    if a.size == 0:
        return np.zeros((0, a.shape[1]), dtype=np.int64), []
    a, pivots = _forward_eliminate(a, p)
    r = len(pivots)
    red = a[:r] % p
    for k in range(r - 1, 0, -1):
        c = pivots[k]
        f = red[:k, c].copy()
        rows = np.nonzero(f)[0]
        if rows.size:
            red[:k][rows] = (red[:k][rows] - np.outer(f[rows], red[k])) % p
    return red, pivots


def rank(a, p: int) -> int:
    a = _as_matrix(a) % p
    if a.size == 0:
        return 0
    _, pivots = _forward_eliminate(a, p)
    return len(pivots)


def nullspace(a, p: int) -> np.ndarray:
    """Canonical basis of {v : a v = 0}, one basis vector per row.

    The basis is the reduced row echelon form of the kernel, so each
    vector's first nonzero entry is 1 and the whole output is
    deterministic.  Row count always equals cols - rank.
    """
    a = _as_matrix(a)
    n = a.shape[1]
    red, pivots = rref(a, p)
    free = [c for c in range(n) if c not in set(pivots)]
    if not free:
        return np.zeros((0, n), dtype=np.int64)
    basis = np.zeros((len(free), n), dtype=np.int64)
    for j, c in enumerate(free):
        basis[j, c] = 1
        for k, pc in enumerate(pivots):
            basis[j, pc] = (-int(red[k, c])) % p
    out, _ = rref(basis, p)
    return out


def solve(a, b, p: int):
    """One solution of a x = b over F_p, or None if inconsistent.

    Free variables are set to zero.
    """
    a = _as_matrix(a) % p
    b = np.asarray(b, dtype=np.int64) % p
    if b.ndim != 1 or b.shape[0] != a.shape[0]:
        raise ValueError("right hand side shape mismatch")
    aug = np.hstack([a, b.reshape(-1, 1)])
    red, pivots = rref(aug, p)
    n = a.shape[1]
    if pivots and pivots[-1] == n:
        return None
    x = np.zeros(n, dtype=np.int64)
    for k, c in enumerate(pivots):
        x[c] = red[k, n]
    return x


def matmul_mod(a, b, p: int) -> np.ndarray:
    """Exact (a @ b) mod p for reduced int matrices.

    Uses float64 BLAS when the dot length keeps products under 2^53,
    falling back to int64 matmul otherwise.
    """
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    k = a.shape[-1]
    if k == 0 or a.size == 0 or b.size == 0:
        return np.zeros(a.shape[:-1] + b.shape[1:], dtype=np.int64)
    if k * (p - 1) * (p - 1) < 2**53:
        prod = a.astype(np.float64) @ b.astype(np.float64)
        return np.mod(prod, p).astype(np.int64)
    if k * (p - 1) * (p - 1) < 2**62:
        return (a @ b) % p
    # Chunked fallback keeps partial sums reduced.
    out = np.zeros((a.shape[0], b.shape[1]), dtype=np.int64)
    step = max(1, int(2**62 // ((p - 1) * (p - 1) or 1)))
    for s in range(0, k, step):
        out = (out + a[:, s : s + step] @ b[s : s + step]) % p
    return out
