"""Monomials, sparse multivariate polynomials over F_p, and input parsing.

A monomial is a tuple of nonnegative exponents, one per ring variable; a
polynomial is a dict monomial -> coefficient with coefficients in [1, p)
(zero coefficients are never stored).  The global term order is graded
lexicographic: compare total degree first, then the exponent tuple with
earlier variables weighing more.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np

from .gfp_linalg import check_modulus, nullspace, rank, rref

Monomial = tuple  # tuple[int, ...]
Poly = dict  # dict[Monomial, int]


class PolyParseError(ValueError):
    """Syntax or name error in a polynomial string; carries the position."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


def monomial_degree(m: Monomial) -> int:
    return sum(m)


def monomial_mul(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x + y for x, y in zip(a, b))


def grlex_key(m: Monomial):
    """Sort key putting grlex-larger monomials first."""
    return (-sum(m), tuple(-e for e in m))


def poly_degree(poly: Poly):
    """Total degree, or None for the zero polynomial."""
    if not poly:
        return None
    return max(sum(m) for m in poly)


def is_homogeneous(poly: Poly) -> bool:
    degs = {sum(m) for m in poly}
    return len(degs) <= 1


def poly_add(a: Poly, b: Poly, p: int) -> Poly:
    out = dict(a)
    for m, c in b.items():
        v = (out.get(m, 0) + c) % p
        if v:
            out[m] = v
        else:
            out.pop(m, None)
    return out


def poly_scale(a: Poly, c: int, p: int) -> Poly:
    c %= p
    if c == 0:
        return {}
    return {m: (v * c) % p for m, v in a.items()}


def poly_mul(a: Poly, b: Poly, p: int) -> Poly:
    out: Poly = {}
    for ma, ca in a.items():
        for mb, cb in b.items():
            m = monomial_mul(ma, mb)
            v = (out.get(m, 0) + ca * cb) % p
            if v:
                out[m] = v
            else:
                out.pop(m, None)
    return out


def poly_pow(a: Poly, k: int, p: int, nvars: int) -> Poly:
    out: Poly = {(0,) * nvars: 1}
    base = dict(a)
    while k:
        if k & 1:
            out = poly_mul(out, base, p)
        k >>= 1
        if k:
            base = poly_mul(base, base, p)
    return out


def is_p_power(q: int, p: int) -> bool:
    if q < 1:
        return False
    while q % p == 0:
        q //= p
    return q == 1


def frobenius_power(a: Poly, q: int, p: int) -> Poly:
    """a^q for q a power of p, by termwise exponent scaling.

    Valid because the p-th power map is additive in characteristic p and
    c^q = c for c in F_p.
    """
    if not is_p_power(q, p):
        raise ValueError(f"{q} is not a power of {p}")
    return {tuple(e * q for e in m): pow(c, q, p) for m, c in a.items()}


@dataclass
class RingSpec:
    """Presentation k[vars]/(relations) with k = F_p.

    Relations must be homogeneous; p must be prime.  `key()` gives a
    canonical hashable signature for caching.
    """

    p: int
    vars: tuple
    relations: tuple = field(default_factory=tuple)

    def __post_init__(self):
        check_modulus(self.p)
        self.vars = tuple(self.vars)
        if len(set(self.vars)) != len(self.vars):
            raise ValueError("duplicate variable names")
        rels = []
        for r in self.relations:
            r = {m: c % self.p for m, c in r.items() if c % self.p}
            if not r:
                continue
            if not is_homogeneous(r):
                raise ValueError("relations must be homogeneous")
            if any(len(m) != len(self.vars) for m in r):
                raise ValueError("relation arity does not match variable count")
            rels.append(r)
        self.relations = tuple(rels)

    @property
    def nvars(self) -> int:
        return len(self.vars)

    def key(self):
        return (self.p, self.vars, tuple(poly_key(r) for r in self.relations))


def poly_key(poly: Poly):
    return tuple(sorted(poly.items()))


def monomials_of_degree(spec_or_nvars, d: int, caps=None) -> list:
    """All degree-d monomials in graded-lex order (largest first).

    With `caps`, only monomials with exponent_i < caps[i] for every i are
    produced; a cap of None in a slot means unbounded.
    """
    nvars = spec_or_nvars.nvars if isinstance(spec_or_nvars, RingSpec) else int(spec_or_nvars)
    if d < 0:
        return []
    out: list[Monomial] = []

    def rec(i: int, remaining: int, prefix: tuple):
        if i == nvars - 1:
            if caps is not None and caps[i] is not None and remaining >= caps[i]:
                return
            out.append(prefix + (remaining,))
            return
        hi = remaining
        if caps is not None and caps[i] is not None:
            hi = min(hi, caps[i] - 1)
        for e in range(hi, -1, -1):
            rec(i + 1, remaining - e, prefix + (e,))

    rec(0, d, ())
    out.sort(key=grlex_key)
    return out


# ---------------------------------------------------------------------------
# polynomial expression parser
# ---------------------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|([-+*^()]))")


def _tokenize(text: str):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == m.start():
            tail = text[pos:].lstrip()
            if not tail:
                break
            raise PolyParseError(f"unexpected character {tail[0]!r}", pos)
        if m.group(1) is not None:
            tokens.append(("int", int(m.group(1)), m.start(1)))
        elif m.group(2) is not None:
            tokens.append(("name", m.group(2), m.start(2)))
        else:
            tokens.append(("op", m.group(3), m.start(3)))
        pos = m.end()
    tokens.append(("end", None, len(text)))
    return tokens


class _Parser:
    """Recursive descent over +, -, *, ^ and parentheses.

    Juxtaposition is not multiplication: `x*y` is required, `xy` is read
    as a (probably undeclared) single name.
    """

    def __init__(self, text: str, spec: RingSpec):
        self.tokens = _tokenize(text)
        self.i = 0
        self.spec = spec

    def peek(self):
        return self.tokens[self.i]

    def next(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expr(self) -> Poly:
        kind, val, pos = self.peek()
        negate = False
        if kind == "op" and val in "+-":
            self.next()
            negate = val == "-"
        out = self.term()
        if negate:
            out = poly_scale(out, -1, self.spec.p)
        while True:
            kind, val, pos = self.peek()
            if kind == "op" and val in "+-":
                self.next()
                rhs = self.term()
                if val == "-":
                    rhs = poly_scale(rhs, -1, self.spec.p)
                out = poly_add(out, rhs, self.spec.p)
            else:
                return out

    def term(self) -> Poly:
        out = self.factor()
        while True:
            kind, val, pos = self.peek()
            if kind == "op" and val == "*":
                self.next()
                out = poly_mul(out, self.factor(), self.spec.p)
            elif kind in ("int", "name") or (kind == "op" and val == "("):
                raise PolyParseError("missing '*' between factors", pos)
            else:
                return out

    def factor(self) -> Poly:
        base = self.atom()
        kind, val, pos = self.peek()
        if kind == "op" and val == "^":
            self.next()
            kind, val, pos = self.next()
            if kind != "int":
                raise PolyParseError("exponent must be a nonnegative integer", pos)
            return poly_pow(base, val, self.spec.p, self.spec.nvars)
        return base

    def atom(self) -> Poly:
        kind, val, pos = self.next()
        n = self.spec.nvars
        if kind == "int":
            c = val % self.spec.p
            return {(0,) * n: c} if c else {}
        if kind == "name":
            if val not in self.spec.vars:
                raise PolyParseError(f"unknown variable {val!r}", pos)
            i = self.spec.vars.index(val)
            expo = tuple(1 if j == i else 0 for j in range(n))
            return {expo: 1}
        if kind == "op" and val == "(":
            inner = self.expr()
            kind, val, pos = self.next()
            if not (kind == "op" and val == ")"):
                raise PolyParseError("expected ')'", pos)
            return inner
        if kind == "op" and val == "-":
            return poly_scale(self.atom(), -1, self.spec.p)
        raise PolyParseError("expected a number, variable or '('", pos)


def parse_poly(text: str, spec: RingSpec) -> Poly:
    """Parse a polynomial string over spec's variables, coefficients mod p.

    Homogeneity is not enforced here; callers decide.
    """
    if not text or not text.strip():
        raise PolyParseError("empty polynomial", 0)
    parser = _Parser(text, spec)
    out = parser.expr()
    kind, _, pos = parser.peek()
    if kind != "end":
        raise PolyParseError("trailing input", pos)
    return out


def poly_str(poly: Poly, spec: RingSpec) -> str:
    """Canonical printing in graded-lex order; parses back to the same poly."""
    if not poly:
        return "0"
    parts = []
    for m in sorted(poly, key=grlex_key):
        c = poly[m]
        factors = []
        if c != 1 or not any(m):
            factors.append(str(c))
        for name, e in zip(spec.vars, m):
            if e == 1:
                factors.append(name)
            elif e > 1:
                factors.append(f"{name}^{e}")
        parts.append("*".join(factors))
    return " + ".join(parts)


def parse_ideal(spec: RingSpec, gens) -> list:
    """Parse an ideal spec: list of polynomial strings (or Poly dicts).

    The single string "m" is shorthand for all variables, unless "m" is
    itself a declared variable.
    """
    if isinstance(gens, str):
        if gens.strip() == "m" and "m" not in spec.vars:
            return [
                {tuple(1 if j == i else 0 for j in range(spec.nvars)): 1}
                for i in range(spec.nvars)
            ]
        gens = [s for s in re.split(r"[,;]", gens) if s.strip()]
    out = []
    for g in gens:
        poly = parse_poly(g, spec) if isinstance(g, str) else g
        if not is_homogeneous(poly):
            raise ValueError(f"ideal generator {g!r} is not homogeneous")
        if poly:
            out.append(poly)
    return out


def load_ring_file(path) -> RingSpec:
    """Read a .ring file.

    Line format (''#'' comments allowed):
        p: 3
        vars: x y z
        relations: x^4+y^4+z^4 ; ...
    `relation:` lines may also be repeated one polynomial per line.
    """
    p = None
    names: list[str] = []
    relation_strs: list[str] = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if ":" not in line:
                raise ValueError(f"{path}:{lineno}: expected 'field: value'")
            fieldname, value = line.split(":", 1)
            fieldname = fieldname.strip().lower()
            value = value.strip()
            if fieldname == "p":
                p = int(value)
            elif fieldname == "vars":
                names = [v for v in re.split(r"[,\s]+", value) if v]
            elif fieldname in ("relation", "relations"):
                relation_strs.extend(s.strip() for s in value.split(";") if s.strip())
            else:
                raise ValueError(f"{path}:{lineno}: unknown field {fieldname!r}")
    if p is None or not names:
        raise ValueError(f"{path}: file must define 'p' and 'vars'")
    spec = RingSpec(p=p, vars=tuple(names))
    relations = tuple(parse_poly(s, spec) for s in relation_strs)
    for r in relations:
        if not is_homogeneous(r):
            raise ValueError(f"{path}: relation {poly_str(r, spec)!r} is not homogeneous")
    return RingSpec(p=p, vars=tuple(names), relations=relations)


# ---------------------------------------------------------------------------
# toric ideals of monomial curves (brute-force kernel oracle)
# ---------------------------------------------------------------------------


def semigroup_slice_dims(weights: Sequence[int], degree: int) -> list:
    """dim of each graded piece of the semigroup algebra k[s^{D-w} t^w ...].

    weights[i] is the t-exponent of the i-th parametrizing monomial (all of
    the same total degree); the degree-d piece has one basis element per
    distinct value of sum(e_i * weights[i]) over exponent vectors of total
    degree d.  Returns dims for degrees 0..degree.
    """
    wmax = max(weights)
    reachable = np.zeros(1, dtype=bool)
    reachable[0] = True
    dims = [1]
    for d in range(1, degree + 1):
        nxt = np.zeros(d * wmax + 1, dtype=bool)
        for w in weights:
            nxt[w : w + reachable.size] |= reachable
        reachable = nxt
        dims.append(int(reachable.sum()))
    return dims


def monomial_curve_ideal(p: int, weights: Sequence[int], *, verify_through: int = 12) -> list:
    """Minimal generators of the toric ideal of a monomial curve.

    The curve is parametrized by x_i -> s^{D-weights[i]} t^{weights[i]}
    (D implicit; only t-exponents matter for the kernel).  Works degree by
    degree: the kernel of the monomial map in degree d is spanned by
    differences of monomials with equal weight, and new minimal generators
    are the kernel vectors not already in S_1 * (lower kernel), detected by
    rank.  Verifies through `verify_through` that the found generators cut
    out the right Hilbert function.
    """
    check_modulus(p)
    nvars = len(weights)
    if len(set(weights)) != nvars:
        raise ValueError("weights must be distinct")
    gens: list[Poly] = []
    prev_rows = {}
    quiet = 0
    d = 1
    while quiet < 3 or d <= max(2, verify_through // 2):
        d += 1
        monos = monomials_of_degree(nvars, d)
        index = {m: i for i, m in enumerate(monos)}
        by_weight: dict[int, list[Monomial]] = {}
        for m in monos:
            w = sum(e * wt for e, wt in zip(m, weights))
            by_weight.setdefault(w, []).append(m)
        kernel_rows = []
        for group in by_weight.values():
            baseidx = index[group[0]]
            for other in group[1:]:
                row = np.zeros(len(monos), dtype=np.int64)
                row[index[other]] = 1
                row[baseidx] = p - 1
                kernel_rows.append(row)
        kernel = np.array(kernel_rows, dtype=np.int64) if kernel_rows else np.zeros((0, len(monos)), np.int64)
        # degree-d piece of the ideal generated so far
        span_rows = []
        lower = prev_rows.get(d - 1)
        if lower is not None and lower.size:
            prev_monos = monomials_of_degree(nvars, d - 1)
            for i in range(nvars):
                shifted = np.zeros((lower.shape[0], len(monos)), dtype=np.int64)
                for j, m in enumerate(prev_monos):
                    mm = tuple(e + (1 if k == i else 0) for k, e in enumerate(m))
                    shifted[:, index[mm]] = lower[:, j]
                span_rows.append(shifted)
        span = np.vstack(span_rows) if span_rows else np.zeros((0, len(monos)), np.int64)
        span_red, span_piv = rref(span, p)
        # new generators: kernel vectors reduced modulo the span of the
        # lower-degree ideal piece (the span sits inside the kernel)
        reduced = kernel.copy()
        for k, c in enumerate(span_piv):
            f = reduced[:, c] % p
            hit = np.nonzero(f)[0]
            if hit.size:
                reduced[hit] = (reduced[hit] - np.outer(f[hit], span_red[k])) % p
        new_rows, _ = rref(reduced, p)
        if new_rows.shape[0]:
            for row in new_rows:
                gens.append({monos[j]: int(c) for j, c in enumerate(row) if c})
            quiet = 0
        else:
            quiet += 1
        stacked, _ = rref(np.vstack([span_red, new_rows]), p)
        prev_rows[d] = stacked
        if d > 40:
            raise RuntimeError("toric generator search did not stabilize")
    # sanity: the generated ideal reproduces the semigroup Hilbert function
    expected = semigroup_slice_dims(list(weights), verify_through)
    from .engine import SliceRing  # local import to avoid a cycle

    ring = SliceRing(p, nvars, gens)
    for dd in range(verify_through + 1):
        if ring.dim(dd) != expected[dd]:
            raise RuntimeError(
                f"toric generators incomplete at degree {dd}: "
                f"{ring.dim(dd)} != {expected[dd]}"
            )
    return gens
