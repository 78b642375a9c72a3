"""Command-line frontend: ring ingestion, q-sweeps, tables, golden checks.

Subcommands: tsd, socle, hk, cthreshold, bc, identities, fermat,
syzygy-gap, betti.  Reports are emitted as human text, CSV (stable header
`q,<metric...>` and row order), or JSON (with a schema_version field that
round-trips).  Exit codes: 0 ok, 1 parse/usage error, 2 golden-comparison
mismatch, 3 resource exhaustion (partial output flushed).
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

from .bc_combinatorics import (
    L_of_q,
    epsilon,
    h_of_q,
    identity_C1,
    identity_C2,
    m_of_q,
    socle_constant,
    xi_from_sample,
)
from .engine import NonArtinianError, ResourceBudgetError
from .fermat_classifier import classify, syzygy_gap
from .fthreshold import estimate_c
from .graded_quotient import hilbert_kunz, socle_profile, top_socle_degree
from .polyring import PolyParseError, RingSpec, load_ring_file, parse_ideal, poly_degree
from .resolutions import length_comparison

SCHEMA_VERSION = 1


@dataclass
class RunConfig:
    command: str
    ring_path: str | None
    fermat: tuple | None  # (p, n, d)
    ideal: str
    qs: list
    fmt: str
    output: str | None
    check: str | None
    jobs: int
    verbose: bool


def _load_spec(cfg: RunConfig) -> RingSpec:
    if (cfg.ring_path is None) == (cfg.fermat is None):
        raise ValueError("exactly one ring source: --ring PATH or --p/--n/--d")
    if cfg.ring_path is not None:
        return load_ring_file(cfg.ring_path)
    p, n, d = cfg.fermat
    base = RingSpec(p, ("x", "y", "z"))
    from .polyring import parse_poly

    return RingSpec(p, ("x", "y", "z"), (parse_poly(f"x^{n}+y^{n}+z^{n}", base),))


def _parse_qs(text: str, p: int) -> list:
    qs = [int(s) for s in text.split(",") if s.strip()]
    for q in qs:
        qq = q
        while qq % p == 0:
            qq //= p
        if qq != 1:
            raise ValueError(f"q = {q} is not a power of p = {p}")
    return qs


def _frac(x) -> str:
    return str(x) if x is not None else ""


def _tsd_one(args):
    spec, ideal, q = args
    return q, top_socle_degree(spec, ideal, q)


def _socle_one(args):
    spec, ideal, q = args
    prof = socle_profile(spec, ideal, q)
    return q, prof


def _hk_one(args):
    spec, ideal, q = args
    return q, hilbert_kunz(spec, ideal, q)


def _map_qs(fn, spec, ideal, qs, jobs):
    work = [(spec, ideal, q) for q in qs]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(fn, work))
    else:
        results = [fn(w) for w in work]
    return sorted(results, key=lambda r: r[0])


def run(cfg: RunConfig):
    """Execute one subcommand; returns (report dict, csv rows, csv header)."""
    if cfg.command == "identities":
        n_max = cfg.qs[0] if cfg.qs else 30
        rows = [(n, identity_C1(n), identity_C2(n)) for n in range(2, n_max + 1)]
        report = {
            "schema_version": SCHEMA_VERSION,
            "command": "identities",
            "rows": [{"n": n, "c1": c1, "c2": c2} for n, c1, c2 in rows],
        }
        return report, [list(r) for r in rows], "n,c1,c2"

    if cfg.command == "syzygy-gap":
        p = cfg.fermat[0] if cfg.fermat else 2
        a_values = cfg.qs or [1, 2, 3, 4, 5]
        rows = [(a, p, syzygy_gap(a, p)) for a in a_values]
        report = {
            "schema_version": SCHEMA_VERSION,
            "command": "syzygy-gap",
            "p": p,
            "rows": [{"a": a, "p": pp, "delta": delta} for a, pp, delta in rows],
        }
        return report, [list(r) for r in rows], "a,p,delta"

    if cfg.command == "fermat":
        p, n, d = cfg.fermat
        q_max = cfg.qs[0] if cfg.qs else None
        verdict = classify(p, n, d, q_max=q_max)
        report = {
            "schema_version": SCHEMA_VERSION,
            "command": "fermat",
            "p": p,
            "n": n,
            "d": d,
            "status": verdict.status,
            "c_estimate": _frac(verdict.c_estimate),
            "evidence": [[rule, data] for rule, data in verdict.evidence],
            "probes": [
                {"q": pr.q, "finite": pr.finite, "b1": pr.b1, "b2": pr.b2}
                for pr in verdict.probes
            ],
            "note": verdict.note,
        }
        rows = [[p, n, d, verdict.status,
                 verdict.probes[-1].b1 if verdict.probes and verdict.probes[-1].finite else "",
                 verdict.probes[-1].b2 if verdict.probes and verdict.probes[-1].finite else "",
                 _frac(verdict.c_estimate)]]
        return report, rows, "p,n,d,status,b1,b2,c_estimate"

    spec = _load_spec(cfg)
    ideal = cfg.ideal

    if cfg.command == "tsd":
        results = _map_qs(_tsd_one, spec, ideal, cfg.qs, cfg.jobs)
        report = {
            "schema_version": SCHEMA_VERSION,
            "command": "tsd",
            "rows": [{"q": q, "tsd": t} for q, t in results],
        }
        return report, [[q, t] for q, t in results], "q,tsd"

    if cfg.command == "socle":
        results = _map_qs(_socle_one, spec, ideal, cfg.qs, cfg.jobs)
        report = {
            "schema_version": SCHEMA_VERSION,
            "command": "socle",
            "rows": [
                {
                    "q": q,
                    "socle_length": prof.total,
                    "top_socle_degree": prof.top_degree,
                    "profile": {str(d): k for d, k in sorted(prof.dims.items())},
                }
                for q, prof in results
            ],
        }
        rows = [[q, prof.total, prof.top_degree] for q, prof in results]
        return report, rows, "q,socle_length,top_socle_degree"

    if cfg.command == "hk":
        results = _map_qs(_hk_one, spec, ideal, cfg.qs, cfg.jobs)
        report = {
            "schema_version": SCHEMA_VERSION,
            "command": "hk",
            "rows": [
                {
                    "q": q,
                    "length": table.total_length,
                    "top_degree": table.top_degree,
                    "dims": {str(d): k for d, k in sorted(table.dims.items())},
                }
                for q, table in results
            ],
        }
        rows = [[q, table.total_length, table.top_degree] for q, table in results]
        return report, rows, "q,length,top_degree"

    if cfg.command == "cthreshold":
        q_max = max(cfg.qs) if cfg.qs else spec.p**3
        est = estimate_c(spec, ideal, q_max)
        report = {
            "schema_version": SCHEMA_VERSION,
            "command": "cthreshold",
            "samples": [{"q": q, "tsd": t} for q, t in est.samples],
            "lower_bounds": [{"q": q, "bound": _frac(b)} for q, b in est.lower_bounds],
            "c": _frac(est.c),
            "fitted": (
                {"alpha": _frac(est.fitted[0]), "beta": est.fitted[1], "q0": est.fitted[2]}
                if est.fitted
                else None
            ),
            "interval": [_frac(est.interval[0]), _frac(est.interval[1])] if est.interval else None,
            "a_invariant": est.a,
            "prop_bound": _frac(est.prop_bound),
            "hypersurface_bound": _frac(est.hypersurface_bound),
            "empirical": est.empirical,
        }
        rows = [[q, t, _frac(dict(est.lower_bounds).get(q))] for q, t in est.samples]
        return report, rows, "q,tsd,lower_bound"

    if cfg.command == "bc":
        if len(spec.relations) != 1:
            raise ValueError("bc requires a hypersurface ring (exactly one relation)")
        n = spec.nvars - 1
        d = poly_degree(spec.relations[0])
        rows = []
        for q in cfg.qs:
            mq = m_of_q(n, d, q)
            lq = L_of_q(n, d, q)
            tsd = top_socle_degree(spec, ideal, q)
            length = hilbert_kunz(spec, ideal, q).total_length
            attained = tsd == mq and length == lq
            xi = xi_from_sample(n, q, mq)
            hq = h_of_q(n, d, q, xi)
            rows.append([q, mq, lq, hq, tsd, length, attained])
        report = {
            "schema_version": SCHEMA_VERSION,
            "command": "bc",
            "n": n,
            "d": d,
            "socle_constant": _frac(socle_constant(n, d)),
            "rows": [
                {
                    "q": q,
                    "m_q": mq,
                    "L_q": lq,
                    "h_q": hq,
                    "tsd": tsd,
                    "length": length,
                    "attained": att,
                }
                for q, mq, lq, hq, tsd, length, att in rows
            ],
        }
        return report, rows, "q,m_q,L_q,h_q,tsd,length,attained"

    if cfg.command == "betti":
        gens = parse_ideal(spec, ideal)
        if len(gens) < 2:
            raise ValueError("betti needs at least two ideal generators (J gens + divisor)")
        J, u = gens[:-1], gens[-1]
        rows = []
        for q in cfg.qs:
            lc = length_comparison(spec, J, u, "m", q)
            rows.append([q, lc.hom, lc.tor1, lc.beta2, lc.spectral_constant, lc.socle_of_modulus])
        report = {
            "schema_version": SCHEMA_VERSION,
            "command": "betti",
            "rows": [
                {
                    "q": q,
                    "hom": h,
                    "tor1": t,
                    "beta2": b,
                    "spectral_constant": s,
                    "socle_of_modulus": sj,
                }
                for q, h, t, b, s, sj in rows
            ],
        }
        return report, rows, "q,hom,tor1,beta2,spectral_constant,socle_of_modulus"

    raise ValueError(f"unknown command {cfg.command!r}")


def _emit(report, rows, header, cfg: RunConfig) -> str:
    if cfg.fmt == "json":
        return json.dumps(report, indent=2, sort_keys=True) + "\n"
    if cfg.fmt == "csv":
        lines = [header]
        lines += [",".join(str(c) for c in row) for row in rows]
        return "\n".join(lines) + "\n"
    # human: plain table, no color (NO_COLOR trivially respected)
    cols = header.split(",")
    widths = [max(len(c), *(len(str(r[i])) for r in rows)) if rows else len(c) for i, c in enumerate(cols)]
    out = ["  ".join(c.ljust(w) for c, w in zip(cols, widths))]
    for r in rows:
        out.append("  ".join(str(v).ljust(w) for v, w in zip(r, widths)))
    extras = {
        k: v
        for k, v in report.items()
        if k not in ("rows", "schema_version", "command", "samples", "lower_bounds", "probes", "evidence")
        and v is not None
    }
    if extras:
        out.append("")
        for k, v in sorted(extras.items()):
            out.append(f"{k}: {v}")
    return "\n".join(out) + "\n"


def _golden_compare(report, path) -> list:
    with open(path, "r", encoding="utf-8") as fh:
        golden = json.load(fh)
    diffs = []

    def walk(a, b, crumb):
        if isinstance(a, dict) and isinstance(b, dict):
            for k in sorted(set(a) | set(b)):
                walk(a.get(k), b.get(k), f"{crumb}.{k}")
        elif isinstance(a, list) and isinstance(b, list):
            if len(a) != len(b):
                diffs.append(f"{crumb}: length {len(b)} != {len(a)}")
            for i, (x, y) in enumerate(zip(a, b)):
                walk(x, y, f"{crumb}[{i}]")
        elif a != b:
            diffs.append(f"{crumb}: got {b!r}, expected {a!r}")

    walk(golden, report, "$")
    return diffs


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="frobpow",
        description="Frobenius-power invariants of graded rings over F_p. "
        "Polynomials use explicit '*' (write x*y, not xy).",
    )
    sub = ap.add_subparsers(dest="command", required=True)
    names = [
        ("tsd", "top socle degree of R/I^[q] per q"),
        ("socle", "socle profile of R/I^[q] per q"),
        ("hk", "Hilbert-Kunz table of R/I^[q] per q"),
        ("cthreshold", "diagonal F-threshold estimate"),
        ("bc", "minimal Hilbert-Kunz data and attainment check"),
        ("identities", "alternating binomial identity sweep"),
        ("fermat", "strong-semistability classification"),
        ("syzygy-gap", "syzygy gap table over a range"),
        ("betti", "hom/tor1/beta2 length comparison"),
    ]
    for name, help_text in names:
        s = sub.add_parser(name, help=help_text)
        s.add_argument("--ring", help="path to a .ring file")
        s.add_argument("--p", type=int, help="characteristic (Fermat shortcut / syzygy-gap)")
        s.add_argument("--n", type=int, help="Fermat exponent n")
        s.add_argument("--d", type=int, help="diagonal generator degree d")
        s.add_argument("--ideal", default="m", help="ideal generators, ';'-separated; 'm' = all variables")
        s.add_argument("--q", default="", help="comma-separated q list (powers of p); "
                       "for identities: n-max; for syzygy-gap: a values; for fermat: q_max")
        s.add_argument("--format", choices=("human", "csv", "json"), default="human")
        s.add_argument("--output", help="write the report to a file instead of stdout")
        s.add_argument("--check", help="golden JSON file; mismatch sets exit status 2")
        s.add_argument("--jobs", type=int, default=1, help="parallel workers across q")
        s.add_argument("--verbose", action="store_true")
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    ns = ap.parse_args(argv)
    fermat = None
    if ns.p is not None and ns.n is not None and ns.d is not None:
        fermat = (ns.p, ns.n, ns.d)
    elif ns.p is not None and ns.command in ("syzygy-gap",):
        fermat = (ns.p, 0, 0)
    try:
        if ns.command in ("identities", "syzygy-gap", "fermat"):
            qs = [int(s) for s in ns.q.split(",") if s.strip()]
        else:
            p_for_q = None
            if fermat:
                p_for_q = fermat[0]
            elif ns.ring:
                p_for_q = load_ring_file(ns.ring).p
            if p_for_q is None:
                raise ValueError("exactly one ring source: --ring PATH or --p/--n/--d")
            qs = _parse_qs(ns.q, p_for_q) if ns.q else []
            if not qs and ns.command != "cthreshold":
                raise ValueError("--q is required")
        cfg = RunConfig(
            command=ns.command,
            ring_path=ns.ring,
            fermat=fermat,
            ideal=ns.ideal,
            qs=qs,
            fmt=ns.format,
            output=ns.output,
            check=ns.check,
            jobs=ns.jobs,
            verbose=ns.verbose,
        )
        report, rows, header = run(cfg)
    except (PolyParseError, ValueError, NonArtinianError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ResourceBudgetError as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        if exc.dims:
            print(json.dumps({"partial_dims": exc.dims}), file=sys.stderr)
        return 3

    text = _emit(report, rows, header, cfg)
    if cfg.output:
        with open(cfg.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)

    if cfg.check:
        diffs = _golden_compare(report, cfg.check)
        if diffs:
            for d in diffs:
                print(f"golden mismatch: {d}", file=sys.stderr)
            return 2
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
