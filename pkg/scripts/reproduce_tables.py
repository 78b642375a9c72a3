#!/usr/bin/env python3
"""Reproduce the headline tables: t.s.d laws, socle lengths, classifications.

Run with --fast to skip the larger exponents (p=7 at q=49, quintic q>=32).
"""

import argparse
import os
import sys
import time

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from frobpow.fermat_classifier import classify
from frobpow.fthreshold import estimate_c
from frobpow.graded_quotient import socle_profile, top_socle_degree
from frobpow.polyring import load_ring_file

RINGS = os.path.join(os.path.dirname(__file__), "..", "rings")


def ring(name):
    return load_ring_file(os.path.join(RINGS, name))


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--fast", action="store_true")
    args = ap.parse_args()

    print("== top socle degree laws, Fermat quartic ==")
    jobs = [("fermat-quartic-p3.ring", [3, 9, 27]), ("fermat-quartic-p5.ring", [5, 25])]
    if not args.fast:
        jobs.append(("fermat-quartic-p7.ring", [7, 49]))
    for name, qs in jobs:
        spec = ring(name)
        vals = [top_socle_degree(spec, "m", q) for q in qs]
        est = estimate_c(spec, "m", max(qs))
        print(f"  p={spec.p}: q={qs} tsd={vals} c={est.c}")

    print("== twisted quartic over F_2: tsd = 3q/2 ==")
    spec = ring("twisted-quartic-p2.ring")
    qs = [2, 4, 8, 16, 32]
    print("  ", [(q, top_socle_degree(spec, "m", q)) for q in qs])

    print("== socle lengths ==")
    for name, qs in (("quadric-p2.ring", [2, 4, 8]), ("cayley-cubic-p2.ring", [2, 4])):
        spec = ring(name)
        print(f"  {name}:", [(q, socle_profile(spec, 'm', q).total) for q in qs])

    print("== classifications ==")
    for p, n, d, qm in ((5, 3, 2, 25), (3, 4, 1, 27), (5, 4, 1, 125), (7, 4, 1, 49)):
        t0 = time.time()
        v = classify(p, n, d, q_max=qm)
        print(f"  (p={p}, n={n}, d={d}): {v.status} c={v.c_estimate} [{time.time()-t0:.1f}s]")

    print("== rational quintic socle lengths ==")
    spec = ring("rational-quintic-p2.ring")
    qs = [2, 4, 8, 16] if args.fast else [2, 4, 8, 16, 32, 64]
    for q in qs:
        t0 = time.time()
        s = socle_profile(spec, "m", q)
        print(f"  q={q}: socle={s.total} [{time.time()-t0:.1f}s]")


if __name__ == "__main__":
    main()
