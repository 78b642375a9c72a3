#!/usr/bin/env python3
"""Regenerate rings/rational-quintic-p2.ring from the toric kernel oracle.

The curve is the monomial quintic (s,t) -> (t^5, s*t^4, s^4*t, s^5); its
defining ideal is computed by brute force and verified against the
semigroup Hilbert function before writing.
"""

import os
import sys

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from frobpow.polyring import RingSpec, monomial_curve_ideal, poly_str


def main():
    gens = monomial_curve_ideal(2, (0, 1, 4, 5))
    spec = RingSpec(2, ("a", "b", "c", "d"))
    path = os.path.join(os.path.dirname(__file__), "..", "rings", "rational-quintic-p2.ring")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("# rational quintic curve (t^5, s*t^4, s^4*t, s^5) over F_2\n")
        fh.write("# generated by scripts/make_quintic_ring.py\n")
        fh.write("p: 2\n")
        fh.write("vars: a b c d\n")
        for g in gens:
            fh.write(f"relation: {poly_str(g, spec).replace(' ', '')}\n")
    print(f"wrote {os.path.normpath(path)} with {len(gens)} relations")


if __name__ == "__main__":
    main()
