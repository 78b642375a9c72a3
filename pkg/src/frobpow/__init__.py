"""Frobenius-power invariants of graded rings in prime characteristic.

Exact linear algebra over F_p, degree by degree: Hilbert-Kunz functions,
socle profiles, top socle degrees, diagonal F-threshold estimation,
bounded-degree Betti numbers, and strong-semistability classification of
syzygy bundles on diagonal plane curves.
"""

__version__ = "0.1.0"

from .graded_quotient import (  # noqa: F401
    HilbertTable,
    NonArtinianError,
    SocleProfile,
    colon_slice,
    hilbert_kunz,
    quotient_slices,
    socle_profile,
    top_socle_degree,
)
from .polyring import (  # noqa: F401
    PolyParseError,
    RingSpec,
    frobenius_power,
    load_ring_file,
    monomial_curve_ideal,
    monomials_of_degree,
    parse_ideal,
    parse_poly,
    poly_str,
)
