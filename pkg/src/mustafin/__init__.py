"""Models of plane curves over a discrete valuation ring.

The package builds Mustafin-style degenerations of the projective plane
from tuples of lattices, computes their special fibers, decides whether
a curve model is star-like, and certifies that admissible lifts of
syzygy-bundle data stay trivial on every reduced component of the
fiber.  Everything is exact: coefficients live in QQ or GF(p), and the
uniformizer t is an honest polynomial variable.
"""

from .fields import GF, QQ, PrimeField, RationalField
from .rings import (GREVLEX, LEX, MonomialOrder, PolyRing, curve_ring,
                    model_ring, plane_ring, ring, t_block, x_block)
from .poly import (OffsetPolynomial, Polynomial, format_polynomial,
                   is_multihomogeneous, minors_2x2, multidegree,
                   parse_polynomial, reduce_mod_t, substitute,
                   substitute_with_offsets, t_saturate_poly, t_valuation,
                   transport)

__version__ = "0.1.0"
