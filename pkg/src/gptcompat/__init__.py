"""Measurement compatibility on polytopal state spaces of general
probabilistic theories."""

from .compat import (CompatibilityResult, DegreeResult,
                     IncompatibilityCertificate, JointMeasurement,
                     construct_incompatible_pair, degree, degree_free_coin,
                     extract_certificate, finite_marginal, half_coin_joint,
                     is_compatible, joint_from_p, marginals,
                     simplex_product_joint, verify_certificate)
from .effects import (AffineFunction, Effect, FiniteMeasurement, Functional,
                      PositiveFunctional, TwoOutcomeMeasurement,
                      apply_functional, coin_toss, effect_exposing_vertex,
                      effect_vanishing_on_facet, evaluate,
                      functional_is_positive, is_order_unit, is_positive,
                      mix_with_coin, range_on)
from .geometry import (Facet, Polytope, barycentric_coordinates,
                       build_polytope, contains, enumerate_facets,
                       facets_at_vertex, interior_point, is_simplex)
from .lp import LinearProgram, LpSolution, Status, duality_gap, solve_lp
from .shapes import make_polytope, parse_shape

__version__ = "0.1.0"
