"""Exact hyperbolic geometry: half-space model, rational Klein-model
polytopes, and certified Dirichlet domains for Bianchi groups."""

from .lorentz import (
    HalfSpace, HalfSpacePoint, QuadRat, RatMatrix, bisector_halfspace,
    halfspace_action, klein_coords, lorentz_apply, psl_to_lorentz,
    rat_matrix_from_proj)
from .polytope import Polytope, initial_box
from .dirichlet import (
    compute_domain, dirichlet_domain, edge_singular_orders, sample_group)
from .domain import BarycentricDomain, FlagSimplex, FundamentalDomain
from .volume import (
    class_number, orbifold_covolume_oracle, polyhedron_covolume)

__all__ = [
    "HalfSpace", "HalfSpacePoint", "QuadRat", "RatMatrix",
    "bisector_halfspace", "halfspace_action", "klein_coords",
    "lorentz_apply", "psl_to_lorentz", "rat_matrix_from_proj",
    "Polytope", "initial_box",
    "compute_domain", "dirichlet_domain", "edge_singular_orders",
    "sample_group",
    "BarycentricDomain", "FlagSimplex", "FundamentalDomain",
    "class_number", "orbifold_covolume_oracle", "polyhedron_covolume",
]
