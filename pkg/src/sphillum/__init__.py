"""Illumination of convex polytopes in spherical and Euclidean space.

Spherical polytopes, their polars and conjugate faces; certified
(d+1)-light illumination witnesses; the gnomonic bridge to Euclidean
polytopes; and Koebe realizations of 3-polytopes lit by four directions.
"""

from sphillum.bridge import (
    DirectionSet,
    EuclideanPolytope,
    combinatorial_illuminator,
    embed,
    euclidean_illuminates,
    euclidean_verify,
    ideal_directions,
    project,
)
from sphillum.errors import IlluminationError
from sphillum.illumination import (
    Certificate,
    IlluminationWitness,
    exhaustive_upper_bound,
    illuminates_face_dual,
    illuminates_point_primal,
    separation_cover,
    unrestricted_antipodal_light_check,
    verify_witness,
)
from sphillum.polytope import (
    SphericalPolytope,
    conjugate_face,
    find_partial_flag,
    minimal_face_containing,
)
from sphillum.sphere import DEFAULT_TOL, Tolerances
from sphillum.witness import construct_witness, levi_directions

__version__ = "0.1.0"

__all__ = [
    "Certificate",
    "DEFAULT_TOL",
    "DirectionSet",
    "EuclideanPolytope",
    "IlluminationError",
    "IlluminationWitness",
    "SphericalPolytope",
    "Tolerances",
    "combinatorial_illuminator",
    "conjugate_face",
    "construct_witness",
    "embed",
    "euclidean_illuminates",
    "euclidean_verify",
    "exhaustive_upper_bound",
    "find_partial_flag",
    "ideal_directions",
    "illuminates_face_dual",
    "illuminates_point_primal",
    "levi_directions",
    "minimal_face_containing",
    "project",
    "separation_cover",
    "unrestricted_antipodal_light_check",
    "verify_witness",
]
