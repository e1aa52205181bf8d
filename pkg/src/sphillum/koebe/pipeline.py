"""End-to-end: polyhedral graph -> normalized Koebe polyhedron with 4 illuminating directions."""

import logging
from dataclasses import dataclass, field

import numpy as np

from sphillum.errors import DegenerateDimension, ParallelogramFace, VerificationFailed
from sphillum.koebe.graph import PolyhedralGraph, graph_of
from sphillum.koebe.realization import (
    choose_face,
    choose_normalization_point,
    four_directions_verified,
    midscribe,
    poincare_normalize,
)
from sphillum.lattice import lattice_isomorphic
from sphillum.sphere import DEFAULT_TOL

log = logging.getLogger(__name__)

PERTURB_ATTEMPTS = 8
TANGENCY_TOL = 1e-6


@dataclass
class KoebeResult:
    polytope: object
    directions: object
    certificate: object
    realization: object
    normalized: object
    mobius: object
    face: int
    point: np.ndarray
    epsilon: float
    vertex_map: dict
    attempts: list = field(default_factory=list)
    seed: int = 0

    def certificates(self):
        return {
            "seed": self.seed,
            "face": self.face,
            "normalization_point": self.point.tolist(),
            "epsilon": self.epsilon,
            "attempts": self.attempts,
            "midscribe_residuals": dict(self.realization.residuals),
            "normalized_residuals": dict(self.normalized.residuals),
            "lattice_isomorphic": True,
            "vertex_map": {str(k): v for k, v in sorted(self.vertex_map.items())},
            "illumination": {
                "assignment": {str(k): v for k, v in self.certificate.assignment.items()},
                "min_margin": self.certificate.min_margin,
                "fragile": self.certificate.fragile,
                "passed": self.certificate.passed,
            },
        }


def _candidate_points(K, j, seed):
    yield "centroid", choose_normalization_point(K, j)
    yield "offset", choose_normalization_point(K, j, force_offset=True)
    rng = np.random.default_rng(seed)
    q = K.face_tangency_points(j)
    for k in range(PERTURB_ATTEMPTS):
        # a strictly positive convex combination of the ideal vertices is in relint
        yield f"random-{k}", rng.dirichlet(np.full(len(q), 2.0)) @ q


def koebe_pipeline(source, seed=0, face=None, tol=DEFAULT_TOL):
    """Koebe polyhedron combinatorially equivalent to ``source``, with 4 verified directions.

    ``source`` is a :class:`PolyhedralGraph` or a Euclidean 3-polytope.
    """
    if isinstance(source, PolyhedralGraph):
        G, reference = source, source.lattice()
    else:
        if source.dim != 3:
            raise DegenerateDimension("Koebe realizations are 3-dimensional")
        G, reference = graph_of(source), source.lattice
    K = midscribe(G, tol)
    if K.residuals["edge_tangency"] >= TANGENCY_TOL:
        raise VerificationFailed(f"edge tangency residual {K.residuals['edge_tangency']:.3e}")
    j = choose_face(G) if face is None else int(face)

    attempts = []
    for label, p in _candidate_points(K, j, seed):
        try:
            M, K2 = poincare_normalize(K, j, p)
            four = four_directions_verified(K2, j, tol)
        except (ParallelogramFace, VerificationFailed, DegenerateDimension) as exc:
            attempts.append({"point": label, "error": f"{type(exc).__name__}: {exc}"})
            log.info("normalization point %s rejected: %s", label, exc)
            continue
        attempts.append({"point": label, "error": None})
        break
    else:
        raise VerificationFailed(f"all normalization points failed: {attempts}")

    P = K2.euclidean(tol)
    ok, vmap = lattice_isomorphic(reference, P.lattice)
    if not ok:
        raise VerificationFailed("normalized realization is not combinatorially equivalent to the input")
    return KoebeResult(P, four.directions, four.certificate, K, K2, M, j, p, four.epsilon, vmap, attempts, seed)
