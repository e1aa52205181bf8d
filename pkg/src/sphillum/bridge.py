"""Transfer between Euclidean polytopes and spherical ones via the gnomonic map.

E^d is pictured as the tangent hyperplane of S^d at e_{d+1}.  A point x is
sent to ``normalize((scale * x, 1))``; central projection at a unit vector c
sends a spherical point v to its tangent-frame coordinates ``v_T / <v, c>``.
Both maps carry faces to faces, so witnesses built on the sphere turn into
illuminating directions for a combinatorially equivalent Euclidean polytope.
"""

import logging
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from scipy.spatial import ConvexHull

from sphillum.errors import (
    DegenerateDimension,
    InvalidFace,
    LightOffGreatsphere,
    UncoveredVertex,
    UnsupportedDimension,
    VertexOnOrBeyondEquator,
)
from sphillum.illumination import Certificate, _fragile
from sphillum.lattice import FaceLattice, lattice_isomorphic
from sphillum.polytope import SphericalPolytope
from sphillum.sphere import DEFAULT_TOL, gnomonic, normalize, tangent_frame
from sphillum.witness import construct_witness, levi_directions

log = logging.getLogger(__name__)


def default_scale(points):
    """Shrink factor keeping the embedded image well inside its hemisphere."""
    r = float(np.max(np.linalg.norm(points, axis=1)))
    return 0.5 / r if r > 0 else 1.0


def _lift(points, scale):
    points = np.asarray(points, dtype=float)
    return np.column_stack([scale * points, np.ones(len(points))])


class EuclideanPolytope:
    """Convex hull of finitely many points of E^d, kept in V- and H-form.

    Facets are ``{x : <normal_j, x> <= offset_j}`` with unit outer normals.
    Construct with :meth:`from_vertices`; non-extreme input points are dropped
    and the remaining vertices keep their input order.
    """

    def __init__(self, dim, vertices, facets, normals, offsets, tol):
        self.dim = dim
        self.vertices = vertices
        self.facets = facets
        self.facet_normals = normals
        self.facet_offsets = offsets
        self.tol = tol
        for arr in (vertices, normals, offsets):
            arr.setflags(write=False)

    @classmethod
    def from_vertices(cls, points, tol=DEFAULT_TOL):
        X = np.atleast_2d(np.asarray(points, dtype=float))
        d = X.shape[1]
        if d < 2:
            raise DegenerateDimension("Euclidean polytopes need d >= 2")
        # homogeneous lift: the facets of the cone over (s (x - m), 1) are the facets of P
        m = X.mean(axis=0)
        s = default_scale(X - m)
        L = _lift(X - m, s)
        L /= np.linalg.norm(L, axis=1, keepdims=True)
        lifted = SphericalPolytope.from_vertices(d, L, tol)
        keep = [int(np.argmin(np.linalg.norm(L - v, axis=1))) for v in lifted.vertices]
        V = X[keep]
        a = lifted.facet_normals[:, :d]
        b = lifted.facet_normals[:, d]
        na = np.linalg.norm(a, axis=1)
        normals = a / na[:, None]
        offsets = normals @ m - b / (s * na)
        vals = V @ normals.T - offsets
        if np.any(vals > tol.pred * (1 + np.abs(offsets))):
            raise DegenerateDimension("facet data inconsistent with vertices")
        return cls(d, V, list(lifted.facets), normals, offsets, tol)

    def __repr__(self):
        return (
            f"EuclideanPolytope(dim={self.dim}, n_vertices={len(self.vertices)}, "
            f"n_facets={len(self.facets)})"
        )

    @property
    def n_vertices(self):
        return len(self.vertices)

    @cached_property
    def lattice(self):
        return FaceLattice(len(self.vertices), self.facets, self.dim)

    def ccw_polygon(self):
        """Vertex indices in counterclockwise order (d = 2 only)."""
        if self.dim != 2:
            raise UnsupportedDimension("ccw order is defined for polygons")
        return [int(i) for i in ConvexHull(self.vertices).vertices]

    def oriented_facets(self):
        """Facet vertex cycles, counterclockwise seen from outside (d = 3 only)."""
        if self.dim != 3:
            raise UnsupportedDimension("oriented facets are defined for 3-polytopes")
        out = []
        for facet, n in zip(self.facets, self.facet_normals):
            pts = self.vertices[list(facet)]
            rel = pts - pts.mean(axis=0)
            e1 = rel[0] / np.linalg.norm(rel[0])
            e2 = np.cross(n, e1)
            out.append([facet[k] for k in np.argsort(np.arctan2(rel @ e2, rel @ e1))])
        return out

    def scaled(self, factor):
        return EuclideanPolytope.from_vertices(factor * self.vertices, self.tol)


@dataclass(frozen=True)
class DirectionSet:
    directions: np.ndarray

    def __post_init__(self):
        D = np.atleast_2d(np.asarray(self.directions, dtype=float))
        norms = np.linalg.norm(D, axis=1)
        if np.any(norms == 0):
            raise DegenerateDimension("zero direction")
        object.__setattr__(self, "directions", D / norms[:, None])

    def __len__(self):
        return len(self.directions)

    def subset(self, indices):
        return DirectionSet(self.directions[list(indices)])


def embed(P, scale=None, tol=None):
    """Spherical image of P under x -> normalize((scale x, 1))."""
    tol = tol or P.tol
    scale = default_scale(P.vertices) if scale is None else float(scale)
    if scale <= 0:
        raise ValueError("scale must be positive")
    return SphericalPolytope.from_vertices(P.dim, _lift(P.vertices, scale), tol)


def project(P, c, tol=None):
    """Central projection of P to the tangent hyperplane at c, in the frame at c."""
    tol = tol or P.tol
    c = normalize(np.asarray(c, dtype=float))
    heights = P.vertices @ c
    if np.any(heights <= tol.pred):
        raise VertexOnOrBeyondEquator(f"vertex at height {heights.min():.3e} over the equator of c")
    return EuclideanPolytope.from_vertices(gnomonic(P.vertices, c, tangent_frame(c)), tol)


def ideal_directions(lights, c, tol=DEFAULT_TOL):
    """Directions in the tangent frame at c of the arcs leaving lights on bd H_c."""
    lights = np.atleast_2d(np.asarray(lights, dtype=float))
    c = normalize(np.asarray(c, dtype=float))
    off = np.abs(lights @ c)
    if np.any(off > tol.pred):
        raise LightOffGreatsphere(f"light at height {off.max():.3e} off the greatsphere of c")
    return DirectionSet(-(lights @ tangent_frame(c)))


def _face_indices(P, F):
    indices = tuple(sorted(int(i) for i in getattr(F, "vertices", F)))
    if not P.lattice.is_face(indices):
        raise InvalidFace(f"{indices} is not a proper face")
    return indices


def euclidean_illuminates(P, v, F, tol=None):
    """Whether direction v illuminates face F, with margin ``-max <v, n>`` over facets at F."""
    tol = tol or P.tol
    indices = _face_indices(P, F)
    normals = P.facet_normals[P.lattice.facets_containing(indices)]
    margin = -float(np.max(normals @ normalize(np.asarray(v, dtype=float))))
    return margin > tol.pred, margin


def _face_margin_matrix(P, faces, D):
    out = np.empty((len(faces), len(D)))
    for k, face in enumerate(faces):
        normals = P.facet_normals[P.lattice.facets_containing(face)]
        out[k] = -np.max(D.directions @ normals.T, axis=1)
    return out


def euclidean_verify(P, D, strict=False, tol=None):
    """Certify that every vertex (every proper face if ``strict``) is illuminated."""
    tol = tol or P.tol
    faces = [(i,) for i in range(P.n_vertices)]
    M = _face_margin_matrix(P, faces, D)
    best = np.argmax(M, axis=1)
    best_margin = M[np.arange(len(faces)), best]
    for v in range(P.n_vertices):
        if best_margin[v] <= tol.pred:
            raise UncoveredVertex(v, float(best_margin[v]))
    face_margins = {}
    if strict:
        all_faces = P.lattice.faces()
        for face, row in zip(all_faces, _face_margin_matrix(P, all_faces, D)):
            m = float(row.max())
            if m <= tol.pred:
                raise UncoveredVertex(face[0], m, f"face {face} is not covered (margin {m:.3e})")
            face_margins[face] = m
    min_margin = float(best_margin.min())
    return Certificate(
        {v: int(best[v]) for v in range(P.n_vertices)},
        {v: float(best_margin[v]) for v in range(P.n_vertices)},
        min_margin,
        tol.to_dict(),
        _fragile(min_margin, tol),
        face_margins,
    )


@dataclass
class BridgeResult:
    """Output of :func:`combinatorial_illuminator` with all intermediate certificates."""

    polytope: EuclideanPolytope
    directions: DirectionSet
    certificate: Certificate
    vertex_map: dict
    witness: object = None
    trace: object = None
    spherical_certificate: Certificate = None
    extras: dict = field(default_factory=dict)


def combinatorial_illuminator(P, seed=0, scale=None, strict=False, tol=None):
    """A polytope combinatorially equivalent to P illuminated by d+1 directions.

    d = 2 uses the polygon itself with its Levi directions (parallelograms
    raise ParallelogramError, since every polygon in their class needs 4).
    d >= 3 embeds P in S^d, builds a spherical witness, and projects at the
    witness greatsphere's normal.
    """
    tol = tol or P.tol
    if P.dim == 2:
        order = P.ccw_polygon()
        dirs = DirectionSet(levi_directions(P.vertices[order], tol))
        cert = euclidean_verify(P, dirs, strict, tol)
        return BridgeResult(P, dirs, cert, {i: i for i in range(P.n_vertices)})
    from sphillum.illumination import verify_witness

    S = embed(P, scale, tol)
    ok, _ = lattice_isomorphic(P.lattice, S.lattice)
    if not ok:
        raise DegenerateDimension("embedding changed the face lattice")
    W, trace = construct_witness(S, seed=seed, tol=tol)
    scert = verify_witness(S, W, tol)
    c = W.normal
    Q = project(S, c, tol)
    ok, vmap = lattice_isomorphic(P.lattice, Q.lattice)
    if not ok:
        raise DegenerateDimension("projection changed the face lattice")
    D = ideal_directions(W.lights, c, tol)
    cert = euclidean_verify(Q, D, strict, tol)
    return BridgeResult(Q, D, cert, vmap, W, trace, scert)


__all__ = [
    "BridgeResult",
    "DirectionSet",
    "EuclideanPolytope",
    "combinatorial_illuminator",
    "default_scale",
    "embed",
    "euclidean_illuminates",
    "euclidean_verify",
    "ideal_directions",
    "project",
]
