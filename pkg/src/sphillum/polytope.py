"""Spherical convex polytopes, represented through their polyhedral cones.

A spherical polytope in S^d is ``S^d ∩ pos(V)`` for a finite vertex set V
that lies in an open hemisphere.  The cone is stored in H-form as outer
facet normals ``n_j`` with ``pos(V) = {y : <n_j, y> <= 0}``.
"""

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from scipy.spatial import ConvexHull, QhullError

from sphillum.errors import (
    DegenerateDimension,
    InvalidFace,
    NotInOpenHemisphere,
    NotOnBoundary,
    UnsupportedDimension,
)
from sphillum.lattice import FaceLattice, lattice_isomorphic
from sphillum.sphere import DEFAULT_TOL, gnomonic, normalize, tangent_frame

# facets spanned by worse-conditioned vertex sets are rejected
MAX_FACET_CONDITION = 1e8


@dataclass(frozen=True)
class Face:
    """A proper face, identified by its sorted vertex indices."""

    vertices: tuple
    dim: int
    normal: np.ndarray = field(compare=False, repr=False)
    owner: object = field(compare=False, repr=False, default=None)

    @property
    def points(self):
        return self.owner.vertices[list(self.vertices)]

    def centroid(self):
        c = self.points.sum(axis=0)
        return c / np.linalg.norm(c)

    def __contains__(self, other):
        return set(other.vertices) <= set(self.vertices)


@dataclass(frozen=True)
class PartialFlag:
    """Chain F_s ⊂ ... ⊂ F_{d-1} of faces with consecutive dimensions."""

    faces: tuple = ()

    @property
    def length(self):
        return len(self.faces)


def _affine_min_norm(S):
    """Weights of the minimum-norm point in the affine hull of the rows of S."""
    k = len(S)
    kkt = np.zeros((k + 1, k + 1))
    kkt[:k, :k] = S @ S.T
    kkt[:k, k] = kkt[k, :k] = 1.0
    rhs = np.zeros(k + 1)
    rhs[k] = 1.0
    return np.linalg.lstsq(kkt, rhs, rcond=None)[0][:k]


def min_norm_point(points, eps=1e-14, max_iter=10000):
    """Point of minimum Euclidean norm in the convex hull of the rows of ``points``.

    Wolfe's active-set algorithm; the corral stays affinely independent so
    every affine subproblem is a small well-posed linear system.
    """
    points = np.asarray(points, dtype=float)
    scale = float(np.max(np.sum(points**2, axis=1)))
    first = int(np.argmin(np.sum(points**2, axis=1)))
    support, lam = [first], np.array([1.0])
    x = points[first].copy()
    for _ in range(max_iter):
        j = int(np.argmin(points @ x))
        if x @ x - points[j] @ x <= eps * scale or j in support:
            break
        support.append(j)
        lam = np.append(lam, 0.0)
        while True:
            alpha = _affine_min_norm(points[support])
            if np.all(alpha > eps):
                lam = alpha
                break
            neg = alpha <= eps
            theta = np.min(lam[neg] / (lam[neg] - alpha[neg]))
            lam = lam + theta * (alpha - lam)
            keep = lam > eps
            support = [i for i, k in zip(support, keep) if k]
            lam = lam[keep] / lam[keep].sum()
        x = lam @ points[support]
    return x


def hemisphere_center(points):
    """Center c maximizing ``min_i <c, v_i>`` over unit c, with that margin.

    The maximizer is the normalized minimum-norm point of conv(V); the
    returned margin is recomputed from the normalized center, so it is a
    certified lower bound even if the solver is slightly off.
    """
    z = min_norm_point(points)
    norm = np.linalg.norm(z)
    if norm == 0.0:
        return None, 0.0
    c = z / norm
    return c, float(np.min(points @ c))


def _dedup(points, tol):
    kept = []
    for p in points:
        if all(np.linalg.norm(p - q) > tol.dedup for q in kept):
            kept.append(p)
    return np.array(kept)


def _refit_normal(vecs, interior):
    """Outer unit normal of the hyperplane through the origin spanned by ``vecs``."""
    _, s, vt = np.linalg.svd(vecs)
    d = vecs.shape[1] - 1
    if s[d - 1] == 0.0 or s[0] / s[d - 1] > MAX_FACET_CONDITION:
        raise DegenerateDimension("near-degenerate facet (condition number too large)")
    n = vt[-1]
    return -n if n @ interior > 0 else n


def _cone_facets_1d(V, c):
    frame = tangent_frame(c)
    y = gnomonic(V, c, frame)[:, 0]
    lo, hi = int(np.argmin(y)), int(np.argmax(y))
    keep = sorted({lo, hi})
    facets = []
    for i in keep:
        v = V[i]
        n = np.array([-v[1], v[0]])
        other = V[hi if i == lo else lo]
        if n @ other > 0:
            n = -n
        facets.append(((keep.index(i),), n))
    return keep, facets


def _cone_facets(V, c, tol):
    """Extreme vertex indices and (vertex set, outer normal) pairs of pos(V)."""
    d = V.shape[1] - 1
    if d == 1:
        return _cone_facets_1d(V, c)
    frame = tangent_frame(c)
    y = gnomonic(V, c, frame)
    try:
        hull = ConvexHull(y)
    except QhullError as exc:
        raise DegenerateDimension(f"qhull failed: {exc}") from None
    keep = sorted(int(i) for i in hull.vertices)
    W = V[keep]
    interior = W.sum(axis=0)
    seen = {}
    for eq in hull.equations:
        a, b = eq[:-1], eq[-1]
        n = normalize(frame @ a + b * c)
        incident = tuple(int(i) for i in np.flatnonzero(np.abs(W @ n) <= tol.pred))
        if len(incident) < d or incident in seen:
            continue
        n = _refit_normal(W[list(incident)], interior)
        seen[incident] = n
    facets = []
    for incident, n in sorted(seen.items()):
        vals = W @ n
        if np.any(vals > tol.pred):
            raise DegenerateDimension("facet normal does not support the cone")
        facets.append((incident, n))
    return keep, facets


class SphericalPolytope:
    """A convex polytope in S^d given by vertices in an open hemisphere.

    Use :meth:`from_vertices`; instances are immutable.
    """

    def __init__(self, dim, vertices, facets, normals, center, margin, tol):
        self.dim = dim
        self.vertices = vertices
        self.facets = facets
        self.facet_normals = normals
        self.center = center
        self.hemisphere_margin = margin
        self.tol = tol
        for arr in (vertices, normals, center):
            arr.setflags(write=False)

    @classmethod
    def from_vertices(cls, dim, points, tol=DEFAULT_TOL):
        V = np.atleast_2d(np.asarray(points, dtype=float))
        if V.shape[1] != dim + 1:
            raise DegenerateDimension(f"points must have {dim + 1} coordinates")
        if dim < 1:
            raise UnsupportedDimension("dimension must be at least 1")
        V = np.array([normalize(v, tol) for v in V])
        V = _dedup(V, tol)
        c, margin = hemisphere_center(V)
        if c is None or margin <= tol.pred:
            raise NotInOpenHemisphere(f"points are not in an open hemisphere (margin {margin:.3e})")
        if V.shape[0] < dim + 1:
            raise DegenerateDimension(f"need at least {dim + 1} distinct points")
        s = np.linalg.svd(V, compute_uv=False)
        if s[dim] < 1e-8 * s[0]:
            raise DegenerateDimension("cone hull is not full-dimensional")
        keep, facets = _cone_facets(V, c, tol)
        V = V[keep]
        c, margin = hemisphere_center(V)
        return cls(
            dim,
            V,
            [f for f, _ in facets],
            np.array([n for _, n in facets]),
            c,
            margin,
            tol,
        )

    def __repr__(self):
        return (
            f"SphericalPolytope(dim={self.dim}, n_vertices={len(self.vertices)}, "
            f"n_facets={len(self.facets)}, margin={self.hemisphere_margin:.4g})"
        )

    @property
    def n_vertices(self):
        return len(self.vertices)

    @cached_property
    def lattice(self):
        return FaceLattice(len(self.vertices), self.facets, self.dim)

    @cached_property
    def polar(self):
        Q = SphericalPolytope.from_vertices(self.dim, self.facet_normals, self.tol)
        if len(Q.vertices) != len(self.facet_normals):
            raise DegenerateDimension("polar lost vertices; facet normals are degenerate")
        if not np.allclose(Q.vertices, self.facet_normals, atol=self.tol.dedup):
            raise DegenerateDimension("polar vertex order differs from facet order")
        return Q

    def face(self, indices):
        indices = tuple(sorted(int(i) for i in indices))
        if not self.lattice.is_face(indices):
            raise InvalidFace(f"{indices} is not a proper face")
        containing = self.lattice.facets_containing(indices)
        normal = normalize(self.facet_normals[containing].sum(axis=0))
        return Face(indices, self.lattice.dim_of(indices), normal, self)

    def faces(self, k=None):
        return [self.face(f) for f in self.lattice.faces(k)]

    def contains(self, q, strict=False):
        vals = self.facet_normals @ q
        if strict:
            return bool(np.all(vals < -self.tol.pred))
        return bool(np.all(vals <= self.tol.pred))

    def is_vertex_set_equal(self, other, tol=None):
        tol = tol if tol is not None else self.tol.dedup
        if len(self.vertices) != len(other.vertices):
            return False
        dist = np.linalg.norm(self.vertices[:, None, :] - other.vertices[None, :, :], axis=2)
        return bool(np.all(dist.min(axis=1) <= tol) and np.all(dist.min(axis=0) <= tol))


def from_vertices(dim, points, tol=DEFAULT_TOL):
    return SphericalPolytope.from_vertices(dim, points, tol)


def face_lattice(P):
    return P.lattice


def polar(P):
    return P.polar


def minimal_face_containing(P, q):
    """Face whose facet set is exactly the set of facets containing q."""
    vals = P.facet_normals @ np.asarray(q, dtype=float)
    if np.any(vals > P.tol.pred):
        raise NotOnBoundary("point lies outside the polytope")
    on = np.flatnonzero(np.abs(vals) <= P.tol.pred)
    if on.size == 0:
        raise NotOnBoundary("point lies in the interior")
    mask = set(range(P.n_vertices))
    for j in on:
        mask &= set(P.facets[j])
    if not mask:
        raise NotOnBoundary("facets containing the point share no vertex")
    return P.face(mask)


def conjugate_face(P, F):
    """The face of ``P.polar`` made of the facet normals of P vanishing on F."""
    if F.owner is not None and F.owner is not P:
        raise InvalidFace("face belongs to another polytope")
    if not P.lattice.is_face(F.vertices):
        raise InvalidFace(f"{F.vertices} is not a proper face")
    return P.polar.face(P.lattice.facets_containing(F.vertices))


def find_partial_flag(P):
    """Full descending chain from the lexicographically first facet, cut at dim 2."""
    if P.dim < 2:
        raise UnsupportedDimension("partial flags need d >= 2")
    if P.dim == 2:
        return PartialFlag(())
    current = min(P.lattice.facets)
    chain = [current]
    while P.lattice.dim_of(current) > 2:
        current = min(P.lattice.subfaces(current))
        chain.append(current)
    return PartialFlag(tuple(P.face(f) for f in reversed(chain)))


__all__ = [
    "Face",
    "PartialFlag",
    "SphericalPolytope",
    "conjugate_face",
    "face_lattice",
    "find_partial_flag",
    "from_vertices",
    "hemisphere_center",
    "lattice_isomorphic",
    "minimal_face_containing",
    "min_norm_point",
    "polar",
]
