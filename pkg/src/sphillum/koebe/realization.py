"""Midscribed (Koebe) realizations and their hyperbolic normalization.

Every edge of a Koebe polyhedron touches S^2 at one point.  The face
circles (incircles of the faces) and vertex circles (through the tangency
points around a vertex) are both read off those tangency points; a vertex
is the pole of its vertex circle and a face lies in the plane of its face
circle.
"""

import logging
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from sphillum.errors import (
    DegenerateDimension,
    NotPolyhedralGraph,
    ParallelogramFace,
    PointNotInRelint,
    PointNotOnFacePlane,
    UncoveredVertex,
    VerificationFailed,
)
from sphillum.koebe.mobius import CircleOnSphere, MobiusMap, center_points, inversive, stereo_lift
from sphillum.koebe.packing import layout
from sphillum.sphere import DEFAULT_TOL, normalize
from sphillum.witness import is_parallelogram, levi_directions

log = logging.getLogger(__name__)

PLANE_TOL = 1e-9
RELINT_TOL = 1e-6
DIAGONAL_TOL = 1e-3
DIAGONAL_OFFSET = 1e-2
EPS0 = 0.5
MAX_EPS_HALVINGS = 40


def _edge(u, v):
    return (u, v) if u < v else (v, u)


class KoebeRealization:
    """Midscribed realization of a polyhedral graph.

    ``tangency`` maps each sorted edge to its touching point on S^2.  All
    other data (circles, vertices, residuals) is derived from it.
    """

    def __init__(self, graph, tangency, extras=None):
        self.graph = graph
        self.tangency = {e: np.asarray(t, dtype=float) for e, t in tangency.items()}
        self.extras = dict(extras or {})

    def _points_at_face(self, j):
        f = self.graph.faces[j]
        return np.array([self.tangency[_edge(u, v)] for u, v in zip(f, f[1:] + f[:1])])

    def face_tangency_points(self, j):
        """Tangency points of face j in boundary order (edge f[k] -> f[k+1] first)."""
        return self._points_at_face(j)

    def _points_at_vertex(self, v):
        return np.array([self.tangency[e] for e in self.graph.edges if v in e])

    @cached_property
    def face_circles(self):
        return [CircleOnSphere.through(self._points_at_face(j)) for j in range(self.graph.n_faces)]

    @cached_property
    def vertex_circles(self):
        return [CircleOnSphere.through(self._points_at_vertex(v)) for v in range(self.graph.n_vertices)]

    @cached_property
    def vertices(self):
        return np.array([c.pole() for c in self.vertex_circles])

    def outer_normal(self, j):
        """Unit normal of face j's plane pointing away from the polyhedron."""
        c = self.face_circles[j]
        others = [v for v in range(self.graph.n_vertices) if v not in self.graph.faces[j]]
        n = c.normal
        return -n if np.mean(self.vertices[others] @ n) > c.offset else n

    @cached_property
    def residuals(self):
        G = self.graph
        V = self.vertices
        edge_dist = 0.0
        touch = 0.0
        for u, v in G.edges:
            d = V[v] - V[u]
            d /= np.linalg.norm(d)
            foot = V[u] - (V[u] @ d) * d
            edge_dist = max(edge_dist, abs(np.linalg.norm(foot) - 1))
            touch = max(touch, float(np.linalg.norm(foot - self.tangency[(u, v)])))
        face_fit = max(float(c.residual(self._points_at_face(j)).max()) for j, c in enumerate(self.face_circles))
        vertex_fit = max(float(c.residual(self._points_at_vertex(v)).max()) for v, c in enumerate(self.vertex_circles))
        planarity = 0.0
        for j, f in enumerate(G.faces):
            c = self.face_circles[j]
            scale = max(1.0, float(np.abs(V[list(f)]).max()))
            planarity = max(planarity, float(c.residual(V[list(f)]).max()) / scale)
        tangent = 0.0
        for u, v in G.edges:
            tangent = max(tangent, abs(abs(inversive(self.vertex_circles[u], self.vertex_circles[v])) - 1))
            fu, fv = G.directed_edges[(u, v)], G.directed_edges[(v, u)]
            tangent = max(tangent, abs(abs(inversive(self.face_circles[fu], self.face_circles[fv])) - 1))
        ortho = max(
            abs(inversive(self.vertex_circles[v], self.face_circles[j]))
            for j, f in enumerate(G.faces)
            for v in f
        )
        return {
            "edge_tangency": edge_dist,
            "tangency_point": touch,
            "face_circle_fit": face_fit,
            "vertex_circle_fit": vertex_fit,
            "face_planarity": planarity,
            "circle_tangency": tangent,
            "orthogonality": ortho,
        }

    def max_residual(self):
        return max(self.residuals.values())

    def tangency_graphs(self, tol=1e-6):
        """Edge sets of the tangency graphs of the vertex and face circle families."""

        def touching(circles):
            out = set()
            for i in range(len(circles)):
                for k in range(i + 1, len(circles)):
                    if abs(abs(inversive(circles[i], circles[k])) - 1) <= tol:
                        out.add((i, k))
            return out

        return touching(self.vertex_circles), touching(self.face_circles)

    def transform(self, M):
        moved = M.apply_points(np.array(list(self.tangency.values())))
        moved /= np.linalg.norm(moved, axis=1, keepdims=True)
        return KoebeRealization(self.graph, dict(zip(self.tangency, moved)), self.extras)

    def euclidean(self, tol=DEFAULT_TOL):
        from sphillum.bridge import EuclideanPolytope

        P = EuclideanPolytope.from_vertices(self.vertices, tol)
        if P.n_vertices != self.graph.n_vertices:
            raise DegenerateDimension("a realization vertex is not extreme")
        return P

    def circles_dict(self):
        return {
            "face_circles": [c.to_dict() for c in self.face_circles],
            "vertex_circles": [c.to_dict() for c in self.vertex_circles],
            "residuals": dict(self.residuals),
        }


def midscribe(G, tol=DEFAULT_TOL, special_edge=None):
    """Koebe realization of G from a planar orthogonal circle pattern.

    The pattern is lifted to S^2 with the special edge touching at the
    north pole, then moved by a Möbius map so the tangency points have
    centroid zero (this keeps every circle well away from a great circle).
    """
    if not hasattr(G, "faces_around"):
        raise NotPolyhedralGraph("expected a PolyhedralGraph")
    pattern = layout(G, special_edge)
    edges = list(G.edges)
    pts = np.empty((len(edges), 3))
    for k, e in enumerate(edges):
        if e == _edge(*pattern.special_edge):
            pts[k] = (0.0, 0.0, 1.0)
        else:
            # the plane picture is the sphere seen from inside; mirror it
            z = np.conj(pattern.tangency[e])
            pts[k] = stereo_lift([z.real, z.imag])[0]
    M, centered = center_points(pts)
    K = KoebeRealization(
        G,
        dict(zip(edges, centered)),
        {
            "special_edge": list(pattern.special_edge),
            "newton_defects": pattern.defects,
            "layout_error": pattern.layout_error,
        },
    )
    _check_orientation(K)
    return K


def _check_orientation(K):
    f = K.graph.faces[0]
    X = K.vertices[list(f)]
    c = X.mean(axis=0)
    area = sum(np.cross(X[k] - c, X[(k + 1) % len(f)] - c) for k in range(len(f)))
    if area @ K.outer_normal(0) <= 0:
        raise DegenerateDimension("realization has reversed orientation")


def _face_frame(K, j):
    m = K.outer_normal(j)
    e1 = normalize(np.cross(m, [1.0, 0.0, 0.0]) if abs(m[0]) < 0.9 else np.cross(m, [0.0, 1.0, 0.0]))
    e2 = np.cross(m, e1)
    return m, np.column_stack([e1, e2])


def _klein_distance(x, y):
    c = (1 - x @ y) / np.sqrt((1 - x @ x) * (1 - y @ y))
    return float(np.arccosh(max(c, 1.0)))


def diagonal_intersection(K, j):
    """Intersection of the chords q1q3 and q2q4 of a quadrilateral face."""
    q = K.face_tangency_points(j)
    if len(q) != 4:
        raise ValueError("diagonals are defined for quadrilateral faces")
    A = np.column_stack([q[2] - q[0], -(q[3] - q[1])])
    s, t = np.linalg.lstsq(A, q[1] - q[0], rcond=None)[0]
    return q[0] + s * (q[2] - q[0])


def choose_normalization_point(K, j, force_offset=False):
    """Klein centroid of face j's tangency points, nudged off the diagonal crossing of a quad."""
    q = K.face_tangency_points(j)
    p = q.mean(axis=0)
    if len(q) == 4:
        x = diagonal_intersection(K, j)
        if force_offset or _klein_distance(p, x) < DIAGONAL_TOL:
            p = p + DIAGONAL_OFFSET * normalize(q[0] - p)
    return p


def relint_distances(K, j, p):
    """Signed distances from p to the chords of face j's ideal polygon (positive inside)."""
    q = K.face_tangency_points(j)
    m, frame = _face_frame(K, j)
    y = (q - p) @ frame
    out = []
    for k in range(len(y)):
        a, b = y[k], y[(k + 1) % len(y)]
        d = b - a
        out.append(float((a[0] * d[1] - a[1] * d[0]) / np.linalg.norm(d)))
    out = np.array(out)
    return out if np.sum(out) > 0 else -out


def poincare_normalize(K, j, p):
    """Möbius map taking p on face j's hyperbolic plane to the center, and the moved realization."""
    p = np.asarray(p, dtype=float)
    c = K.face_circles[j]
    if p @ p >= 1 or abs(p @ c.normal - c.offset) > PLANE_TOL:
        raise PointNotOnFacePlane("point is not on the face plane inside the ball")
    if np.any(relint_distances(K, j, p) <= RELINT_TOL):
        raise PointNotInRelint("point is not in the relative interior of the face polygon")
    M = MobiusMap.boost(p)
    return M, K.transform(M)


def choose_face(G):
    """Largest face, skipping quadrilaterals when any other face exists."""
    sizes = [len(f) for f in G.faces]
    pool = [j for j, s in enumerate(sizes) if s != 4] or list(range(len(sizes)))
    return max(pool, key=lambda j: (sizes[j], -j))


@dataclass
class FourDirections:
    directions: object
    epsilon: float
    certificate: object
    normal: np.ndarray = field(repr=False, default=None)


def four_directions_verified(K, j, tol=DEFAULT_TOL):
    from sphillum.bridge import DirectionSet, euclidean_verify

    f = K.graph.faces[j]
    m, frame = _face_frame(K, j)
    X = K.vertices[list(f)]
    poly = (X - X.mean(axis=0)) @ frame
    if is_parallelogram(poly, tol):
        raise ParallelogramFace(f"face {j} is a parallelogram")
    planar = levi_directions(poly, tol)
    lifted = planar @ frame.T
    P = K.euclidean(tol)
    eps = EPS0
    last = None
    for _ in range(MAX_EPS_HALVINGS + 1):
        D = DirectionSet(np.vstack([m, lifted - eps * m]))
        try:
            cert = euclidean_verify(P, D, tol=tol)
            return FourDirections(D, eps, cert, m)
        except UncoveredVertex as exc:
            last = exc
            eps /= 2
    raise VerificationFailed(f"no epsilon in the halving schedule works ({last})")


def four_directions(K, j, tol=DEFAULT_TOL):
    """The outer normal of face j plus three Levi directions of the face tilted inward."""
    return four_directions_verified(K, j, tol).directions
