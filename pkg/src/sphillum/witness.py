"""Constructive (d+1)-light witnesses for spherical polytopes.

d = 2: central projection to the tangent plane at the margin center, three
Levi directions for the image polygon, lifted back to lights on the
boundary greatsphere.

d >= 3: recurse into a facet F (living in its supporting greatsphere
H ≅ S^{d-1}).  The facet witness gives d lights on a greatsphere G ⊂ H.
Rotating H about G by a small angle theta gives a greatsphere H' that misses
P; the antipode of a relative-interior point of F, rotated along, becomes
the extra light, and the facet lights are pushed a small distance delta
into the half of H' on F's side.  (theta, delta) are halved until the
independent verifier accepts.
"""

import logging
from dataclasses import asdict, dataclass, field

import numpy as np
from scipy.spatial import ConvexHull

from sphillum.errors import (
    ConstructionFailed,
    GreatsphereMeetsBody,
    NotConvex,
    ParallelogramError,
    UncoveredVertex,
    UnsupportedDimension,
)
from sphillum.illumination import IlluminationWitness, verify_witness
from sphillum.polytope import SphericalPolytope, hemisphere_center
from sphillum.sphere import DEFAULT_TOL, gnomonic, normalize, tangent_frame

log = logging.getLogger(__name__)

THETA0 = 0.05
DELTA0 = 0.05
MAX_RETRIES = 40
RECENTER_STEP = 1e-2
RECENTER_ATTEMPTS = 8


@dataclass
class LevelRecord:
    dim: int
    facet: tuple = ()
    relint_point: list = field(default_factory=list)
    sub_normal: list = field(default_factory=list)
    theta: float = 0.0
    delta: float = 0.0
    retries: int = 0
    center: list = field(default_factory=list)
    recenter_attempts: int = 0
    seed: int = 0


@dataclass
class ConstructionTrace:
    """Per-level record of a witness construction, outermost level first."""

    levels: list = field(default_factory=list)
    seed: int = 0

    def to_dict(self):
        return {"seed": self.seed, "levels": [asdict(lv) for lv in self.levels]}


def _outer_normals(polygon):
    edges = np.roll(polygon, -1, axis=0) - polygon
    normals = np.column_stack([edges[:, 1], -edges[:, 0]])
    return normals / np.linalg.norm(normals, axis=1, keepdims=True)


def _check_convex_ccw(polygon, tol):
    edges = np.roll(polygon, -1, axis=0) - polygon
    nxt = np.roll(edges, -1, axis=0)
    cross = edges[:, 0] * nxt[:, 1] - edges[:, 1] * nxt[:, 0]
    scale = np.linalg.norm(edges, axis=1) * np.linalg.norm(nxt, axis=1)
    if np.any(cross <= tol.pred * scale):
        raise NotConvex("polygon is not strictly convex and counterclockwise")


def is_parallelogram(polygon, tol=DEFAULT_TOL):
    if len(polygon) != 4:
        return False
    n = _outer_normals(np.asarray(polygon, dtype=float))

    # opposite edges parallel up to an angle of tol.pred
    def opposite(a, b):
        return a @ b < 0 and abs(a[0] * b[1] - a[1] * b[0]) <= tol.pred

    return bool(opposite(n[0], n[2]) and opposite(n[1], n[3]))


def levi_partition(polygon, tol=DEFAULT_TOL):
    """Split the vertices into 3 cyclic runs whose normal arcs are shorter than pi.

    Returns ``(starts, spans, arc_starts)``: the first vertex of each run, the
    angular length of the run's closed normal arc, and the angle where that
    arc begins.  Among feasible splits the one with the largest slack
    ``pi - max(span)`` wins (lexicographically first on ties).
    """
    polygon = np.asarray(polygon, dtype=float)
    n = len(polygon)
    if n < 3:
        raise NotConvex("need at least 3 vertices")
    _check_convex_ccw(polygon, tol)
    if is_parallelogram(polygon, tol):
        raise ParallelogramError("a parallelogram cannot be illuminated by 3 directions")
    normals = _outer_normals(polygon)
    angles = np.arctan2(normals[:, 1], normals[:, 0])
    # exterior angle at vertex i runs from the normal of edge i-1 to that of edge i
    ext = np.mod(angles - np.roll(angles, 1), 2 * np.pi)
    prefix = np.concatenate([[0.0], np.cumsum(ext)])
    total = prefix[-1]
    best, best_slack = None, -np.inf
    for i in range(n):
        for j in range(i + 1, n - 1):
            a = prefix[j] - prefix[i]
            if a >= np.pi:
                break
            ks = np.arange(j + 1, n)
            b = prefix[ks] - prefix[j]
            c = total - a - b
            slack = np.pi - np.maximum(a, np.maximum(b, c))
            idx = int(np.argmax(slack))
            if slack[idx] > best_slack + 1e-15:
                best_slack = float(slack[idx])
                best = (i, j, int(ks[idx]))
    if best is None or best_slack <= tol.pred:
        raise ParallelogramError("no partition into three arcs shorter than pi")
    i, j, k = best
    starts = (i, j, k)
    ends = (j, k, i + n)
    spans = tuple(float(prefix[e % n] - prefix[s] if e < n else total - prefix[s] + prefix[e - n]) for s, e in zip(starts, ends))
    arc_starts = tuple(float(angles[(s - 1) % n]) for s in starts)
    return starts, spans, arc_starts


def levi_directions(polygon, tol=DEFAULT_TOL):
    """Three unit directions illuminating a convex counterclockwise polygon."""
    _, spans, arc_starts = levi_partition(polygon, tol)
    mids = np.array(arc_starts) + np.array(spans) / 2
    return -np.column_stack([np.cos(mids), np.sin(mids)])


def _ccw_order(points2d):
    return [int(i) for i in ConvexHull(points2d).vertices]


def _witness_polygon(P, tol, seed, record):
    rng = np.random.default_rng(seed)
    c = P.center
    for attempt in range(RECENTER_ATTEMPTS + 1):
        frame = tangent_frame(c)
        y = gnomonic(P.vertices, c, frame)
        order = _ccw_order(y)
        try:
            dirs = levi_directions(y[order], tol)
        except ParallelogramError:
            if attempt == RECENTER_ATTEMPTS:
                raise
            r = rng.standard_normal(c.shape[0])
            r -= (r @ c) * c
            c = normalize(c + RECENTER_STEP * normalize(r))
            continue
        record.center = c.tolist()
        record.recenter_attempts = attempt
        lights = -(dirs @ frame.T)
        return IlluminationWitness(c, lights)
    raise ParallelogramError("re-centering did not escape the parallelogram case")


def _best_facet(P):
    best, best_margin = None, -np.inf
    for j, facet in enumerate(P.facets):
        B = tangent_frame(P.facet_normals[j])
        sub = P.vertices[list(facet)] @ B
        sub /= np.linalg.norm(sub, axis=1, keepdims=True)
        margin = hemisphere_center(sub)[1]
        if margin > best_margin + 1e-15:
            best, best_margin = j, margin
    return best


def construct_witness(
    P,
    theta0=THETA0,
    delta0=DELTA0,
    max_retries=MAX_RETRIES,
    seed=0,
    tol=None,
):
    """Return ``(IlluminationWitness, ConstructionTrace)`` with exactly d+1 lights.

    The returned witness has passed :func:`verify_witness`.
    """
    tol = tol or P.tol
    trace = ConstructionTrace(seed=seed)
    W = _construct(P, theta0, delta0, max_retries, seed, tol, trace)
    return W, trace


def _construct(P, theta0, delta0, max_retries, seed, tol, trace):
    d = P.dim
    if d < 2:
        raise UnsupportedDimension("witnesses need d >= 2")
    record = LevelRecord(dim=d, seed=seed)
    trace.levels.append(record)
    if d == 2:
        W = _witness_polygon(P, tol, seed, record)
        try:
            verify_witness(P, W, tol)
        except (UncoveredVertex, GreatsphereMeetsBody) as exc:
            raise ConstructionFailed(f"planar witness rejected: {exc}", trace) from exc
        return W

    j = _best_facet(P)
    n = P.facet_normals[j]
    facet = P.facets[j]
    B = tangent_frame(n)
    sub_pts = P.vertices[list(facet)] @ B
    F = SphericalPolytope.from_vertices(d - 1, sub_pts, tol)
    sub = _construct(F, theta0, delta0, max_retries, seed, tol, trace)
    g = B @ sub.normal
    S = sub.lights @ B.T
    p = normalize(P.vertices[list(facet)].sum(axis=0))
    alpha = -(p @ g)
    rest = -p - alpha * g - (-p @ n) * n

    record.facet = tuple(facet)
    record.relint_point = p.tolist()
    record.sub_normal = g.tolist()
    theta, delta = theta0, delta0
    for attempt in range(max_retries + 1):
        h = -np.cos(theta) * n + np.sin(theta) * g
        t = np.sin(theta) * n + np.cos(theta) * g
        x0 = normalize(alpha * t + rest)
        xs = np.cos(delta) * S + np.sin(delta) * t
        W = IlluminationWitness(h, np.vstack([x0, xs]))
        record.theta, record.delta, record.retries = theta, delta, attempt
        try:
            verify_witness(P, W, tol)
            return W
        except UncoveredVertex as exc:
            log.debug("level d=%d attempt %d rejected: %s", d, attempt, exc)
            # facet vertices are the pushed lights' job; the rest belong to x0
            if exc.vertex in facet:
                delta /= 2
            else:
                theta /= 2
        except GreatsphereMeetsBody as exc:
            log.debug("level d=%d attempt %d rejected: %s", d, attempt, exc)
            theta /= 2
    raise ConstructionFailed(f"no witness after {max_retries} halvings at d={d}", trace)
