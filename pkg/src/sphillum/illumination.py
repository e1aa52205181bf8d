"""Spherical illumination: primal predicate, conjugate-face criterion, certificates.

A light ``p`` illuminates a boundary point ``q`` of P when ``q != -p``, the
shorter arc from p to q misses int P, and the great circle through p and
q meets int P.  For a light on a greatsphere disjoint from P this holds iff
``<p, x> > 0`` for every vertex x of the conjugate face of the smallest face
containing q; that inner-product form is what the verifier checks.
"""

import itertools
import logging
from dataclasses import dataclass, field

import numpy as np
from scipy.stats import qmc

from sphillum.errors import (
    AntipodalPair,
    GreatsphereMeetsBody,
    GridTooCoarse,
    LightOffGreatsphere,
    NotInterior,
    NotOnBoundary,
    PointInsideBody,
    UncoveredVertex,
    UnsupportedDimension,
)
from sphillum.polytope import conjugate_face
from sphillum.sphere import DEFAULT_TOL, Hemisphere, normalize, tangent_frame

log = logging.getLogger(__name__)

TWO_PI = 2 * np.pi


@dataclass(frozen=True)
class IlluminationWitness:
    """Greatsphere normal ``h`` (P lies in H_h) and lights on ``h``'s greatsphere."""

    normal: np.ndarray
    lights: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "normal", np.asarray(self.normal, dtype=float))
        object.__setattr__(self, "lights", np.atleast_2d(np.asarray(self.lights, dtype=float)))

    def __len__(self):
        return len(self.lights)

    def subset(self, indices):
        return IlluminationWitness(self.normal, self.lights[list(indices)])


@dataclass
class Certificate:
    """Vertex coverage record shared by spherical and Euclidean verification.

    ``assignment`` maps vertex index to the index of the light (or
    direction) that covers it, ``margins`` holds the corresponding margin.
    """

    assignment: dict
    margins: dict
    min_margin: float
    tolerances: dict
    fragile: bool = False
    face_margins: dict = field(default_factory=dict)

    @property
    def passed(self):
        return self.min_margin > self.tolerances["pred"]


def _fragile(min_margin, tol):
    return min_margin < 10 * tol.pred


def dual_margins(P, vertex_faces, lights):
    """Matrix M[v, i] = min over x in conj(v) of <light_i, x>."""
    Q = P.polar
    out = np.empty((len(vertex_faces), len(lights)))
    for row, F in enumerate(vertex_faces):
        conj = P.lattice.facets_containing(F)
        out[row] = np.min(Q.vertices[conj] @ lights.T, axis=0)
    return out


def illuminates_face_dual(P, p, F, tol=None):
    """Conjugate-face test: ``(ok, margin)`` with margin ``min <p, x>`` over conj(F)."""
    tol = tol or P.tol
    conj = conjugate_face(P, F)
    margin = float(np.min(conj.points @ np.asarray(p, dtype=float)))
    return margin > tol.pred, margin


def _circle_interior_arc(P, u, w):
    """Open arc (s, e) of angles phi with cos(phi) u + sin(phi) w in int P, or None."""
    a = P.facet_normals @ u
    b = P.facet_normals @ w
    r = np.hypot(a, b)
    if np.any(r < 1e-14):
        return None
    alpha = np.arctan2(b, a)
    lo, hi = alpha[0] + np.pi / 2, alpha[0] + 3 * np.pi / 2
    for s0 in alpha[1:]:
        s, e = s0 + np.pi / 2, s0 + 3 * np.pi / 2
        best = None
        for k in (-2, -1, 0, 1, 2):
            ns, ne = max(lo, s + k * TWO_PI), min(hi, e + k * TWO_PI)
            if ne > ns and (best is None or ne - ns > best[1] - best[0]):
                best = (ns, ne)
        if best is None:
            return None
        lo, hi = best
    return lo, hi


def illuminates_point_primal(P, p, q, tol=None):
    """Evaluate the illumination definition directly on the great circle through p, q."""
    tol = tol or P.tol
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    cos_pq = float(p @ q)
    if cos_pq <= -1 + tol.pred:
        raise AntipodalPair("an antipodal light never illuminates")
    if P.contains(p):
        raise PointInsideBody("light lies in the body")
    vals = P.facet_normals @ q
    if np.any(vals > tol.pred) or not np.any(np.abs(vals) <= tol.pred):
        raise NotOnBoundary("q is not a boundary point")
    w = q - cos_pq * p
    w /= np.linalg.norm(w)
    phi_q = float(np.arctan2(q @ w, q @ p))
    arc = _circle_interior_arc(P, p, w)
    if arc is None or arc[1] - arc[0] <= tol.pred:
        return False
    s, e = arc
    for k in (-2, -1, 0, 1, 2):
        lo, hi = max(0.0, s + k * TWO_PI), min(phi_q, e + k * TWO_PI)
        if hi - lo > tol.pred:
            return False
    return True


def _check_witness(P, W, tol, lenient):
    heights = P.vertices @ W.normal
    if np.any(heights <= tol.pred):
        raise GreatsphereMeetsBody(
            f"greatsphere meets the body (min <h, v> = {heights.min():.3e})"
        )
    off = W.lights @ W.normal
    bad = off > tol.pred if lenient else np.abs(off) > tol.pred
    if np.any(bad):
        raise LightOffGreatsphere(
            f"light {int(np.flatnonzero(bad)[0])} is off the greatsphere"
        )


def verify_witness(P, W, tol=None, strict=False, lenient=False):
    """Certify that the lights of W illuminate P, or raise.

    Coverage is checked per vertex; conjugation reverses inclusion, so a
    light that illuminates a vertex illuminates every face through it.
    ``strict`` re-checks every proper face explicitly.  ``lenient`` accepts
    lights anywhere in the closed hemisphere opposite P instead of only on
    the greatsphere.
    """
    tol = tol or P.tol
    _check_witness(P, W, tol, lenient)
    faces = [(i,) for i in range(P.n_vertices)]
    M = dual_margins(P, faces, W.lights)
    best = np.argmax(M, axis=1)
    best_margin = M[np.arange(len(faces)), best]
    for v in range(P.n_vertices):
        if best_margin[v] <= tol.pred:
            raise UncoveredVertex(v, float(best_margin[v]))
    assignment = {v: int(best[v]) for v in range(P.n_vertices)}
    margins = {v: float(best_margin[v]) for v in range(P.n_vertices)}
    face_margins = {}
    if strict:
        all_faces = P.lattice.faces()
        FM = dual_margins(P, all_faces, W.lights)
        for face, row in zip(all_faces, FM):
            m = float(row.max())
            if m <= tol.pred:
                raise UncoveredVertex(face[0], m, f"face {face} is not covered (margin {m:.3e})")
            face_margins[face] = m
    min_margin = float(best_margin.min())
    return Certificate(
        assignment, margins, min_margin, tol.to_dict(), _fragile(min_margin, tol), face_margins
    )


def unrestricted_antipodal_light_check(P, x, tol=None):
    """Check that -x illuminates all vertices and face centroids for interior x."""
    tol = tol or P.tol
    x = np.asarray(x, dtype=float)
    if not P.contains(x, strict=True):
        raise NotInterior("x is not an interior point")
    p = -x
    samples = [P.vertices[i] for i in range(P.n_vertices)]
    samples += [F.centroid() for F in P.faces() if F.dim > 0]
    return all(illuminates_point_primal(P, p, q, tol) for q in samples)


def greatsphere_grid(c, size, seed=0):
    """Quasi-uniform points on the greatsphere orthogonal to c."""
    c = normalize(c)
    frame = tangent_frame(c)
    k = frame.shape[1]
    if k == 1:
        raise UnsupportedDimension("greatsphere of S^1 is a point pair")
    if k == 2:
        t = TWO_PI * (np.arange(size) + 0.5) / size
        local = np.column_stack([np.cos(t), np.sin(t)])
    elif k == 3:
        i = np.arange(size) + 0.5
        z = 1 - 2 * i / size
        phi = np.pi * (1 + 5**0.5) * i
        rho = np.sqrt(1 - z * z)
        local = np.column_stack([rho * np.cos(phi), rho * np.sin(phi), z])
    else:
        from scipy.special import ndtri

        u = qmc.Halton(d=k, scramble=True, seed=seed).random(size)
        g = ndtri(np.clip(u, 1e-12, 1 - 1e-12))
        local = g / np.linalg.norm(g, axis=1, keepdims=True)
    return local @ frame.T


def _exact_cover(masks, full, k):
    """Indices of at most k masks whose union is ``full``, or None (branch on rarest element)."""

    def search(covered, chosen):
        if covered == full:
            return chosen
        if len(chosen) == k:
            return None
        missing = full & ~covered
        best_bit, best_opts = None, None
        bit = 0
        while missing >> bit:
            if (missing >> bit) & 1:
                opts = [j for j, m in enumerate(masks) if (m >> bit) & 1]
                if best_opts is None or len(opts) < len(best_opts):
                    best_bit, best_opts = bit, opts
                    if not opts:
                        return None
            bit += 1
        for j in best_opts:
            found = search(covered | masks[j], chosen + [j])
            if found is not None:
                return found
        return None

    return search(0, [])


def _greedy_cover(masks, full):
    covered, chosen = 0, []
    while covered != full:
        j = max(range(len(masks)), key=lambda j: bin(masks[j] & ~covered).count("1"))
        if masks[j] & ~covered == 0:
            return None
        chosen.append(j)
        covered |= masks[j]
    return chosen


def exhaustive_upper_bound(P, grid_size=None, tol=None, seed=0):
    """Smallest light set found on a grid of the greatsphere bd H_c.

    Candidates sit on the greatsphere orthogonal to the margin center c; the
    vertex coverage relation comes from the dual criterion, and set cover
    is solved exactly up to d+2 lights.  Returns ``(k, witness)``.
    """
    tol = tol or P.tol
    if grid_size is None:
        grid_size = 2000 if P.dim == 2 else 4000
    c = P.center
    cands = greatsphere_grid(c, grid_size, seed)
    M = dual_margins(P, [(i,) for i in range(P.n_vertices)], cands)
    cover = M > tol.pred
    masks = [sum(1 << int(v) for v in np.flatnonzero(cover[:, j])) for j in range(len(cands))]
    # keep one candidate per distinct mask, then drop dominated masks
    by_mask = {}
    for j, m in enumerate(masks):
        if m and m not in by_mask:
            by_mask[m] = j
    distinct = sorted(by_mask, key=lambda m: -bin(m).count("1"))
    maximal = [m for i, m in enumerate(distinct) if not any(m & o == m for o in distinct[:i])]
    full = (1 << P.n_vertices) - 1
    for k in range(1, P.dim + 3):
        chosen = _exact_cover(maximal, full, k)
        if chosen is not None:
            lights = cands[[by_mask[maximal[j]] for j in chosen]]
            return len(chosen), IlluminationWitness(c, lights)
    greedy = _greedy_cover(maximal, full) if maximal else None
    raise GridTooCoarse(
        f"no cover with at most {P.dim + 2} grid lights",
        greedy_size=None if greedy is None else len(greedy),
    )


@dataclass
class SeparationCover:
    point: np.ndarray
    hemispheres: list
    witness: IlluminationWitness
    face_assignment: dict
    min_margin: float


def separation_cover(P, tol=None, **witness_kwargs):
    """An interior point x and d+1 hemispheres through x covering every proper face.

    Built from a witness for the polar body: x = -h and the hemispheres are
    centered at the lights.
    """
    from sphillum.witness import construct_witness

    tol = tol or P.tol
    if P.dim < 2:
        raise UnsupportedDimension("separation covers need d >= 2")
    Q = P.polar
    W, trace = construct_witness(Q, **witness_kwargs)
    x = -W.normal
    if not P.contains(x, strict=True):
        raise NotInterior("-h is not interior to the body")
    if np.any(np.abs(W.lights @ x) > tol.pred):
        raise LightOffGreatsphere("a hemisphere boundary misses x")
    hemis = [Hemisphere(p) for p in W.lights]
    face_assignment = {}
    min_margin = np.inf
    for face in P.lattice.faces():
        vals = P.vertices[list(face)] @ W.lights.T
        worst = vals.min(axis=0)
        j = int(np.argmax(worst))
        if worst[j] <= tol.pred:
            raise UncoveredVertex(face[0], float(worst[j]), f"face {face} not inside any hemisphere")
        face_assignment[face] = j
        min_margin = min(min_margin, float(worst[j]))
    return SeparationCover(x, hemis, W, face_assignment, min_margin)


def all_subsets_fail(P, W, tol=None):
    """True iff no proper subset of size len(W)-1 of the lights passes verification."""
    for idx in itertools.combinations(range(len(W)), len(W) - 1):
        try:
            verify_witness(P, W.subset(idx), tol)
        except UncoveredVertex:
            continue
        return False
    return True
