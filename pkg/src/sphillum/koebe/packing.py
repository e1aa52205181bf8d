"""Planar orthogonal circle pattern for a polyhedral graph.

Nodes are the vertices and faces of the graph; a vertex circle and a face
circle cross at right angles whenever the vertex lies on the face.  The
pattern is built in the plane seen from the tangency point of a chosen edge
e* = (a, b): the circles of a, b and of the two faces at e* pass through that
point, so they become four lines bounding a rectangle and drop out of the
unknowns.  Each incidence (x, y) is a right-angled kite whose angle at x is
``2 arctan(r_y / r_x)``; the log-radii solve the angle-sum equations
(2 pi per node, pi for nodes whose circle is orthogonal to a line).
"""

import logging
from dataclasses import dataclass, field

import numpy as np

from sphillum.errors import SolverDiverged

log = logging.getLogger(__name__)

DEFECT_TOL = 1e-10
MAX_NEWTON = 200


@dataclass
class PlanarPattern:
    """Solved planar pattern: radii and centers of the non-line nodes plus edge tangency points."""

    special_edge: tuple
    line_nodes: tuple
    radius: dict
    center: dict
    tangency: dict
    defects: list = field(default_factory=list)
    layout_error: float = 0.0


def _node_ids(G):
    return [("v", i) for i in range(G.n_vertices)] + [("f", j) for j in range(G.n_faces)]


def _rings(G):
    """Counterclockwise neighbor ring of every node of the vertex-face graph."""
    rings = {}
    for v in range(G.n_vertices):
        rings[("v", v)] = [("f", j) for j in G.faces_around(v)]
    for j, f in enumerate(G.faces):
        rings[("f", j)] = [("v", v) for v in f]
    return rings


def choose_special_edge(G):
    """Edge sent to infinity: the one whose two faces are smallest (first on ties)."""
    best, key = None, None
    for u, v in G.edges:
        k = (len(G.faces[G.directed_edges[(u, v)]]) + len(G.faces[G.directed_edges[(v, u)]]), u, v)
        if key is None or k < key:
            best, key = (u, v), k
    return best


def _defect(rho, idx, nbrs, target):
    F = -target.copy()
    J = np.zeros((len(idx), len(idx)))
    for x, ys in nbrs.items():
        i = idx[x]
        for y in ys:
            k = idx[y]
            d = rho[k] - rho[i]
            F[i] += 2 * np.arctan(np.exp(d))
            w = 1 / np.cosh(d)
            J[i, k] += w
            J[i, i] -= w
    return F, J


def solve_radii(G, special_edge=None, tol=DEFECT_TOL, max_iter=MAX_NEWTON):
    """Log-radii of the planar pattern by damped Newton; returns (pattern-data, defects)."""
    a, b = special_edge or choose_special_edge(G)
    fa, fb = G.directed_edges[(a, b)], G.directed_edges[(b, a)]
    lines = {("v", a), ("v", b), ("f", fa), ("f", fb)}
    rings = _rings(G)
    nodes = [x for x in _node_ids(G) if x not in lines]
    idx = {x: i for i, x in enumerate(nodes)}
    nbrs = {x: [y for y in rings[x] if y not in lines] for x in nodes}
    target = np.array([np.pi if any(y in lines for y in rings[x]) else 2 * np.pi for x in nodes])

    rho = np.zeros(len(nodes))
    defects = []
    F, J = _defect(rho, idx, nbrs, target)
    for _ in range(max_iter):
        err = float(np.max(np.abs(F)))
        defects.append(err)
        if err < tol * 1e-2:
            break
        # gauge: node 0 keeps its radius
        step = np.zeros_like(rho)
        step[1:] = np.linalg.solve(J[1:, 1:], -F[1:])
        t = 1.0
        while t > 1e-8:
            trial = rho + t * step
            F2, J2 = _defect(trial, idx, nbrs, target)
            if np.linalg.norm(F2) < np.linalg.norm(F) or np.max(np.abs(F2)) < tol * 1e-2:
                break
            t /= 2
        else:
            break
        rho, F, J = trial, F2, J2
    err = float(np.max(np.abs(F)))
    if defects[-1] != err:
        defects.append(err)
    if not err < tol:
        raise SolverDiverged(f"angle defect {err:.3e} after {len(defects)} Newton steps", defects)
    return (a, b), lines, {x: float(np.exp(rho[idx[x]])) for x in nodes}, rings, defects


def _sectors(x, ring, radius, lines):
    r = radius[x]
    return [np.pi if y in lines else 2 * np.arctan(radius[y] / r) for y in ring]


def layout(G, special_edge=None, tol=DEFECT_TOL):
    """Solve and lay out the planar pattern; tangency points keyed by sorted edge."""
    (a, b), lines, radius, rings, defects = solve_radii(G, special_edge, tol)
    nodes = list(radius)
    root = nodes[0]
    center = {root: 0j}
    base = {root: 0.0}
    queue = [root]
    while queue:
        x = queue.pop(0)
        ring = rings[x]
        widths = _sectors(x, ring, radius, lines)
        starts = base[x] + np.concatenate([[0.0], np.cumsum(widths)[:-1]])
        for y, s, w in zip(ring, starts, widths):
            if y in lines or y in center:
                continue
            ang = s + w / 2
            center[y] = center[x] + np.hypot(radius[x], radius[y]) * np.exp(1j * ang)
            # orient y's own ring so that the direction back to x hits x's sector middle
            ry = rings[y]
            wy = _sectors(y, ry, radius, lines)
            k = ry.index(x)
            base[y] = ang + np.pi - (sum(wy[:k]) + wy[k] / 2)
            queue.append(y)

    # consistency of the whole layout, not just the BFS tree
    err = 0.0
    for x in nodes:
        for y in rings[x]:
            if y in radius:
                err = max(err, abs(abs(center[x] - center[y]) - np.hypot(radius[x], radius[y])))

    tangency = {}
    spread = {}
    for v in range(G.n_vertices):
        x = ("v", v)
        if x in lines:
            continue
        ring = rings[x]
        widths = _sectors(x, ring, radius, lines)
        starts = base[x] + np.concatenate([[0.0], np.cumsum(widths)[:-1]])
        for (_, j), s, w in zip(ring, starts, widths):
            f = G.faces[j]
            k = f.index(v)
            succ, pred = f[(k + 1) % len(f)], f[k - 1]
            for u, ang in ((succ, s), (pred, s + w)):
                e = (min(u, v), max(u, v))
                z = center[x] + radius[x] * np.exp(1j * ang)
                if e in tangency:
                    spread[e] = max(spread.get(e, 0.0), abs(tangency[e] - z))
                else:
                    tangency[e] = z
    err = max([err] + list(spread.values()))
    return PlanarPattern((a, b), tuple(sorted(lines)), radius, center, tangency, defects, err)
