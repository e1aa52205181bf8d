"""Static SVG renders: S^2 witness diagrams, normal fans, circle packings, 3-D meshes."""

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402
from matplotlib.patches import Circle  # noqa: E402
from mpl_toolkits.mplot3d.art3d import Poly3DCollection  # noqa: E402

from sphillum.errors import UnsupportedDimension  # noqa: E402
from sphillum.sphere import geodesic_point, tangent_frame  # noqa: E402

plt.rcParams["svg.hashsalt"] = "sphillum"


def _save(fig, path):
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)


def _orthographic(points, c):
    return np.atleast_2d(points) @ tangent_frame(c)


def render_sphere(P, path, witness=None, samples=64):
    """Orthographic view of a polygon on S^2 from its center, with an optional witness."""
    if P.dim != 2:
        raise UnsupportedDimension("sphere diagrams need a polytope in S^2")
    c = P.center
    fig, ax = plt.subplots(figsize=(5, 5))
    ax.add_patch(Circle((0, 0), 1, fill=False, color="0.6", lw=0.8))
    ts = np.linspace(0, 1, samples)
    for facet in P.facets:
        a, b = P.vertices[list(facet)]
        arc = np.array([geodesic_point(a, b, t) for t in ts])
        xy = _orthographic(arc, c)
        ax.plot(xy[:, 0], xy[:, 1], color="tab:blue", lw=1.5)
    xy = _orthographic(P.vertices, c)
    ax.plot(xy[:, 0], xy[:, 1], "o", color="tab:blue", ms=4)
    if witness is not None:
        F = tangent_frame(witness.normal)
        phi = np.linspace(0, 2 * np.pi, 4 * samples)
        circle = np.cos(phi)[:, None] * F[:, 0] + np.sin(phi)[:, None] * F[:, 1]
        front = circle @ c >= 0
        xy = _orthographic(circle, c)
        ax.plot(np.where(front, xy[:, 0], np.nan), np.where(front, xy[:, 1], np.nan), color="tab:orange")
        ax.plot(np.where(front, np.nan, xy[:, 0]), np.where(front, np.nan, xy[:, 1]), color="tab:orange", ls=":")
        lxy = _orthographic(witness.lights, c)
        ax.plot(lxy[:, 0], lxy[:, 1], "*", color="tab:red", ms=10, label="lights")
        ax.legend(loc="upper right", fontsize=8)
    ax.set_aspect("equal")
    ax.set_xlim(-1.05, 1.05)
    ax.set_ylim(-1.05, 1.05)
    ax.axis("off")
    _save(fig, path)


def render_fan(polygon, directions, path):
    """A planar polygon, its outer normal fan, and illumination directions."""
    polygon = np.asarray(polygon, dtype=float)
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(9, 4.5))
    closed = np.vstack([polygon, polygon[:1]])
    ax1.plot(closed[:, 0], closed[:, 1], color="tab:blue")
    center = polygon.mean(axis=0)
    span = np.ptp(polygon, axis=0).max()
    for v in np.asarray(directions):
        ax1.arrow(*center, *(0.3 * span * v), color="tab:red", width=0.005 * span)
    ax1.set_aspect("equal")
    ax1.set_title("polygon and directions", fontsize=9)
    edges = np.roll(polygon, -1, axis=0) - polygon
    normals = np.column_stack([edges[:, 1], -edges[:, 0]])
    normals /= np.linalg.norm(normals, axis=1, keepdims=True)
    ax2.add_patch(Circle((0, 0), 1, fill=False, color="0.6"))
    for n in normals:
        ax2.plot([0, n[0]], [0, n[1]], color="tab:blue")
    for v in np.asarray(directions):
        ax2.plot([0, -v[0]], [0, -v[1]], color="tab:red", ls="--")
    ax2.set_aspect("equal")
    ax2.set_title("normal fan (dashed: -direction)", fontsize=9)
    for ax in (ax1, ax2):
        ax.axis("off")
    _save(fig, path)


def render_packing(pattern, path):
    """Circles of a planar orthogonal pattern; vertex circles solid, face circles dashed."""
    fig, ax = plt.subplots(figsize=(6, 6))
    pts = []
    for node, r in pattern.radius.items():
        z = pattern.center[node]
        style = {"ls": "-", "color": "tab:blue"} if node[0] == "v" else {"ls": "--", "color": "tab:green"}
        ax.add_patch(Circle((z.real, z.imag), r, fill=False, lw=0.8, **style))
        pts += [(z.real - r, z.imag - r), (z.real + r, z.imag + r)]
    t = np.array([[z.real, z.imag] for z in pattern.tangency.values()])
    ax.plot(t[:, 0], t[:, 1], ".", color="tab:red", ms=3)
    pts = np.array(pts)
    ax.set_xlim(pts[:, 0].min(), pts[:, 0].max())
    ax.set_ylim(pts[:, 1].min(), pts[:, 1].max())
    ax.set_aspect("equal")
    ax.axis("off")
    _save(fig, path)


def render_mesh(P, path, directions=None):
    """Shaded 3-D view of a Euclidean 3-polytope with arrows for the directions."""
    if P.dim != 3:
        raise UnsupportedDimension("mesh renders need a 3-polytope")
    fig = plt.figure(figsize=(6, 6))
    ax = fig.add_subplot(projection="3d")
    polys = [P.vertices[f] for f in P.oriented_facets()]
    ax.add_collection3d(Poly3DCollection(polys, facecolor="tab:blue", alpha=0.25, edgecolor="k", lw=0.6))
    lo, hi = P.vertices.min(axis=0), P.vertices.max(axis=0)
    if directions is not None:
        c = P.vertices.mean(axis=0)
        L = 0.4 * float(np.max(hi - lo))
        for v in directions.directions:
            ax.quiver(*c, *(L * v), color="tab:red")
    ax.set_xlim(lo[0], hi[0])
    ax.set_ylim(lo[1], hi[1])
    ax.set_zlim(lo[2], hi[2])
    ax.set_box_aspect(hi - lo)
    ax.set_axis_off()
    _save(fig, path)
