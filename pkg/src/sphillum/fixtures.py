"""Canonical bodies and random generators used by tests, CLI demos and benchmarks."""

import itertools

import numpy as np
from scipy.stats import special_ortho_group

from sphillum.polytope import SphericalPolytope
from sphillum.sphere import DEFAULT_TOL, inverse_gnomonic

GOLDEN = (1 + 5**0.5) / 2


def simplex(d, tol=DEFAULT_TOL):
    """SIM_d: the spherical simplex with vertices e_1, ..., e_{d+1}."""
    return SphericalPolytope.from_vertices(d, np.eye(d + 1), tol)


def octant(tol=DEFAULT_TOL):
    return simplex(2, tol)


def cube_vertices(d=3):
    return np.array(list(itertools.product((-1.0, 1.0), repeat=d)))


def tetrahedron_vertices():
    return np.array([[1, 1, 1], [1, -1, -1], [-1, 1, -1], [-1, -1, 1]], dtype=float)


def square_vertices():
    return np.array([[1, 1], [-1, 1], [-1, -1], [1, -1]], dtype=float)


def regular_polygon(n, radius=1.0, phase=0.0):
    t = phase + 2 * np.pi * np.arange(n) / n
    return radius * np.column_stack([np.cos(t), np.sin(t)])


def dodecahedron_vertices():
    pts = [list(p) for p in itertools.product((-1.0, 1.0), repeat=3)]
    a, b = 1 / GOLDEN, GOLDEN
    for s1, s2 in itertools.product((-1.0, 1.0), repeat=2):
        pts.append([0.0, s1 * a, s2 * b])
        pts.append([s1 * a, s2 * b, 0.0])
        pts.append([s1 * b, 0.0, s2 * a])
    return np.array(pts)


def random_sphere_points(rng, n, dim=3):
    x = rng.standard_normal((n, dim))
    return x / np.linalg.norm(x, axis=1, keepdims=True)


def random_spherical_polytope(rng, d, n, spread=1.0, tol=DEFAULT_TOL):
    """Random polytope in S^d from n points scattered around a random center.

    Points are drawn in the tangent chart at e_{d+1} with radii in
    [0.5, 1] * spread (so most are extreme), lifted, and rotated by a
    random rotation of E^{d+1}.
    """
    directions = rng.standard_normal((n, d))
    directions /= np.linalg.norm(directions, axis=1, keepdims=True)
    radii = spread * rng.uniform(0.5, 1.0, size=(n, 1))
    e = np.zeros(d + 1)
    e[-1] = 1.0
    pts = inverse_gnomonic(directions * radii, e, np.eye(d + 1)[:, :d])
    R = special_ortho_group.rvs(d + 1, random_state=rng)
    return SphericalPolytope.from_vertices(d, pts @ R.T, tol)


def random_spherical_polygon(rng, n, spread=1.0, tol=DEFAULT_TOL):
    return random_spherical_polytope(rng, 2, n, spread, tol)


def cube_graph_faces():
    """Faces of CUBEGRAPH, counterclockwise seen from outside, on cube_vertices() order."""
    return [
        [0, 1, 3, 2],
        [4, 6, 7, 5],
        [0, 4, 5, 1],
        [2, 3, 7, 6],
        [0, 2, 6, 4],
        [1, 5, 7, 3],
    ]


def tetrahedron_graph_faces():
    return [[0, 1, 2], [0, 3, 1], [0, 2, 3], [1, 3, 2]]
