"""Circles on S^2 and Möbius maps in the Lorentz model of E^{3,1}.

A circle ``{x in S^2 : <n, x> = o}`` is the spacelike unit vector
``(n, o) / sqrt(1 - o^2)``; a point x of the sphere (or of the Klein ball)
is the ray of ``(x, 1)``.  Incidence is ``<C, X> = 0`` for the form
``diag(1, 1, 1, -1)``, and Möbius maps of the sphere are the orthochronous
Lorentz matrices acting on both.
"""

from dataclasses import dataclass

import numpy as np

from sphillum.errors import DegenerateDimension

ETA = np.diag([1.0, 1.0, 1.0, -1.0])


def minkowski(a, b):
    return a @ ETA @ b


@dataclass(frozen=True)
class CircleOnSphere:
    normal: np.ndarray
    offset: float

    def __post_init__(self):
        n = np.asarray(self.normal, dtype=float)
        k = np.linalg.norm(n)
        if k == 0:
            raise DegenerateDimension("zero circle normal")
        object.__setattr__(self, "normal", n / k)
        object.__setattr__(self, "offset", float(self.offset) / k)
        if abs(self.offset) >= 1:
            raise DegenerateDimension(f"plane at offset {self.offset:.3e} misses the sphere")

    @classmethod
    def through(cls, points):
        """Least-squares circle through at least three points of S^2."""
        A = np.column_stack([points, -np.ones(len(points))])
        v = np.linalg.svd(A)[2][-1]
        return cls(v[:3], v[3])

    @classmethod
    def from_lorentz(cls, C):
        return cls(C[:3], C[3])

    def lorentz(self):
        return np.append(self.normal, self.offset) / np.sqrt(1 - self.offset**2)

    @property
    def radius(self):
        """Euclidean radius of the circle in its plane."""
        return float(np.sqrt(1 - self.offset**2))

    def residual(self, points):
        return np.abs(np.atleast_2d(points) @ self.normal - self.offset)

    def pole(self):
        """Apex of the cone tangent to S^2 along the circle."""
        if abs(self.offset) < 1e-12:
            raise DegenerateDimension("great circle has its pole at infinity")
        return self.normal / self.offset

    def to_dict(self):
        return {"normal": self.normal.tolist(), "offset": self.offset}


def inversive(c1, c2):
    """Minkowski product of the unit vectors; +-1 for tangent, 0 for orthogonal circles."""
    return minkowski(c1.lorentz(), c2.lorentz())


@dataclass(frozen=True)
class MobiusMap:
    """A Möbius transformation of S^2 as a 4x4 orthochronous Lorentz matrix."""

    matrix: np.ndarray

    @classmethod
    def identity(cls):
        return cls(np.eye(4))

    @classmethod
    def boost(cls, p):
        """The hyperbolic translation taking Klein-model point p to the center."""
        p = np.asarray(p, dtype=float)
        b2 = float(p @ p)
        if b2 >= 1:
            raise DegenerateDimension("boost point must lie inside the unit ball")
        if b2 == 0:
            return cls.identity()
        g = 1 / np.sqrt(1 - b2)
        L = np.eye(4)
        L[:3, :3] += (g - 1) * np.outer(p, p) / b2
        L[:3, 3] = L[3, :3] = -g * p
        L[3, 3] = g
        return cls(L)

    def compose(self, other):
        """self after other."""
        return MobiusMap(self.matrix @ other.matrix)

    def inverse(self):
        return MobiusMap(ETA @ self.matrix.T @ ETA)

    def form_error(self):
        L = self.matrix
        return float(np.max(np.abs(L.T @ ETA @ L - ETA)))

    def is_valid(self, tol=1e-12):
        L = self.matrix
        return self.form_error() <= tol * max(1.0, np.abs(L).max() ** 2) and L[3, 3] > 0 and np.linalg.det(L) > 0

    def apply_points(self, x):
        """Image of points of the closed unit ball (Klein model)."""
        x = np.atleast_2d(np.asarray(x, dtype=float))
        X = np.column_stack([x, np.ones(len(x))]) @ self.matrix.T
        return X[:, :3] / X[:, 3:]

    def apply_circle(self, c):
        return CircleOnSphere.from_lorentz(self.matrix @ c.lorentz())


def stereo_lift(z):
    """Inverse stereographic projection from the plane to S^2 (infinity -> north pole)."""
    z = np.atleast_2d(z)
    s = np.sum(z * z, axis=1, keepdims=True)
    return np.column_stack([2 * z, s - 1]) / (s + 1)


def center_points(points, tol=1e-14, max_iter=200):
    """Möbius map sending the points to a configuration with centroid at the origin."""
    M = MobiusMap.identity()
    cur = np.asarray(points, dtype=float)
    for _ in range(max_iter):
        m = cur.mean(axis=0)
        if np.linalg.norm(m) <= tol:
            break
        step = MobiusMap.boost(m / 2)
        cur = step.apply_points(cur)
        cur /= np.linalg.norm(cur, axis=1, keepdims=True)
        M = step.compose(M)
    return M, cur
