"""Elementary spherical geometry on S^d embedded in E^{d+1}.

Points of S^d are plain 1-D float arrays of unit norm ("unit points").
Every predicate takes an explicit :class:`Tolerances`; there are no
module-level tolerance globals.
"""

from dataclasses import dataclass, field, replace
from enum import Enum

import numpy as np
from scipy.linalg import null_space

from sphillum.errors import AntipodalPair, CoincidentPair, DegenerateBasis, ZeroVector

UnitPoint = np.ndarray


@dataclass(frozen=True)
class Tolerances:
    """Inner-product slacks used by all predicates.

    unit:  allowed deviation of ``|v|`` from 1 for a unit point.
    pred:  band around 0 in which a sign predicate answers "on boundary".
    dedup: distance below which two points are considered the same.
    """

    unit: float = 1e-12
    pred: float = 1e-9
    dedup: float = 1e-8

    def __post_init__(self):
        for name in ("unit", "pred", "dedup"):
            value = getattr(self, name)
            if not 0.0 < value < 1e-3:
                raise ValueError(f"tolerance {name}={value!r} outside (0, 1e-3)")

    def with_overrides(self, **overrides):
        return replace(self, **{k: float(v) for k, v in overrides.items()})

    def to_dict(self):
        return {"unit": self.unit, "pred": self.pred, "dedup": self.dedup}


DEFAULT_TOL = Tolerances()


class Side(Enum):
    INSIDE = "inside"
    ON_BOUNDARY = "on_boundary"
    OUTSIDE = "outside"


def normalize(v, tol=DEFAULT_TOL):
    v = np.asarray(v, dtype=float)
    n = np.linalg.norm(v)
    if n <= tol.unit:
        raise ZeroVector(f"cannot normalize vector of norm {n:.3e}")
    return v / n


def is_unit(v, tol=DEFAULT_TOL):
    return abs(np.linalg.norm(v) - 1.0) <= tol.unit


def antipode(p):
    return -np.asarray(p, dtype=float)


def _check_pair(p, q, tol):
    c = float(np.dot(p, q))
    if c <= -1.0 + tol.pred:
        raise AntipodalPair("points are antipodal")
    if c >= 1.0 - tol.pred:
        raise CoincidentPair("points coincide")
    return c


def geodesic_point(p, q, t, tol=DEFAULT_TOL):
    """Point at arc fraction ``t`` along the shorter arc from p to q."""
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    c = _check_pair(p, q, tol)
    angle = np.arccos(np.clip(c, -1.0, 1.0))
    if t == 0:
        return p.copy()
    if t == 1:
        return q.copy()
    s = np.sin(angle)
    x = (np.sin((1 - t) * angle) * p + np.sin(t * angle) * q) / s
    return x / np.linalg.norm(x)


def geodesic_distance(p, q):
    return float(np.arccos(np.clip(np.dot(p, q), -1.0, 1.0)))


@dataclass(frozen=True)
class Hemisphere:
    """Open hemisphere ``{y : <center, y> > 0}``."""

    center: np.ndarray = field(compare=False)

    def side(self, p, tol=DEFAULT_TOL):
        return side(self, p, tol)


def canonical_sign(v, eps=1e-12):
    """Flip ``v`` so that its first coordinate with ``|x| > eps`` is positive."""
    v = np.asarray(v, dtype=float)
    for x in v:
        if abs(x) > eps:
            return v if x > 0 else -v
    return v


@dataclass(frozen=True)
class GreatSphere:
    """Greatsphere ``{y : <normal, y> = 0}``; the normal sign is canonical."""

    normal: np.ndarray = field(compare=False)

    def __post_init__(self):
        object.__setattr__(self, "normal", canonical_sign(normalize(self.normal)))

    def contains(self, p, tol=DEFAULT_TOL):
        return abs(float(np.dot(self.normal, p))) <= tol.pred

    def __eq__(self, other):
        if not isinstance(other, GreatSphere):
            return NotImplemented
        return bool(np.array_equal(self.normal, other.normal))

    def __hash__(self):
        return hash(self.normal.tobytes())


def side(h, p, tol=DEFAULT_TOL):
    s = float(np.dot(h.center, p))
    if s > tol.pred:
        return Side.INSIDE
    if s >= -tol.pred:
        return Side.ON_BOUNDARY
    return Side.OUTSIDE


def _oriented_complement(W, n):
    """Orthonormal (u, v) spanning the complement of rows of W, positively oriented."""
    if W.shape[0] == 0:
        basis = np.eye(n)
    else:
        basis = null_space(W).T
    if basis.shape[0] != 2:
        raise DegenerateBasis(f"complement has dimension {basis.shape[0]}, expected 2")
    u, v = basis
    if np.linalg.det(np.vstack([u, v, W])) < 0:
        u, v = v, u
    return u, v


def rotate_about_subsphere(p, W, theta, tol=DEFAULT_TOL):
    """Rotate p by ``theta`` in the 2-plane orthogonal to the row space of W.

    W holds an orthonormal basis of a (d-1)-dimensional subspace of E^{d+1}
    as rows; that subspace is fixed pointwise.  The rotation plane is
    oriented so that ``det[u, v, W] > 0``.
    """
    p = np.asarray(p, dtype=float)
    W = np.atleast_2d(np.asarray(W, dtype=float)).reshape(-1, p.shape[0])
    if W.shape[0] and not np.allclose(W @ W.T, np.eye(W.shape[0]), atol=tol.unit * 10):
        raise DegenerateBasis("basis is not orthonormal")
    u, v = _oriented_complement(W, p.shape[0])
    a, b = float(p @ u), float(p @ v)
    c, s = np.cos(theta), np.sin(theta)
    return p + (a * (c - 1) - b * s) * u + (a * s + b * (c - 1)) * v


def tangent_frame(c):
    """Orthonormal basis (as columns) of the tangent space at c.

    Gram-Schmidt over the standard basis, taken in order of increasing
    ``|c_k|`` (stable), so the frame is reproducible.
    """
    c = np.asarray(c, dtype=float)
    n = c.shape[0]
    order = sorted(range(n), key=lambda k: abs(c[k]))
    frame = [c / np.linalg.norm(c)]
    for k in order:
        e = np.zeros(n)
        e[k] = 1.0
        for f in frame:
            e -= (e @ f) * f
        norm = np.linalg.norm(e)
        if norm > 1e-8:
            frame.append(e / norm)
        if len(frame) == n:
            break
    return np.array(frame[1:]).T


def gnomonic(points, c, frame=None):
    """Central projection of points in the open hemisphere H_c to T_c S^d."""
    points = np.atleast_2d(np.asarray(points, dtype=float))
    if frame is None:
        frame = tangent_frame(c)
    heights = points @ c
    return (points @ frame) / heights[:, None]


def inverse_gnomonic(coords, c, frame=None):
    coords = np.atleast_2d(np.asarray(coords, dtype=float))
    if frame is None:
        frame = tangent_frame(c)
    lifted = coords @ frame.T + np.asarray(c, dtype=float)
    return lifted / np.linalg.norm(lifted, axis=1, keepdims=True)


def random_unit(rng, n):
    v = rng.standard_normal(n)
    return v / np.linalg.norm(v)
