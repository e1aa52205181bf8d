"""Face lattices of polytopes, computed from facet-vertex incidences.

Faces are identified by their vertex index sets.  Internally a face is an
int bitmask (bit i set iff vertex i is on the face); the public API hands
out sorted tuples.
"""

import networkx as nx
from networkx.algorithms import isomorphism


def mask_of(indices):
    m = 0
    for i in indices:
        m |= 1 << int(i)
    return m


def indices_of(mask):
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


def _maximal(masks):
    masks = sorted(set(masks), key=lambda m: -bin(m).count("1"))
    kept = []
    for m in masks:
        if not any(m & k == m for k in kept):
            kept.append(m)
    return kept


class FaceLattice:
    """Proper faces of a d-polytope graded by dimension, with the Hasse diagram.

    Built top-down: the facets are the (d-1)-faces, and the (k-1)-faces
    of a k-face F are the maximal sets among ``F & G`` over facets G not
    containing F.  Every proper face of a polytope is obtained this way.
    """

    def __init__(self, n_vertices, facets, dim):
        self.n_vertices = int(n_vertices)
        self.dim = int(dim)
        self.facet_masks = [mask_of(f) for f in facets]
        if len(set(self.facet_masks)) != len(self.facet_masks):
            raise ValueError("duplicate facets")
        self._levels = {self.dim - 1: sorted(set(self.facet_masks))}
        self._children = {}
        for k in range(self.dim - 1, 0, -1):
            below = set()
            for face in self._levels[k]:
                cands = [face & g for g in self.facet_masks if face & g != face and face & g]
                subs = _maximal(cands)
                self._children[face] = subs
                below.update(subs)
            self._levels[k - 1] = sorted(below)
        for face in self._levels[0]:
            self._children[face] = []
        vertices = self._levels[0]
        expected = [1 << i for i in range(self.n_vertices)]
        if sorted(vertices) != expected:
            raise ValueError("incidence data does not describe a polytope: bad 0-faces")
        self._dim_of = {m: k for k, ms in self._levels.items() for m in ms}

    @property
    def f_vector(self):
        return tuple(len(self._levels[k]) for k in range(self.dim))

    def faces(self, k=None):
        """Faces of dimension k (all proper faces if k is None) as index tuples."""
        if k is None:
            return [indices_of(m) for j in range(self.dim) for m in self._levels[j]]
        return [indices_of(m) for m in self._levels.get(k, [])]

    @property
    def facets(self):
        return [indices_of(m) for m in self.facet_masks]

    def dim_of(self, face):
        return self._dim_of[mask_of(face)]

    def is_face(self, face):
        return mask_of(face) in self._dim_of

    def subfaces(self, face):
        """Faces of dimension one less contained in ``face``."""
        return [indices_of(m) for m in self._children[mask_of(face)]]

    def facets_containing(self, face):
        m = mask_of(face)
        return [j for j, g in enumerate(self.facet_masks) if g & m == m]

    def closure(self, vertex_indices):
        """Smallest face containing the given vertices (None if not proper)."""
        m = mask_of(vertex_indices)
        out = -1
        for g in self.facet_masks:
            if g & m == m:
                out &= g
        return None if out == -1 else indices_of(out)

    def incidence_graph(self):
        g = nx.Graph()
        g.add_nodes_from((("v", i) for i in range(self.n_vertices)), kind="v")
        g.add_nodes_from((("f", j) for j in range(len(self.facet_masks))), kind="f")
        for j, m in enumerate(self.facet_masks):
            for i in indices_of(m):
                g.add_edge(("v", i), ("f", j))
        return g


def lattice_isomorphic(L1, L2):
    """Decide combinatorial equivalence of two polytope face lattices.

    Returns ``(True, vertex_map)`` with a vertex bijection that carries
    faces to faces of equal dimension, or ``(False, None)``.
    """
    if L1.dim != L2.dim or L1.f_vector != L2.f_vector:
        return False, None
    matcher = isomorphism.GraphMatcher(
        L1.incidence_graph(),
        L2.incidence_graph(),
        node_match=lambda a, b: a["kind"] == b["kind"],
    )
    for mapping in matcher.isomorphisms_iter():
        vmap = {a[1]: b[1] for a, b in mapping.items() if a[0] == "v"}
        if _preserves_faces(L1, L2, vmap):
            return True, vmap
    return False, None


def _preserves_faces(L1, L2, vmap):
    for face in L1.faces():
        image = tuple(sorted(vmap[i] for i in face))
        if not L2.is_face(image) or L2.dim_of(image) != L1.dim_of(face):
            return False
    return True
