"""Polyhedral graphs given by their oriented face cycles."""

from dataclasses import dataclass
from functools import cached_property

import networkx as nx

from sphillum.errors import NotPolyhedralGraph
from sphillum.lattice import FaceLattice


@dataclass(frozen=True)
class PolyhedralGraph:
    """A 3-connected planar graph with faces listed counterclockwise from outside.

    ``faces`` is a tuple of vertex-id tuples.  Every undirected edge must be
    traversed once in each direction by the face cycles.
    """

    n_vertices: int
    faces: tuple

    @classmethod
    def from_faces(cls, faces):
        faces = tuple(tuple(int(v) for v in f) for f in faces)
        if not faces:
            raise NotPolyhedralGraph("no faces")
        n = 1 + max(max(f) for f in faces)
        G = cls(n, faces)
        G.validate()
        return G

    @cached_property
    def directed_edges(self):
        """Map (u, v) -> index of the face whose cycle runs u -> v."""
        out = {}
        for j, f in enumerate(self.faces):
            for u, v in zip(f, f[1:] + f[:1]):
                out[(u, v)] = j
        return out

    @cached_property
    def edges(self):
        return sorted({(min(u, v), max(u, v)) for u, v in self.directed_edges})

    @property
    def n_edges(self):
        return len(self.edges)

    @property
    def n_faces(self):
        return len(self.faces)

    def nx_graph(self):
        g = nx.Graph()
        g.add_nodes_from(range(self.n_vertices))
        g.add_edges_from(self.edges)
        return g

    def validate(self):
        counts = {}
        for j, f in enumerate(self.faces):
            if len(f) < 3 or len(set(f)) != len(f):
                raise NotPolyhedralGraph(f"face {j} is not a simple cycle of length >= 3")
            for u, v in zip(f, f[1:] + f[:1]):
                counts[(u, v)] = counts.get((u, v), 0) + 1
        for (u, v), k in counts.items():
            if k != 1 or counts.get((v, u)) != 1:
                raise NotPolyhedralGraph(f"edge {u}-{v} is not shared by two oppositely oriented faces")
        used = {v for f in self.faces for v in f}
        if used != set(range(self.n_vertices)):
            raise NotPolyhedralGraph("vertex ids must be 0..n-1 without gaps")
        if self.n_vertices - self.n_edges + self.n_faces != 2:
            raise NotPolyhedralGraph("Euler relation n - e + f = 2 fails")
        g = self.nx_graph()
        if nx.node_connectivity(g) < 3:
            raise NotPolyhedralGraph("graph is not 3-connected")
        if not nx.check_planarity(g)[0]:
            raise NotPolyhedralGraph("graph is not planar")

    def faces_around(self, v):
        """Faces at v in counterclockwise order seen from outside."""
        start = next(j for j, f in enumerate(self.faces) if v in f)
        order = [start]
        while True:
            f = self.faces[order[-1]]
            u = f[f.index(v) - 1]
            nxt = self.directed_edges[(v, u)]
            if nxt == start:
                return order
            order.append(nxt)

    def lattice(self):
        return FaceLattice(self.n_vertices, [sorted(f) for f in self.faces], 3)

    def to_dict(self):
        return {"faces": [list(f) for f in self.faces]}


def graph_of(P):
    """Polyhedral graph of a Euclidean 3-polytope, faces oriented by outer normals."""
    return PolyhedralGraph.from_faces(P.oriented_facets())
