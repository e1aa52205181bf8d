import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from sphillum import fixtures
from sphillum.bridge import EuclideanPolytope, embed
from sphillum.errors import DegenerateDimension, InvalidFace, NotInOpenHemisphere, NotOnBoundary
from sphillum.lattice import FaceLattice, lattice_isomorphic
from sphillum.polytope import (
    SphericalPolytope,
    conjugate_face,
    find_partial_flag,
    hemisphere_center,
    minimal_face_containing,
)

E3 = np.eye(3)


def brute_force_faces(P):
    """All nonempty intersections of facet vertex sets, graded by rank - 1."""
    facets = [frozenset(f) for f in P.facets]
    out = set(facets)
    frontier = set(facets)
    while frontier:
        new = {g & f for g in frontier for f in facets if g & f} - out
        out |= new
        frontier = new
    out = {tuple(sorted(f)) for f in out}
    return {f: int(np.linalg.matrix_rank(P.vertices[list(f)])) - 1 for f in out}


def test_oct_facets_and_margin(oct_):
    normals = {tuple(np.round(n, 12)) for n in oct_.facet_normals}
    assert normals == {(-1.0, 0.0, 0.0), (0.0, -1.0, 0.0), (0.0, 0.0, -1.0)}
    assert oct_.hemisphere_margin == pytest.approx(1 / np.sqrt(3), abs=1e-14)
    np.testing.assert_allclose(oct_.center, np.ones(3) / np.sqrt(3), atol=1e-14)


def test_rejects_antipodal_and_flat_inputs():
    with pytest.raises(NotInOpenHemisphere):
        SphericalPolytope.from_vertices(2, [E3[0], -E3[0], E3[1]])
    mid = (E3[0] + E3[1]) / np.sqrt(2)
    with pytest.raises(DegenerateDimension):
        SphericalPolytope.from_vertices(2, [E3[0], E3[1], mid])


def test_dedup_and_non_extreme_points_dropped():
    inner = np.ones(3) / np.sqrt(3)
    P = SphericalPolytope.from_vertices(2, [E3[0], E3[1], E3[2], E3[0] + 1e-10, inner])
    assert P.n_vertices == 3


def test_f_vectors(oct_, sim3):
    assert oct_.lattice.f_vector == (3, 3)
    assert sim3.lattice.f_vector == (4, 6, 4)
    cube = embed(EuclideanPolytope.from_vertices(fixtures.cube_vertices()))
    assert cube.lattice.f_vector == (8, 12, 6)


def test_lattice_matches_brute_force(rng):
    for d, n in [(2, 7), (3, 12), (4, 10)]:
        P = fixtures.random_spherical_polytope(rng, d, n)
        oracle = brute_force_faces(P)
        got = {f: P.lattice.dim_of(f) for f in P.lattice.faces()}
        assert got == oracle


def test_polar_examples(oct_):
    Q = oct_.polar
    assert Q.is_vertex_set_equal(SphericalPolytope.from_vertices(2, -E3))
    assert Q.polar.is_vertex_set_equal(oct_)
    for d in (3, 4):
        S = fixtures.simplex(d)
        assert S.polar.is_vertex_set_equal(SphericalPolytope.from_vertices(d, -np.eye(d + 1)))


@given(st.integers(0, 2**31), st.sampled_from([2, 3, 4]), st.integers(8, 20))
def test_polar_involution_and_double_conjugation(seed, d, n):
    P = fixtures.random_spherical_polytope(np.random.default_rng(seed), d, n)
    Q = P.polar
    R = Q.polar
    assert R.is_vertex_set_equal(P)

    def coords(owner, face):
        return sorted(tuple(np.round(owner.vertices[i], 8)) for i in face.vertices)

    for F in P.faces():
        G = conjugate_face(P, F)
        assert F.dim + G.dim == d - 1
        assert coords(R, conjugate_face(Q, G)) == coords(P, F)


def test_conjugation_reverses_inclusion(rng):
    P = fixtures.random_spherical_polytope(rng, 3, 14)
    faces = P.faces()
    for F, G in itertools.product(faces, faces):
        if set(F.vertices) < set(G.vertices):
            assert set(conjugate_face(P, G).vertices) <= set(conjugate_face(P, F).vertices)


def test_facet_normals_support(rng):
    for d in (2, 3, 4):
        P = fixtures.random_spherical_polytope(rng, d, 15)
        vals = P.vertices @ P.facet_normals.T
        assert np.all(vals <= P.tol.pred)
        for j, facet in enumerate(P.facets):
            on = set(np.flatnonzero(np.abs(vals[:, j]) <= P.tol.pred))
            assert on == set(facet)
            assert np.linalg.matrix_rank(P.vertices[list(facet)]) == d
        assert np.all(P.vertices @ P.center >= P.hemisphere_margin - 1e-15)


def test_hemisphere_center_is_optimal(rng):
    # no random unit direction beats the reported margin
    P = fixtures.random_spherical_polytope(rng, 3, 12)
    c, m = hemisphere_center(P.vertices)
    trials = rng.standard_normal((20000, 4))
    trials /= np.linalg.norm(trials, axis=1, keepdims=True)
    assert np.max(np.min(trials @ P.vertices.T, axis=1)) <= m + 1e-12


def test_minimal_face_examples(oct_):
    assert minimal_face_containing(oct_, E3[0]).vertices == (0,)
    mid = (E3[0] + E3[1]) / np.sqrt(2)
    assert minimal_face_containing(oct_, mid).vertices == (0, 1)
    with pytest.raises(NotOnBoundary):
        minimal_face_containing(oct_, np.ones(3) / np.sqrt(3))
    with pytest.raises(NotOnBoundary):
        minimal_face_containing(oct_, -np.ones(3) / np.sqrt(3))


def test_conjugate_face_examples(oct_, sim3):
    Q = oct_.polar

    def labels(G, owner):
        return {tuple(np.round(owner.vertices[i], 12)) for i in G.vertices}

    assert labels(conjugate_face(oct_, oct_.face([0])), Q) == {(0.0, -1.0, 0.0), (0.0, 0.0, -1.0)}
    assert labels(conjugate_face(oct_, oct_.face([0, 1])), Q) == {(0.0, 0.0, -1.0)}
    G = conjugate_face(sim3, sim3.face([0, 1, 2]))
    assert labels(G, sim3.polar) == {(0.0, 0.0, 0.0, -1.0)}
    with pytest.raises(InvalidFace):
        sim3.face([0, 1, 2, 3])


def test_partial_flags(oct_, sim3):
    assert find_partial_flag(oct_).length == 0
    assert [F.vertices for F in find_partial_flag(sim3).faces] == [(0, 1, 2)]
    flag = find_partial_flag(fixtures.simplex(4))
    assert [F.vertices for F in flag.faces] == [(0, 1, 2), (0, 1, 2, 3)]
    assert [F.dim for F in flag.faces] == [2, 3]


def test_face_supporting_normal(rng):
    P = fixtures.random_spherical_polytope(rng, 3, 12)
    for F in P.faces():
        vals = P.vertices @ F.normal
        on = set(np.flatnonzero(np.abs(vals) <= P.tol.pred))
        assert on == set(F.vertices)
        assert np.all(vals[[i for i in range(P.n_vertices) if i not in on]] < -P.tol.pred)


def test_lattice_isomorphism_examples(sim3):
    neg = SphericalPolytope.from_vertices(3, -np.eye(4))
    ok, vmap = lattice_isomorphic(sim3.lattice, neg.lattice)
    assert ok and sorted(vmap.values()) == [0, 1, 2, 3]
    cube = embed(EuclideanPolytope.from_vertices(fixtures.cube_vertices()))
    assert not lattice_isomorphic(sim3.lattice, cube.lattice)[0]
    assert not lattice_isomorphic(cube.lattice, cube.polar.lattice)[0]


def test_lattice_isomorphism_rejects_same_f_vector_different_structure():
    # a square pyramid's lattice matches itself under relabeling but not a
    # different polytope with equal incidence counts of another shape
    pyramid = [(0, 1, 4), (1, 2, 4), (2, 3, 4), (3, 0, 4), (0, 1, 2, 3)]
    L = FaceLattice(5, pyramid, 3)
    perm = [2, 3, 0, 1, 4]
    relabeled = FaceLattice(5, [tuple(sorted(perm[i] for i in f)) for f in pyramid], 3)
    ok, vmap = lattice_isomorphic(L, relabeled)
    assert ok
    for f in L.faces():
        assert relabeled.is_face(tuple(sorted(vmap[i] for i in f)))


def test_lattice_closure_and_subfaces(sim3):
    L = sim3.lattice
    assert L.closure([0]) == (0,)
    assert L.closure([0, 1, 2, 3]) is None
    assert sorted(L.subfaces((0, 1, 2))) == [(0, 1), (0, 2), (1, 2)]
    assert L.facets_containing((0, 1)) == [j for j, f in enumerate(L.facets) if {0, 1} <= set(f)]
    with pytest.raises(ValueError):
        FaceLattice(3, [(0, 1), (0, 1)], 2)
