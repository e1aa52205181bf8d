import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from sphillum import fixtures
from sphillum.bridge import (
    DirectionSet,
    EuclideanPolytope,
    combinatorial_illuminator,
    embed,
    euclidean_illuminates,
    euclidean_verify,
    ideal_directions,
    project,
)
from sphillum.errors import (
    DegenerateDimension,
    InvalidFace,
    LightOffGreatsphere,
    ParallelogramError,
    UncoveredVertex,
    VertexOnOrBeyondEquator,
)
from sphillum.illumination import IlluminationWitness
from sphillum.lattice import lattice_isomorphic
from sphillum.sphere import normalize

CUBE = EuclideanPolytope.from_vertices(fixtures.cube_vertices())
CUBE_DIRS = np.array([-normalize(s) for s in itertools.product([-1, 1], repeat=3)])


def vertex_index(P, x):
    return int(np.argmin(np.linalg.norm(P.vertices - np.asarray(x, dtype=float), axis=1)))


def same_point_set(A, B, atol):
    A, B = np.asarray(A), np.asarray(B)
    if A.shape != B.shape:
        return False
    D = np.linalg.norm(A[:, None, :] - B[None, :, :], axis=2)
    return bool(np.all(D.min(axis=1) <= atol) and np.all(D.min(axis=0) <= atol))


def random_3polytope(rng, n=20):
    return EuclideanPolytope.from_vertices(fixtures.random_sphere_points(rng, n, 3))


def test_cube_polytope_data():
    assert CUBE.n_vertices == 8 and len(CUBE.facets) == 6
    assert CUBE.lattice.f_vector == (8, 12, 6)
    np.testing.assert_allclose(np.abs(CUBE.facet_normals).sum(axis=1), 1, atol=1e-12)
    np.testing.assert_allclose(CUBE.facet_offsets, 1, atol=1e-12)


def test_embed_cube_formula():
    S = embed(CUBE, 0.5)
    expected = [normalize([*(0.5 * np.array(s)), 1]) for s in itertools.product([-1, 1], repeat=3)]
    assert same_point_set(S.vertices, expected, 1e-14)
    assert S.lattice.f_vector == (8, 12, 6)


def test_embed_rejects_degenerate_input():
    with pytest.raises(DegenerateDimension):
        EuclideanPolytope.from_vertices(np.array([[0.0], [1.0]]))
    with pytest.raises(DegenerateDimension):
        EuclideanPolytope.from_vertices(np.array([[0, 0, 0], [1, 0, 0], [0, 1, 0], [1, 1, 0.0]]))


def test_project_embed_round_trip():
    S = embed(CUBE, 0.5)
    Q = project(S, np.eye(4)[3])
    assert same_point_set(Q.vertices, 0.5 * CUBE.vertices, 1e-12)


@given(st.integers(0, 2**31), st.sampled_from([2, 3, 4]), st.floats(0.05, 2.0))
def test_round_trip_random(seed, d, scale):
    rng = np.random.default_rng(seed)
    P = EuclideanPolytope.from_vertices(rng.standard_normal((d + 6, d)))
    S = embed(P, scale)
    assert lattice_isomorphic(P.lattice, S.lattice)[0]
    Q = project(S, np.eye(d + 1)[d])
    assert same_point_set(Q.vertices / scale, P.vertices, 1e-12 * max(1.0, 1 / scale))
    assert lattice_isomorphic(P.lattice, Q.lattice)[0]


def test_project_oct(oct_):
    T = project(oct_, np.ones(3) / np.sqrt(3))
    assert T.dim == 2 and T.n_vertices == 3
    assert lattice_isomorphic(T.lattice, oct_.lattice)[0]
    with pytest.raises(VertexOnOrBeyondEquator):
        project(oct_, -np.eye(3)[0])


def test_ideal_directions_examples():
    # the tangent frame at e3 is (e1, e2), so the light e1 reads out as -e1
    D = ideal_directions(np.eye(3)[[0]], np.eye(3)[2])
    np.testing.assert_allclose(D.directions, [[-1, 0]], atol=1e-15)
    c = np.eye(3)[2]
    p = normalize([np.sqrt(1 - 0.01), 0, 0.1])
    with pytest.raises(LightOffGreatsphere):
        ideal_directions([p], c)


def test_ideal_directions_of_oct_witness(oct_):
    c = np.ones(3) / np.sqrt(3)
    lights = np.array([normalize(v) for v in ([2, -1, -1], [-1, 2, -1], [-1, -1, 2])])
    D = ideal_directions(IlluminationWitness(c, lights).lights, c)
    T = project(oct_, c)
    assert euclidean_verify(T, D).passed


def test_euclidean_illuminates_examples():
    v = -np.ones(3) / np.sqrt(3)
    ok, m = euclidean_illuminates(CUBE, v, [vertex_index(CUBE, [1, 1, 1])])
    assert ok and m == pytest.approx(1 / np.sqrt(3), abs=1e-14)
    ok, _ = euclidean_illuminates(CUBE, v, [vertex_index(CUBE, [1, 1, -1])])
    assert not ok
    ok, _ = euclidean_illuminates(CUBE, [0, 0, -1], [vertex_index(CUBE, [1, 1, 1])])
    assert not ok
    with pytest.raises(InvalidFace):
        euclidean_illuminates(CUBE, v, [0, 7])


def test_cube_needs_eight_directions():
    cert = euclidean_verify(CUBE, DirectionSet(CUBE_DIRS), strict=True)
    assert cert.passed and len(set(cert.assignment.values())) == 8
    for idx in itertools.combinations(range(8), 7):
        with pytest.raises(UncoveredVertex):
            euclidean_verify(CUBE, DirectionSet(CUBE_DIRS[list(idx)]))


def test_cube_single_direction_lights_one_vertex(rng):
    V = rng.standard_normal((10**4, 3))
    V /= np.linalg.norm(V, axis=1, keepdims=True)
    # vertex s is lit by v iff <v, n> < 0 for its three facet normals s_k e_k
    lit = np.zeros(len(V), dtype=int)
    for s in itertools.product([-1, 1], repeat=3):
        lit += np.all(V * np.array(s) < 0, axis=1)
    assert lit.max() <= 1
    for v in V[:200]:
        count = sum(euclidean_illuminates(CUBE, v, [i])[0] for i in range(8))
        assert count <= 1


def test_tetrahedron_four_directions():
    T = EuclideanPolytope.from_vertices(fixtures.tetrahedron_vertices())
    D = []
    for i in range(4):
        opposite = np.delete(T.vertices, i, axis=0).mean(axis=0)
        D.append(normalize(opposite - T.vertices[i]))
    assert euclidean_verify(T, DirectionSet(np.array(D)), strict=True).passed


def check_bridge(P, result):
    assert len(result.directions) == P.dim + 1
    assert lattice_isomorphic(P.lattice, result.polytope.lattice)[0]
    cert = euclidean_verify(result.polytope, result.directions, strict=True)
    assert cert.min_margin > P.tol.pred


def test_combinatorial_illuminator_cube():
    R = combinatorial_illuminator(CUBE)
    check_bridge(CUBE, R)
    assert R.spherical_certificate.passed


def test_combinatorial_illuminator_dodecahedron():
    P = EuclideanPolytope.from_vertices(fixtures.dodecahedron_vertices())
    assert P.lattice.f_vector == (20, 30, 12)
    check_bridge(P, combinatorial_illuminator(P))


def test_combinatorial_illuminator_random(rng):
    for _ in range(3):
        P = random_3polytope(rng)
        check_bridge(P, combinatorial_illuminator(P))


def test_combinatorial_illuminator_planar():
    pent = EuclideanPolytope.from_vertices(fixtures.regular_polygon(5))
    R = combinatorial_illuminator(pent)
    assert len(R.directions) == 3 and R.certificate.passed
    with pytest.raises(ParallelogramError):
        combinatorial_illuminator(EuclideanPolytope.from_vertices(fixtures.square_vertices()))


def test_combinatorial_illuminator_four_dim():
    P = EuclideanPolytope.from_vertices(fixtures.cube_vertices(4))
    R = combinatorial_illuminator(P)
    check_bridge(P, R)
