import json

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from sphillum import fixtures, io
from sphillum.bridge import DirectionSet, EuclideanPolytope
from sphillum.errors import NotPolyhedralGraph, ParseError
from sphillum.illumination import IlluminationWitness, verify_witness


@given(st.floats(allow_nan=False, allow_infinity=False))
def test_float_round_trip_is_exact(x):
    assert float(json.loads(io.dumps([x]))[0]) == x


def test_dumps_shapes():
    text = io.dumps({"a": np.array([1.0, 2.5]), "b": [[1, 2], [3, 4]], "c": True, "d": None, "e": np.int64(3)})
    data = json.loads(text)
    assert data == {"a": [1.0, 2.5], "b": [[1, 2], [3, 4]], "c": True, "d": None, "e": 3}
    assert io.dumps(-0.0) == "0.0"
    with pytest.raises(ValueError):
        io.dumps(float("nan"))


def test_read_json_reports_line(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{\n  "dim": 2,\n  "vertices": [1, 2,\n}\n')
    with pytest.raises(ParseError) as exc:
        io.read_json(bad)
    assert exc.value.line == 4
    assert str(exc.value).startswith(f"{bad}:4:")


def test_spolytope_validation(tmp_path):
    path = tmp_path / "p.json"
    for doc in (
        [1, 2],
        {"dim": 2},
        {"dim": -1, "vertices": [[1]]},
        {"dim": 2, "vertices": [[1, 0]]},
        {"dim": 2, "vertices": [[1, 0, "x"]]},
        {"dim": 2, "vertices": [[0, 0, 0]]},
        {"dim": 2, "vertices": [[1, 0, 0]], "tolerances": {"pred": -1}},
    ):
        path.write_text(json.dumps(doc))
        with pytest.raises(ParseError):
            io.load_spolytope(path)


def test_spolytope_normalizes_and_reports_deltas(tmp_path):
    path = tmp_path / "p.json"
    path.write_text(json.dumps({"dim": 2, "vertices": [[2, 0, 0], [0, 1, 0], [0, 0, 1]], "tolerances": {"pred": 1e-10}}))
    P, deltas = io.load_spolytope(path)
    assert deltas == [1.0, 0.0, 0.0]
    assert P.tol.pred == 1e-10
    assert P.is_vertex_set_equal(fixtures.octant())


def test_polar_round_trip_byte_identical(tmp_path, oct_):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    io.save_spolytope(oct_, a)
    P, _ = io.load_spolytope(a)
    io.save_spolytope(P.polar.polar, b)
    assert a.read_bytes() == b.read_bytes()


def test_canonical_vertices_sorted_and_snapped():
    V = np.array([[0, 1, 1e-17], [-0.0, 0, 1], [1, 0, 0]])
    C = io.canonical_vertices(V)
    assert C.tolist() == [[0.0, 0.0, 1.0], [0.0, 1.0, 0.0], [1.0, 0.0, 0.0]]
    assert not np.signbit(C).any()


def test_off_round_trip_3d_and_nd(tmp_path):
    P = EuclideanPolytope.from_vertices(fixtures.cube_vertices())
    path = tmp_path / "cube.off"
    io.save_euclidean(P, path, comment="unit cube")
    text = path.read_text()
    assert text.startswith("OFF\n# unit cube\n8 6 0\n")
    Q = io.load_euclidean(path)
    np.testing.assert_array_equal(Q.vertices, P.vertices)
    V, faces = io.read_off(path)
    assert all(len(f) == 4 for f in faces)
    P4 = EuclideanPolytope.from_vertices(fixtures.cube_vertices(4))
    V4, _ = io.parse_off(io.euclidean_off(P4))
    np.testing.assert_array_equal(V4, P4.vertices)


def test_off_errors():
    for text, line in (
        ("", None),
        ("PLY\n3 1 0\n", 1),
        ("OFF\n3 x 0\n", 2),
        ("OFF\n3 1 0\n0 0 0\n1 0 0\n", 4),
        ("OFF\n1 0 0\n0 0\n", 3),
        ("OFF\n1 1 0\n0 0 0\n3 0 1 2\n", 4),
    ):
        with pytest.raises(ParseError) as exc:
            io.parse_off(text, "t.off")
        assert exc.value.line == line


def test_load_graph(tmp_path):
    g = tmp_path / "cube.json"
    g.write_text(json.dumps({"faces": fixtures.cube_graph_faces()}))
    G = io.load_graph(g)
    assert G.n_edges == 12
    g.write_text(json.dumps({"faces": [[0, 1, 2], [0, 2, 1]]}))
    with pytest.raises(NotPolyhedralGraph):
        io.load_graph(g)
    g.write_text(json.dumps({"faces": [["a"]]}))
    with pytest.raises(ParseError):
        io.load_graph(g)


def test_certificate_and_witness_round_trip(tmp_path, oct_):
    h = np.ones(3) / np.sqrt(3)
    L = np.array([[2, -1, -1], [-1, 2, -1], [-1, -1, 2]]) / np.sqrt(6)
    W = IlluminationWitness(h, L)
    cert = verify_witness(oct_, W)
    path = tmp_path / "cert.json"
    io.write_json(io.certificate_dict(W, cert, seed=3), path)
    data = io.read_json(path)
    assert data["passed"] and data["seed"] == 3 and data["assignment"] == {"0": 0, "1": 1, "2": 2}
    W2 = io.load_witness(path)
    np.testing.assert_array_equal(W2.lights, W.lights)
    np.testing.assert_array_equal(W2.normal, W.normal)


def test_directions_round_trip(tmp_path):
    D = DirectionSet(np.array([[1.0, 0, 0], [0, 0.6, 0.8]]))
    path = tmp_path / "d.json"
    io.write_json(io.directions_dict(D), path)
    np.testing.assert_array_equal(io.load_directions(path).directions, D.directions)
