import json

import pytest

from sphillum import fixtures, io
from sphillum.bridge import EuclideanPolytope
from sphillum.cli import main


@pytest.fixture
def files(tmp_path):
    paths = {}
    for name, P in (("oct", fixtures.octant()), ("sim3", fixtures.simplex(3))):
        paths[name] = tmp_path / f"{name}.json"
        io.save_spolytope(P, paths[name])
    paths["cube"] = tmp_path / "cube.off"
    io.save_euclidean(EuclideanPolytope.from_vertices(fixtures.cube_vertices()), paths["cube"])
    paths["square"] = tmp_path / "square.off"
    paths["square"].write_text(io.format_off(fixtures.square_vertices(), [[0, 1, 2, 3]]))
    paths["cubegraph"] = tmp_path / "cubegraph.json"
    paths["cubegraph"].write_text(json.dumps({"faces": fixtures.cube_graph_faces()}))
    paths["tetgraph"] = tmp_path / "tetgraph.json"
    paths["tetgraph"].write_text(json.dumps({"faces": fixtures.tetrahedron_graph_faces()}))
    paths["bad"] = tmp_path / "bad.json"
    paths["bad"].write_text('{"dim": 2,\n "vertices": [[1, 0, 0],\n')
    paths["hemi"] = tmp_path / "hemi.json"
    paths["hemi"].write_text(json.dumps({"dim": 2, "vertices": [[1, 0, 0], [-1, 0, 0], [0, 1, 0]]}))
    paths["segment"] = tmp_path / "segment.json"
    paths["segment"].write_text(json.dumps({"dim": 1, "vertices": [[1, 0], [0, 1]]}))
    paths["dir"] = tmp_path
    return paths


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_faces(capsys, files):
    code, out, _ = run(capsys, "faces", files["oct"])
    assert code == 0 and json.loads(out)["f_vector"] == [3, 3]
    code, out, _ = run(capsys, "faces", files["sim3"])
    assert json.loads(out)["f_vector"] == [4, 6, 4]
    code, _, err = run(capsys, "faces", files["bad"])
    assert code == 2 and f"{files['bad']}:3:" in err


def test_polar(capsys, files, tmp_path):
    code, out, _ = run(capsys, "polar", files["oct"])
    data = json.loads(out)
    assert code == 0
    assert data["vertices"] == [[-1.0, 0.0, 0.0], [0.0, -1.0, 0.0], [0.0, 0.0, -1.0]]
    once = tmp_path / "once"
    twice = tmp_path / "twice"
    run(capsys, "polar", files["sim3"], "--out", once)
    run(capsys, "polar", once / "polar.json", "--out", twice)
    run(capsys, "polar", twice / "polar.json", "--out", tmp_path / "thrice")
    assert (once / "polar.json").read_bytes() == (tmp_path / "thrice" / "polar.json").read_bytes()
    code, _, err = run(capsys, "polar", files["hemi"])
    assert code == 2 and "NotInOpenHemisphere" in err


def test_witness_and_verify(capsys, files, tmp_path):
    out_dir = tmp_path / "w"
    code, out, _ = run(capsys, "witness", files["sim3"], "--out", out_dir, "--grid", 4000)
    assert code == 0
    cert = json.loads((out_dir / "certificate.json").read_text())
    assert len(cert["lights"]) == 4 and cert["passed"] and cert["grid_upper_bound"]["size"] == 4
    trace = json.loads((out_dir / "trace.json").read_text())
    assert trace["seed"] == 0 and trace["levels"][0]["dim"] == 3
    code, out, _ = run(capsys, "verify", files["sim3"], out_dir / "certificate.json")
    assert code == 0 and json.loads(out)["passed"]
    # tampered light: flip one sign
    cert["lights"][0] = [-x for x in cert["lights"][0]]
    bad = tmp_path / "tampered.json"
    bad.write_text(json.dumps(cert))
    code, _, err = run(capsys, "verify", files["sim3"], bad)
    assert code == 1 and "UncoveredVertex" in err
    # light moved off the greatsphere
    cert["lights"][0] = [0.5, 0.5, 0.5, 0.5]
    bad.write_text(json.dumps(cert))
    code, _, err = run(capsys, "verify", files["sim3"], bad)
    assert code == 2 and "LightOffGreatsphere" in err


def test_witness_oct_and_unsupported(capsys, files):
    code, out, _ = run(capsys, "witness", files["oct"])
    assert code == 0 and len(json.loads(out)["certificate.json"]["lights"]) == 3
    code, _, err = run(capsys, "witness", files["segment"])
    assert code == 2 and "UnsupportedDimension" in err


def test_bridge(capsys, files, tmp_path):
    code, _, _ = run(capsys, "bridge", files["cube"], "--out", tmp_path / "b", "--strict")
    assert code == 0
    P = io.load_euclidean(tmp_path / "b" / "bridge.off")
    assert P.lattice.f_vector == (8, 12, 6)
    assert len(io.load_directions(tmp_path / "b" / "directions.json")) == 4
    code, _, err = run(capsys, "bridge", files["square"])
    assert code == 2 and "ParallelogramError" in err


def test_koebe(capsys, files, tmp_path):
    for name in ("cubegraph", "tetgraph"):
        code, _, _ = run(capsys, "koebe", files[name], "--out", tmp_path / name)
        assert code == 0
        cert = json.loads((tmp_path / name / "certificate.json").read_text())
        assert cert["illumination"]["passed"]
        assert cert["midscribe_residuals"]["edge_tangency"] < 1e-6
    bad = tmp_path / "notpoly.json"
    bad.write_text(json.dumps({"faces": [[0, 1, 2], [0, 2, 1]]}))
    code, _, err = run(capsys, "koebe", bad)
    assert code == 2 and "NotPolyhedralGraph" in err


def test_render(capsys, files, tmp_path):
    out_dir = tmp_path / "r"
    code, _, _ = run(capsys, "render", files["oct"], "--out", out_dir)
    assert code == 0
    svg = (out_dir / "sphere.svg").read_text()
    assert svg.count("<svg") == 1 and "lights" in svg
    code, _, _ = run(capsys, "render", files["cubegraph"], "--out", out_dir)
    assert code == 0 and (out_dir / "packing.svg").stat().st_size > 0
    code, _, _ = run(capsys, "render", files["cube"], "--out", out_dir)
    assert code == 0 and (out_dir / "mesh.svg").exists() and (out_dir / "mesh.off").exists()
    code, _, err = run(capsys, "render", tmp_path / "missing.json", "--out", out_dir)
    assert code == 2 and "no such file" in err


def test_render_is_reproducible(capsys, files, tmp_path):
    run(capsys, "render", files["oct"], "--out", tmp_path / "a")
    run(capsys, "render", files["oct"], "--out", tmp_path / "b")
    assert (tmp_path / "a" / "sphere.svg").read_bytes() == (tmp_path / "b" / "sphere.svg").read_bytes()


def test_bad_tolerance_flag(capsys, files):
    code, _, err = run(capsys, "faces", files["oct"], "--tol", "pred")
    assert code == 2
    code, _, err = run(capsys, "faces", files["oct"], "--tol", "pred=0.5")
    assert code == 2
