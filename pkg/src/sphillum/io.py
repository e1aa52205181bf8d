"""File formats: spolytope.json, OFF, and the JSON artifacts emitted by the CLI.

Floats are written with 17 significant digits so every double survives a
text round trip bit for bit.
"""

import json
import math
from pathlib import Path

import numpy as np

from sphillum.errors import ParseError
from sphillum.sphere import DEFAULT_TOL

# canonical spolytope output snaps coordinates to this many decimals first
CANONICAL_DECIMALS = 13


def _fmt_float(x):
    if not math.isfinite(x):
        raise ValueError(f"non-finite value {x!r} cannot be serialized")
    s = f"{x:.17g}"
    if s == "-0":
        s = "0"
    if not any(ch in s for ch in ".en"):
        s += ".0"
    return s


def dumps(obj, indent=2, _level=0):
    """JSON text with 17-significant-digit floats; numpy values are accepted."""
    pad = " " * (indent * (_level + 1))
    end = " " * (indent * _level)
    if isinstance(obj, np.ndarray):
        obj = obj.tolist()
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if obj is None:
        return "null"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _fmt_float(float(obj))
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {dumps(v, indent, _level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if all(isinstance(v, (int, float, np.integer, np.floating)) and not isinstance(v, bool) for v in obj):
            return "[" + ", ".join(dumps(v) for v in obj) + "]"
        return "[\n" + ",\n".join(pad + dumps(v, indent, _level + 1) for v in obj) + "\n" + end + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def write_json(obj, path):
    Path(path).write_text(dumps(obj) + "\n")


def read_json(path):
    text = Path(path).read_text()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, path, exc.lineno) from None


def _tolerances(data, path):
    overrides = data.get("tolerances") or {}
    if not isinstance(overrides, dict):
        raise ParseError("'tolerances' must be an object", path)
    try:
        return DEFAULT_TOL.with_overrides(**overrides)
    except (TypeError, ValueError) as exc:
        raise ParseError(f"bad tolerances: {exc}", path) from None


def parse_spolytope(data, path=None):
    """Validate a spolytope document; returns ``(dim, unit vertices, deltas, tolerances)``."""
    if not isinstance(data, dict) or "dim" not in data or "vertices" not in data:
        raise ParseError("expected an object with 'dim' and 'vertices'", path)
    dim = data["dim"]
    if not isinstance(dim, int) or isinstance(dim, bool) or dim < 0:
        raise ParseError("'dim' must be a non-negative integer", path)
    rows = data["vertices"]
    if not isinstance(rows, list) or not rows:
        raise ParseError("'vertices' must be a non-empty list", path)
    for k, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != dim + 1:
            raise ParseError(f"vertex {k} must have {dim + 1} coordinates", path)
        if not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in row):
            raise ParseError(f"vertex {k} has non-numeric coordinates", path)
    V = np.array(rows, dtype=float)
    norms = np.linalg.norm(V, axis=1)
    if np.any(norms == 0) or not np.all(np.isfinite(V)):
        raise ParseError("vertices must be finite and nonzero", path)
    return dim, V / norms[:, None], (norms - 1).tolist(), _tolerances(data, path)


def load_spolytope(path):
    """Read spolytope.json; vertices are normalized and the deltas |v| - 1 reported."""
    from sphillum.polytope import SphericalPolytope

    dim, V, deltas, tol = parse_spolytope(read_json(path), path)
    return SphericalPolytope.from_vertices(dim, V, tol), deltas


def canonical_vertices(V):
    """Vertices snapped to a fixed decimal grid and sorted, so equal sets print identically."""
    snapped = np.round(np.asarray(V, dtype=float), CANONICAL_DECIMALS) + 0.0
    order = np.lexsort(snapped.T[::-1])
    return snapped[order]


def spolytope_dict(P, canonical=True, seed=None):
    V = canonical_vertices(P.vertices) if canonical else P.vertices
    out = {"dim": P.dim, "vertices": V}
    if P.tol != DEFAULT_TOL:
        out["tolerances"] = P.tol.to_dict()
    if seed is not None:
        out["seed"] = seed
    return out


def save_spolytope(P, path, canonical=True):
    write_json(spolytope_dict(P, canonical), path)


def _off_lines(text):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line.split()


def parse_off(text, path=None):
    """Parse plain OFF (3-D) or nOFF (any dimension); returns ``(vertices, faces)``."""
    lines = list(_off_lines(text))
    if not lines:
        raise ParseError("empty OFF file", path)
    lineno, head = lines[0]
    pos = 1
    if head[0] == "OFF":
        dim, rest = 3, head[1:]
    elif head[0] == "nOFF":
        rest = head[1:]
        if not rest:
            if pos >= len(lines):
                raise ParseError("missing dimension", path, lineno)
            lineno, rest = lines[pos]
            pos += 1
        dim, rest = int(rest[0]), rest[1:]
    else:
        raise ParseError(f"expected OFF or nOFF header, got {head[0]!r}", path, lineno)
    if not rest:
        if pos >= len(lines):
            raise ParseError("missing counts line", path, lineno)
        lineno, rest = lines[pos]
        pos += 1
    try:
        nv, nf = int(rest[0]), int(rest[1])
    except (IndexError, ValueError):
        raise ParseError("counts line must hold vertex and face counts", path, lineno) from None
    if len(lines) < pos + nv + nf:
        raise ParseError(f"expected {nv} vertices and {nf} faces", path, lines[-1][0])
    V = []
    for lineno, tok in lines[pos : pos + nv]:
        if len(tok) < dim:
            raise ParseError(f"vertex needs {dim} coordinates", path, lineno)
        try:
            V.append([float(t) for t in tok[:dim]])
        except ValueError:
            raise ParseError("non-numeric coordinate", path, lineno) from None
    faces = []
    for lineno, tok in lines[pos + nv : pos + nv + nf]:
        try:
            k = int(tok[0])
            face = [int(t) for t in tok[1 : k + 1]]
        except ValueError:
            raise ParseError("non-integer face entry", path, lineno) from None
        if len(face) != k or any(not 0 <= i < nv for i in face):
            raise ParseError("bad face record", path, lineno)
        faces.append(face)
    return np.array(V), faces


def read_off(path):
    return parse_off(Path(path).read_text(), path)


def format_off(vertices, faces, comment=None):
    V = np.asarray(vertices, dtype=float)
    dim = V.shape[1]
    out = []
    if dim == 3:
        out.append("OFF")
    else:
        out += ["nOFF", str(dim)]
    if comment:
        out += [f"# {line}" for line in comment.splitlines()]
    out.append(f"{len(V)} {len(faces)} 0")
    out += [" ".join(_fmt_float(float(x)) for x in row) for row in V]
    out += [" ".join(str(i) for i in [len(f), *f]) for f in faces]
    return "\n".join(out) + "\n"


def load_euclidean(path, tol=DEFAULT_TOL):
    from sphillum.bridge import EuclideanPolytope

    V, _ = read_off(path)
    return EuclideanPolytope.from_vertices(V, tol)


def euclidean_off(P, comment=None):
    faces = P.oriented_facets() if P.dim == 3 else [list(f) for f in P.facets]
    return format_off(P.vertices, faces, comment)


def save_euclidean(P, path, comment=None):
    Path(path).write_text(euclidean_off(P, comment))


def load_graph(path):
    """Polyhedral graph from {"faces": [...]} JSON or from the faces of an OFF file."""
    from sphillum.koebe.graph import PolyhedralGraph

    if str(path).lower().endswith(".off"):
        _, faces = read_off(path)
    else:
        data = read_json(path)
        if not isinstance(data, dict) or not isinstance(data.get("faces"), list):
            raise ParseError("expected an object with a 'faces' list", path)
        faces = data["faces"]
        if not all(isinstance(f, list) and all(isinstance(i, int) for i in f) for f in faces):
            raise ParseError("faces must be lists of integer vertex ids", path)
    return PolyhedralGraph.from_faces(faces)


def certificate_dict(W, cert, seed=None):
    out = {
        "greatsphere_normal": W.normal,
        "lights": W.lights,
        "assignment": {str(k): v for k, v in cert.assignment.items()},
        "margins": {str(k): v for k, v in cert.margins.items()},
        "min_margin": cert.min_margin,
        "fragile": cert.fragile,
        "passed": cert.passed,
        "tolerances": cert.tolerances,
    }
    if cert.face_margins:
        out["face_margins"] = {",".join(map(str, f)): m for f, m in cert.face_margins.items()}
    if seed is not None:
        out["seed"] = seed
    return out


def load_witness(path):
    """Greatsphere normal and lights from a certificate (or bare witness) JSON."""
    from sphillum.illumination import IlluminationWitness

    data = read_json(path)
    try:
        h = np.array(data["greatsphere_normal"], dtype=float)
        L = np.array(data["lights"], dtype=float)
    except (KeyError, TypeError, ValueError):
        raise ParseError("expected 'greatsphere_normal' and 'lights'", path) from None
    if h.ndim != 1 or L.ndim != 2 or L.shape[1] != h.shape[0]:
        raise ParseError("lights and normal have inconsistent shapes", path)
    return IlluminationWitness(h, L)


def euclidean_certificate_dict(D, cert, seed=None):
    out = {
        "directions": D.directions,
        "assignment": {str(k): v for k, v in cert.assignment.items()},
        "margins": {str(k): v for k, v in cert.margins.items()},
        "min_margin": cert.min_margin,
        "fragile": cert.fragile,
        "passed": cert.passed,
        "tolerances": cert.tolerances,
    }
    if seed is not None:
        out["seed"] = seed
    return out


def directions_dict(D, seed=None):
    out = {"directions": D.directions}
    if seed is not None:
        out["seed"] = seed
    return out


def load_directions(path):
    from sphillum.bridge import DirectionSet

    data = read_json(path)
    try:
        return DirectionSet(np.array(data["directions"], dtype=float))
    except (KeyError, TypeError, ValueError):
        raise ParseError("expected a 'directions' list", path) from None
