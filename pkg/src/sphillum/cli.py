"""Command-line front end.

Exit codes: 0 when every emitted certificate passes, 1 when a verification
fails, 2 for unreadable or invalid input.
"""

import argparse
import logging
import sys
from dataclasses import dataclass, field
from pathlib import Path

from sphillum import io
from sphillum.errors import (
    ConstructionFailed,
    GreatsphereMeetsBody,
    GridTooCoarse,
    IlluminationError,
    UncoveredVertex,
    VerificationFailed,
)
from sphillum.sphere import DEFAULT_TOL

log = logging.getLogger("sphillum")

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2
VERIFICATION_ERRORS = (UncoveredVertex, GreatsphereMeetsBody, VerificationFailed, ConstructionFailed, GridTooCoarse)


@dataclass
class RunConfig:
    command: str
    inputs: list
    tol: object = DEFAULT_TOL
    seed: int = 0
    out: Path = None
    strict: bool = False
    render: bool = False
    grid: int = None
    extra: dict = field(default_factory=dict)


class Emitter:
    """Collects named artifacts; writes them to --out or prints them as one JSON object."""

    def __init__(self, cfg):
        self.cfg = cfg
        self.items = {}

    def json(self, name, obj):
        self.items[name] = obj

    def text(self, name, text):
        self.items[name] = text

    def path(self, name):
        return self.cfg.out / name if self.cfg.out else None

    def flush(self):
        if self.cfg.out:
            self.cfg.out.mkdir(parents=True, exist_ok=True)
            for name, obj in self.items.items():
                target = self.cfg.out / name
                if isinstance(obj, str):
                    target.write_text(obj)
                else:
                    io.write_json(obj, target)
                print(target)
            return
        if len(self.items) == 1:
            (obj,) = self.items.values()
            sys.stdout.write(obj if isinstance(obj, str) else io.dumps(obj) + "\n")
            return
        sys.stdout.write(io.dumps({k: v for k, v in self.items.items()}) + "\n")


def _tol(pairs):
    overrides = {}
    for pair in pairs or []:
        key, sep, value = pair.partition("=")
        if not sep:
            raise argparse.ArgumentTypeError(f"--tol expects KEY=VALUE, got {pair!r}")
        overrides[key.strip()] = float(value)
    return DEFAULT_TOL.with_overrides(**overrides)


def _load_any(path, tol):
    """A SphericalPolytope from spolytope.json or a EuclideanPolytope from OFF."""
    if str(path).lower().endswith(".off"):
        return io.load_euclidean(path, tol)
    from sphillum.polytope import SphericalPolytope

    dim, V, deltas, file_tol = io.parse_spolytope(io.read_json(path), path)
    if max(abs(d) for d in deltas) > 0:
        log.info("normalized input vertices (max |delta| = %.3e)", max(abs(d) for d in deltas))
    return SphericalPolytope.from_vertices(dim, V, tol if tol != DEFAULT_TOL else file_tol)


def _load_spherical(path, tol):
    from sphillum.polytope import SphericalPolytope

    P = _load_any(path, tol)
    if not isinstance(P, SphericalPolytope):
        raise IlluminationError(f"{path}: expected a spolytope.json input")
    return P


def cmd_faces(cfg, out):
    P = _load_any(cfg.inputs[0], cfg.tol)
    L = P.lattice
    out.json(
        "faces.json",
        {
            "dim": P.dim,
            "f_vector": list(L.f_vector),
            "faces": {str(k): [list(f) for f in L.faces(k)] for k in range(P.dim)},
            "seed": cfg.seed,
        },
    )
    return EXIT_OK


def cmd_polar(cfg, out):
    P = _load_spherical(cfg.inputs[0], cfg.tol)
    out.json("polar.json", io.spolytope_dict(P.polar, seed=cfg.seed))
    return EXIT_OK


def cmd_witness(cfg, out):
    from sphillum.illumination import exhaustive_upper_bound, verify_witness
    from sphillum.witness import construct_witness

    P = _load_spherical(cfg.inputs[0], cfg.tol)
    W, trace = construct_witness(P, seed=cfg.seed, tol=cfg.tol)
    cert = verify_witness(P, W, cfg.tol, strict=cfg.strict)
    doc = io.certificate_dict(W, cert, cfg.seed)
    if cfg.grid:
        k, _ = exhaustive_upper_bound(P, cfg.grid, cfg.tol, cfg.seed)
        doc["grid_upper_bound"] = {"grid": cfg.grid, "size": k}
    out.json("certificate.json", doc)
    out.json("trace.json", trace.to_dict())
    if cfg.render and out.path("witness.svg") and P.dim == 2:
        from sphillum.render import render_sphere

        out.cfg.out.mkdir(parents=True, exist_ok=True)
        render_sphere(P, out.path("witness.svg"), W)
    return EXIT_OK if cert.passed else EXIT_FAIL


def cmd_verify(cfg, out):
    from sphillum.illumination import verify_witness

    P = _load_spherical(cfg.inputs[0], cfg.tol)
    W = io.load_witness(cfg.inputs[1])
    cert = verify_witness(P, W, cfg.tol, strict=cfg.strict)
    out.json("certificate.json", io.certificate_dict(W, cert, cfg.seed))
    return EXIT_OK if cert.passed else EXIT_FAIL


def cmd_bridge(cfg, out):
    from sphillum.bridge import combinatorial_illuminator

    P = io.load_euclidean(cfg.inputs[0], cfg.tol)
    res = combinatorial_illuminator(P, seed=cfg.seed, strict=cfg.strict, tol=cfg.tol)
    out.text("bridge.off", io.euclidean_off(res.polytope, f"combinatorially equivalent to {cfg.inputs[0]}"))
    out.json("directions.json", io.directions_dict(res.directions, cfg.seed))
    doc = {
        "euclidean": io.euclidean_certificate_dict(res.directions, res.certificate, cfg.seed),
        "lattice_isomorphic": True,
        "vertex_map": {str(k): v for k, v in sorted(res.vertex_map.items())},
    }
    if res.witness is not None:
        doc["spherical"] = io.certificate_dict(res.witness, res.spherical_certificate, cfg.seed)
        doc["trace"] = res.trace.to_dict()
    out.json("certificate.json", doc)
    if cfg.render and out.path("bridge.svg") and res.polytope.dim == 3:
        from sphillum.render import render_mesh

        cfg.out.mkdir(parents=True, exist_ok=True)
        render_mesh(res.polytope, out.path("bridge.svg"), res.directions)
    return EXIT_OK if res.certificate.passed else EXIT_FAIL


def cmd_koebe(cfg, out):
    from sphillum.koebe import koebe_pipeline

    src = cfg.inputs[0]
    source = io.load_euclidean(src, cfg.tol) if str(src).lower().endswith(".off") else io.load_graph(src)
    res = koebe_pipeline(source, seed=cfg.seed, tol=cfg.tol)
    out.text("koebe.off", io.euclidean_off(res.polytope, "Koebe polyhedron: every edge touches the unit sphere"))
    circles = res.normalized.circles_dict()
    circles["seed"] = cfg.seed
    out.json("circles.json", circles)
    out.json("directions.json", io.directions_dict(res.directions, cfg.seed))
    out.json("certificate.json", res.certificates())
    if cfg.render and out.path("koebe.svg"):
        from sphillum.koebe.packing import layout
        from sphillum.render import render_mesh, render_packing

        cfg.out.mkdir(parents=True, exist_ok=True)
        render_mesh(res.polytope, out.path("koebe.svg"), res.directions)
        render_packing(layout(res.realization.graph), out.path("packing.svg"))
    return EXIT_OK if res.certificate.passed else EXIT_FAIL


def cmd_render(cfg, out):
    from sphillum import render

    if cfg.out is None:
        raise IlluminationError("render needs --out DIR")
    cfg.out.mkdir(parents=True, exist_ok=True)
    src = str(cfg.inputs[0])
    written = []
    if src.lower().endswith(".off"):
        P = io.load_euclidean(src, cfg.tol)
        if P.dim == 3:
            render.render_mesh(P, cfg.out / "mesh.svg")
            written.append("mesh.svg")
        elif P.dim == 2:
            from sphillum.bridge import combinatorial_illuminator

            order = P.ccw_polygon()
            res = combinatorial_illuminator(P, tol=cfg.tol)
            render.render_fan(P.vertices[order], res.directions.directions, cfg.out / "fan.svg")
            written.append("fan.svg")
        out.text("mesh.off", io.euclidean_off(P))
    else:
        data = io.read_json(src)
        if isinstance(data, dict) and "faces" in data:
            from sphillum.koebe.packing import layout

            render.render_packing(layout(io.load_graph(src)), cfg.out / "packing.svg")
            written.append("packing.svg")
        else:
            P = _load_spherical(src, cfg.tol)
            W = None
            if cfg.extra.get("witness"):
                W = io.load_witness(cfg.extra["witness"])
            elif P.dim == 2:
                from sphillum.witness import construct_witness

                W, _ = construct_witness(P, seed=cfg.seed, tol=cfg.tol)
            render.render_sphere(P, cfg.out / "sphere.svg", W)
            written.append("sphere.svg")
    for name in written:
        print(cfg.out / name)
    return EXIT_OK


COMMANDS = {
    "faces": (cmd_faces, "face lattice and f-vector of a spolytope.json or OFF input", 1),
    "polar": (cmd_polar, "polar body as canonical spolytope.json", 1),
    "witness": (cmd_witness, "construct and certify a (d+1)-light witness", 1),
    "verify": (cmd_verify, "re-verify a witness/certificate JSON against a polytope", 2),
    "bridge": (cmd_bridge, "combinatorially equivalent polytope with d+1 directions (OFF in)", 1),
    "koebe": (cmd_koebe, "Koebe polyhedron with 4 directions (graph JSON or OFF in)", 1),
    "render": (cmd_render, "SVG diagrams of a polytope, graph packing or witness", 1),
}


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", action="append", metavar="KEY=VAL", help="tolerance override (unit, pred, dedup)")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--grid", type=int, default=None, help="grid size for the exhaustive cover bound")
    common.add_argument("--out", type=Path, default=None, metavar="DIR")
    common.add_argument("--strict", action="store_true", help="verify every proper face, not just vertices")
    common.add_argument("--render", action="store_true", help="also write SVG renders to --out")
    common.add_argument("-v", "--verbose", action="count", default=0)

    parser = argparse.ArgumentParser(prog="sphillum", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, help_text, n_in) in COMMANDS.items():
        p = sub.add_parser(name, parents=[common], help=help_text)
        p.add_argument("input")
        if n_in == 2:
            p.add_argument("witness")
        if name == "render":
            p.add_argument("--witness", dest="witness_file", default=None)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.WARNING - 10 * args.verbose, format="%(levelname)s %(name)s: %(message)s")
    try:
        tol = _tol(args.tol)
    except (argparse.ArgumentTypeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    inputs = [args.input] + ([args.witness] if getattr(args, "witness", None) else [])
    cfg = RunConfig(
        args.command, inputs, tol, args.seed, args.out, args.strict, args.render, args.grid,
        {"witness": getattr(args, "witness_file", None)},
    )
    for path in inputs:
        if not Path(path).is_file():
            print(f"error: no such file: {path}", file=sys.stderr)
            return EXIT_INPUT
    handler = COMMANDS[args.command][0]
    out = Emitter(cfg)
    try:
        code = handler(cfg, out)
    except VERIFICATION_ERRORS as exc:
        print(f"verification failed: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except IlluminationError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    out.flush()
    return code


if __name__ == "__main__":
    sys.exit(main())
