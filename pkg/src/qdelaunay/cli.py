"""Command-line front end.

Exit codes: 0 success, 2 invalid input (JSON error with witness on stderr),
3 failed internal assertion.
"""
from __future__ import annotations

import argparse
import json
import random
import sys
from fractions import Fraction
from pathlib import Path

from . import io
from .angles2d import angle_sequence, edge_angle, interior_angles
from .delaunay import delaunay, full_decomposition
from .edgeweights import validate_disk, validate_sphere, weights_from_delaunay
from .exact import identity
from .interp import lipschitz_graph, optimality_check
from .proximity import gabriel, mst, rng
from .qform import InputError, PointSet, QuadraticForm, is_generic_position, is_spacelike_position
from .render import RenderSpec, render_svg
from .transforms import GroupElement, MOEBIUS, limit_harness, moebius_delaunay_check, special_conformal
from .voronoi import inverse_voronoi, voronoi

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_ASSERT = 3

COMMANDS = (
    "del", "full", "voronoi", "angles", "weights", "validate-weights", "proximity",
    "interp", "limit-check", "moebius-check", "lift-graph", "render",
)

DEFAULT_T_VALUES = "0.1,0.01,0.001,0.0001,0.00001,0.000001"


def read_config(path) -> dict:
    """``key = value`` lines; ``#`` starts a comment."""
    conf = {}
    try:
        lines = Path(path).read_text().splitlines()
    except OSError as exc:
        raise InputError(f"cannot read config {path}: {exc}") from exc
    for n, line in enumerate(lines, 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise InputError(f"config line {n} is not key = value")
        key, value = (s.strip() for s in line.split("=", 1))
        conf[key] = value.strip('"')
    return conf


def random_points(Q: QuadraticForm, n: int, seed: int, scale: int = 20) -> PointSet:
    """Deterministic random spacelike generic set with small rational coordinates.

    Points are added one at a time, each candidate redrawn until the set stays
    spacelike and generic; indefinite forms rarely accept a whole random set at once.
    """
    rnd = random.Random(seed)
    for _ in range(100):
        pts = []
        for _ in range(20000):
            if len(pts) == n:
                return PointSet.from_coords(pts)
            cand = pts + [tuple(Fraction(rnd.randint(-scale * 10, scale * 10), 10) for _ in range(Q.dim))]
            try:
                if is_spacelike_position(Q, cand)[0] and is_generic_position(Q, cand)[0]:
                    pts = cand
            except InputError:
                continue
    raise InputError("could not draw a random spacelike generic set")


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qdelaunay", description="Delaunay decompositions for arbitrary quadratic forms.")
    sub = p.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        s = sub.add_parser(name)
        s.add_argument("--form", default="euclidean", help="preset (euclidean, minkowski, degenerate) or form JSON file")
        s.add_argument("--points", help="point set JSON file")
        s.add_argument("--random", type=int, metavar="N", help="draw N random points instead of --points")
        s.add_argument("--seed", type=int, default=0)
        s.add_argument("--out", help="write the JSON result here instead of stdout")
        s.add_argument("--svg", help="also write an SVG rendering")
        s.add_argument("--config", help="key = value file with defaults (tolerance, samples, viewport)")
        s.add_argument("--tolerance", type=float)
        if name == "voronoi":
            s.add_argument("--inverse", action="store_true")
        if name == "validate-weights":
            s.add_argument("--graph", required=True, help="weighted graph JSON")
        if name == "interp":
            s.add_argument("--p", default="2", choices=["1", "2", "inf"])
        if name == "limit-check":
            s.add_argument("--t-values", default=DEFAULT_T_VALUES, help="comma-separated decreasing list")
            s.add_argument("--split", type=int, default=1, help="dimension of the non-degenerate block")
        if name == "moebius-check":
            s.add_argument("--transform", required=True, help="JSON with 'matrix' or 'special_conformal' (+ 'steps')")
        if name == "lift-graph":
            s.add_argument("--values", required=True, help="comma-separated sample values")
            s.add_argument("--lipschitz", default="0.99", help="Lipschitz bound k < 1")
    return p


def _points(args, Q) -> PointSet:
    if args.points:
        return io.pointset_from_json(io.read_json(args.points))
    if args.random:
        return random_points(Q, args.random, args.seed)
    raise InputError("either --points or --random is required")


def _emit(args, doc) -> None:
    text = io.dumps(doc)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


def _render_spec(conf: dict) -> RenderSpec:
    kw = {}
    if "samples" in conf:
        kw["samples"] = int(conf["samples"])
    if "viewport" in conf:
        kw["viewport"] = tuple(io.parse_rat(v) for v in conf["viewport"].split(","))
    return RenderSpec(**kw)


def _svg(args, conf, complex_, **extra) -> None:
    if args.svg:
        Path(args.svg).write_text(render_svg(complex_, _render_spec(conf), **extra))


def _edge_report(Q, c) -> list:
    labels = c.points.labels
    return [{"edge": [labels[i], labels[j]], "angle": edge_angle(Q, c, (i, j))} for i, j in sorted(c.edges())]


def run(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        return _dispatch(args)
    except InputError as exc:
        sys.stderr.write(json.dumps({"error": str(exc), "type": type(exc).__name__, "witness": _plain(exc.witness)}) + "\n")
        return EXIT_INPUT
    except (ValueError, ArithmeticError) as exc:
        sys.stderr.write(json.dumps({"error": str(exc), "type": type(exc).__name__, "witness": None}) + "\n")
        return EXIT_INPUT
    except AssertionError as exc:
        sys.stderr.write(json.dumps({"error": str(exc), "type": type(exc).__name__}) + "\n")
        return EXIT_ASSERT


def _plain(w):
    if isinstance(w, (list, tuple)):
        return [_plain(v) for v in w]
    if isinstance(w, Fraction):
        return io.rat(w)
    return w


def _dispatch(args) -> int:
    conf = read_config(args.config) if args.config else {}
    tol = args.tolerance if args.tolerance is not None else float(conf.get("tolerance", 1e-9))
    cmd = args.command

    if cmd == "validate-weights":
        g = io.weighted_graph_from_json(io.read_json(args.graph))
        report = validate_sphere(g, tol) if g.spherical else validate_disk(g, tol)
        _emit(args, {"schema": io.SCHEMA, "ok": report.ok, "conditions": report.conditions})
        return EXIT_OK

    Q = io.load_form(args.form)

    if cmd == "lift-graph":
        X0 = _points(args, QuadraticForm.euclidean(max(Q.dim - 1, 1)))
        vals = [io.parse_rat(v) for v in args.values.split(",")]
        _emit(args, io.pointset_to_json(lipschitz_graph(X0, vals, io.parse_rat(args.lipschitz))))
        return EXIT_OK

    X = _points(args, Q)

    if cmd in ("del", "full", "render"):
        c = full_decomposition(Q, X) if cmd == "full" else delaunay(Q, X)
        if cmd == "render":
            extra = {}
            if not Q.is_degenerate:
                extra["voronoi_cells"] = voronoi(Q, X)
            svg = render_svg(c, _render_spec(conf), **extra)
            if args.svg:
                Path(args.svg).write_text(svg)
            else:
                sys.stdout.write(svg)
            return EXIT_OK
        _emit(args, io.complex_to_json(c))
        _svg(args, conf, c)
        return EXIT_OK

    if cmd == "voronoi":
        cells = inverse_voronoi(Q, X) if args.inverse else voronoi(Q, X)
        _emit(args, io.voronoi_to_json(Q, X, cells, args.inverse))
        _svg(args, conf, (full_decomposition if args.inverse else delaunay)(Q, X), voronoi_cells=cells)
        return EXIT_OK

    if cmd == "angles":
        c = delaunay(Q, X)
        labels = X.labels
        _emit(args, {
            "schema": io.SCHEMA,
            "triangles": [
                {"cell": [labels[i] for i in cell], "angles": list(interior_angles(Q, [X[i] for i in cell]))}
                for cell in c.cells
            ],
            "edges": _edge_report(Q, c),
            "sequence": list(angle_sequence(Q, c).values),
        })
        return EXIT_OK

    if cmd == "weights":
        _emit(args, io.weighted_graph_to_json(weights_from_delaunay(Q, X)))
        return EXIT_OK

    if cmd == "proximity":
        c = delaunay(Q, X)
        doc = {"schema": io.SCHEMA, "mst": io.proximity_graph_to_json(mst(Q, X)), "rng": io.proximity_graph_to_json(rng(Q, X))}
        if not Q.is_degenerate:
            doc["gabriel"] = io.proximity_graph_to_json(gabriel(Q, X))
        doc["delaunay_edges"] = [[X.labels[i], X.labels[j]] for i, j in sorted(c.edges())]
        _emit(args, doc)
        return EXIT_OK

    if cmd == "interp":
        r = optimality_check(Q, X, args.p)
        _emit(args, {
            "schema": io.SCHEMA, "p": args.p,
            "table": [{"cells": [[X.labels[i] for i in cell] for cell in t], "error": e} for t, e in r.table],
            "argmin": r.argmin, "delaunay_index": r.delaunay_index, "delaunay_minimal": r.delaunay_minimal,
        })
        if not r.delaunay_minimal:
            raise AssertionError("Delaunay triangulation does not minimize the interpolation error")
        return EXIT_OK

    if cmd == "limit-check":
        m = args.split
        ts = [io.parse_rat(t) for t in args.t_values.split(",")]
        r = limit_harness(Q, [p[:m] for p in X], [p[m:] for p in X], ts, m)
        _emit(args, {
            "schema": io.SCHEMA, "limit_cells": r.limit_cells, "threshold": io.rat(r.threshold),
            "per_t": [
                {"t": io.rat(row["t"]), "valid": row["valid"], "cells": row["cells"], "match": row["match"]}
                for row in r.per_t
            ],
        })
        return EXIT_OK

    if cmd == "moebius-check":
        spec = io.read_json(args.transform)
        path = None
        if isinstance(spec, dict) and "special_conformal" in spec:
            c = [io.parse_rat(v) for v in spec["special_conformal"]]
            steps = int(spec.get("steps", 10))
            path = [special_conformal(Q, [v * k / steps for v in c]) for k in range(steps + 1)]
            g = path[-1]
        elif isinstance(spec, dict) and "matrix" in spec:
            g = GroupElement(MOEBIUS, Q, [[io.parse_rat(v) for v in row] for row in spec["matrix"]])
            path = [GroupElement(MOEBIUS, Q, identity(Q.dim + 2)), g] if spec.get("with_path") else None
        else:
            raise InputError("transform needs 'special_conformal' or 'matrix'")
        r = moebius_delaunay_check(Q, X, g, path)
        _emit(args, {
            "schema": io.SCHEMA, "combinatorics_equal": r.combinatorics_equal, "condition_holds": r.condition_holds,
            "path_ends_at_g": r.path_ends_at_g, "samples": r.samples, "cells_before": r.cells_before, "cells_after": r.cells_after,
        })
        if r.condition_holds and not r.combinatorics_equal:
            raise AssertionError("avoidance condition held but Delaunay combinatorics changed")
        return EXIT_OK

    raise InputError(f"unknown command {cmd!r}")


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
