"""JSON encoding of forms, point sets, balls, complexes, Voronoi cells and graphs.

Rationals are written as exact decimal strings when they terminate, otherwise
as ``"num/den"``.  Floats appear only in angle and error reports.  Every
top-level document carries ``"schema": "qdelaunay/1"``.
"""
from __future__ import annotations

import json
from decimal import Decimal
from fractions import Fraction
from pathlib import Path

from .delaunay import CellComplex, make_complex
from .edgeweights import WeightedPlanarGraph
from .exact import format_rational, to_fraction
from .proximity import Graph
from .qball import QBall
from .qform import InputError, PointSet, QuadraticForm
from .voronoi import HalfPlane, VoronoiCell

SCHEMA = "qdelaunay/1"

PRESETS = {
    "euclidean": QuadraticForm.euclidean,
    "minkowski": QuadraticForm.minkowski,
    "degenerate": QuadraticForm.degenerate,
}


def rat(x) -> str:
    return format_rational(to_fraction(x))


def parse_rat(x) -> Fraction:
    if isinstance(x, bool):
        raise InputError(f"not a number: {x!r}")
    try:
        return to_fraction(x)
    except (ValueError, ZeroDivisionError, TypeError) as exc:
        raise InputError(f"not a rational number: {x!r}") from exc


def _rats(xs) -> list[str]:
    return [rat(v) for v in xs]


def _parse_rats(xs) -> tuple[Fraction, ...]:
    if not isinstance(xs, (list, tuple)):
        raise InputError(f"expected a list of numbers, got {xs!r}")
    return tuple(parse_rat(v) for v in xs)


def dumps(doc) -> str:
    return json.dumps(doc, indent=2, ensure_ascii=True) + "\n"


def loads(text: str):
    """Parse JSON with floats kept as exact decimals."""
    try:
        return json.loads(text, parse_float=Decimal)
    except json.JSONDecodeError as exc:
        raise InputError(f"malformed JSON: {exc}") from exc


def read_json(path) -> object:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    return loads(text)


def _need(doc, key):
    if not isinstance(doc, dict) or key not in doc:
        raise InputError(f"missing field {key!r}")
    return doc[key]


# --- forms and points -------------------------------------------------------

def form_to_json(Q: QuadraticForm) -> dict:
    return {"dim": Q.dim, "matrix": [_rats(row) for row in Q.matrix]}


def form_from_json(doc) -> QuadraticForm:
    if isinstance(doc, str):
        if doc in PRESETS:
            return PRESETS[doc]()
        raise InputError(f"unknown form preset {doc!r}")
    if isinstance(doc, dict) and "diag" in doc:
        return QuadraticForm.diag(_parse_rats(doc["diag"]))
    rows = _need(doc, "matrix")
    Q = QuadraticForm(tuple(_parse_rats(r) for r in rows))
    if "dim" in doc and doc["dim"] != Q.dim:
        raise InputError(f"declared dim {doc['dim']} does not match the matrix")
    return Q


def load_form(spec: str) -> QuadraticForm:
    """A preset name or a path to a form JSON file."""
    if spec in PRESETS:
        return PRESETS[spec]()
    return form_from_json(read_json(spec))


def pointset_to_json(X: PointSet) -> dict:
    return {
        "schema": SCHEMA,
        "dim": X.dim,
        "points": [{"label": l, "coords": _rats(p)} for l, p in zip(X.labels, X.points)],
    }


def pointset_from_json(doc) -> PointSet:
    pts = _need(doc, "points")
    if not isinstance(pts, list):
        raise InputError("'points' must be a list")
    coords, labels = [], []
    for k, p in enumerate(pts):
        if isinstance(p, dict):
            coords.append(_parse_rats(_need(p, "coords")))
            labels.append(str(p.get("label", f"p{k}")))
        else:
            coords.append(_parse_rats(p))
            labels.append(f"p{k}")
    X = PointSet(tuple(coords), tuple(labels))
    if "dim" in doc and len(X) and doc["dim"] != X.dim:
        raise InputError(f"declared dim {doc['dim']} does not match the coordinates")
    return X


# --- balls and complexes ----------------------------------------------------

def ball_to_json(ball: QBall) -> dict:
    return {"phi": _rats(ball.phi), "dprime": rat(ball.dprime), "form": form_to_json(ball.form)}


def ball_from_json(doc) -> QBall:
    return QBall(form_from_json(_need(doc, "form")), _parse_rats(_need(doc, "phi")), parse_rat(_need(doc, "dprime")))


def complex_to_json(c: CellComplex) -> dict:
    return {
        "schema": SCHEMA,
        "kind": c.kind,
        "form": form_to_json(c.form),
        "points": pointset_to_json(c.points)["points"],
        "cells": [list(cell) for cell in c.cells],
        "balls": [{"phi": _rats(b.phi), "dprime": rat(b.dprime)} for b in c.balls],
    }


def complex_from_json(doc) -> CellComplex:
    Q = form_from_json(_need(doc, "form"))
    X = pointset_from_json({"points": _need(doc, "points")})
    cells = [tuple(int(i) for i in c) for c in _need(doc, "cells")]
    c = make_complex(Q, X, cells, doc.get("kind", "delaunay"))
    if "balls" in doc:
        stored = tuple(QBall(Q, _parse_rats(b["phi"]), parse_rat(b["dprime"])) for b in doc["balls"])
        if stored != c.balls:
            raise InputError("stored balls do not match the cells")
    return c


# --- Voronoi ----------------------------------------------------------------

def voronoi_to_json(Q: QuadraticForm, X: PointSet, cells, inverse: bool = False) -> dict:
    return {
        "schema": SCHEMA,
        "kind": "inverse_voronoi" if inverse else "voronoi",
        "form": form_to_json(Q),
        "points": pointset_to_json(X)["points"],
        "cells": [
            {
                "site": c.site,
                "halfplanes": [{"normal": _rats(h.normal), "offset": rat(h.offset), "other": h.other} for h in c.halfplanes],
                "vertices": [_rats(v) for v in c.vertices],
                "rays": [{"origin": _rats(o), "direction": _rats(d)} for o, d in c.rays],
                "polygon": [_rats(v) for v in c.polygon],
                "bounded": c.bounded,
            }
            for c in cells
        ],
    }


def voronoi_from_json(doc) -> list[VoronoiCell]:
    out = []
    for c in _need(doc, "cells"):
        out.append(VoronoiCell(
            c["site"],
            tuple(HalfPlane(_parse_rats(h["normal"]), parse_rat(h["offset"]), int(h.get("other", -1))) for h in c["halfplanes"]),
            tuple(_parse_rats(v) for v in c["vertices"]),
            tuple((_parse_rats(r["origin"]), _parse_rats(r["direction"])) for r in c["rays"]),
            tuple(_parse_rats(v) for v in c["polygon"]),
            bool(c["bounded"]),
        ))
    return out


# --- graphs -----------------------------------------------------------------

def weighted_graph_to_json(g: WeightedPlanarGraph) -> dict:
    ext = g.exterior
    return {
        "schema": SCHEMA,
        "spherical": g.spherical,
        "vertices": [{"label": l, "exterior": ext[i]} for i, l in enumerate(g.labels)],
        "edges": [{"u": g.labels[a], "v": g.labels[b], "weight": w} for (a, b), w in sorted(g.weights.items())],
        "faces": [[g.labels[v] for v in f] for f in g.faces],
        "exterior_cycle": [g.labels[v] for v in g.exterior_cycle],
    }


def weighted_graph_from_json(doc) -> WeightedPlanarGraph:
    verts = _need(doc, "vertices")
    labels = [str(v["label"]) if isinstance(v, dict) else str(v) for v in verts]
    index = {l: i for i, l in enumerate(labels)}
    if len(index) != len(labels):
        raise InputError("duplicate vertex labels")

    def ix(l):
        if str(l) not in index:
            raise InputError(f"unknown vertex {l!r}")
        return index[str(l)]

    weights = {}
    for e in _need(doc, "edges"):
        weights[tuple(sorted((ix(e["u"]), ix(e["v"]))))] = float(e["weight"])
    faces = [tuple(ix(v) for v in f) for f in _need(doc, "faces")]
    spherical = bool(doc.get("spherical", False))
    cycle = tuple(ix(v) for v in doc.get("exterior_cycle", []))
    return WeightedPlanarGraph(tuple(labels), weights, tuple(faces), cycle, spherical)


def proximity_graph_to_json(g: Graph) -> dict:
    return {"edges": g.labeled_edges(), "sq_lengths": _rats(g.sq_lengths)}


def proximity_graph_from_json(doc, labels) -> Graph:
    index = {l: i for i, l in enumerate(labels)}
    edges = tuple(tuple(sorted((index[a], index[b]))) for a, b in _need(doc, "edges"))
    return Graph(tuple(labels), edges, _parse_rats(_need(doc, "sq_lengths")))
