"""Static SVG of a planar decomposition with its Q-circles drawn as sampled conics.

Conic parametrizations, in eigen-coordinates ``u`` of the form around the center:

* definite:      u = (sqrt(D/l1) cos s, sqrt(D/l2) sin s)
* indefinite:    D > 0: u = (+-sqrt(D/l1) cosh s, sqrt(D/|l2|) sinh s)
                 D < 0: u = (sqrt(-D/l1) sinh s, +-sqrt(-D/|l2|) cosh s)
* degenerate:    x = u n + v m with v = (l u^2 - u phi.n - D') / phi.m

The parameter of every cell vertex is inserted into the samples, so vertices
lie on the drawn polyline up to floating rounding.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .delaunay import CellComplex
from .qball import QBall
from .qform import InputError, UnsupportedError

LAYERS = ("points", "cells", "circles", "voronoi", "graphs")


@dataclass(frozen=True)
class RenderSpec:
    viewport: tuple | None = None  # (xmin, ymin, xmax, ymax); derived from the points if None
    samples: int = 256  # per curve branch
    layers: tuple = LAYERS
    width: int = 800
    stroke: dict = field(default_factory=lambda: {
        "cells": "#222222", "circles": "#1f77b4", "voronoi": "#d62728", "graphs": "#2ca02c", "points": "#000000",
    })

    def __post_init__(self):
        if self.samples < 16:
            raise InputError("need at least 16 samples per curve branch")
        if self.viewport is not None:
            x0, y0, x1, y1 = self.viewport
            if not (x0 < x1 and y0 < y1):
                raise InputError("viewport must have positive width and height")


def default_viewport(points: Sequence[Sequence], margin: float = 0.25) -> tuple[float, float, float, float]:
    xs = [float(p[0]) for p in points]
    ys = [float(p[1]) for p in points]
    span = max(max(xs) - min(xs), max(ys) - min(ys), 1.0)
    pad = span * margin
    return (min(xs) - pad, min(ys) - pad, max(xs) + pad, max(ys) + pad)


def _grid(lo: float, hi: float, n: int, extra: Sequence[float]) -> list[float]:
    vals = [lo + (hi - lo) * k / (n - 1) for k in range(n)] + list(extra)
    return sorted(set(vals))


def conic_polylines(ball: QBall, viewport, samples: int = 256, through: Sequence[Sequence] = ()) -> list[list[tuple[float, float]]]:
    """Polylines tracing the sphere of ``ball``; ``through`` points get exact parameters."""
    Q = ball.form
    if Q.dim != 2:
        raise UnsupportedError("conics are drawn for d = 2")
    A = np.array([[float(v) for v in row] for row in Q.matrix])
    lam, R = np.linalg.eigh(A)
    x0, y0, x1, y1 = (float(v) for v in viewport)
    reach = math.hypot(x1 - x0, y1 - y0)
    phi = np.array([float(v) for v in ball.phi])
    through = [np.array([float(v) for v in p]) for p in through]
    if Q.is_degenerate:
        k = int(np.argmax(np.abs(lam)))
        n, m, l = R[:, k], R[:, 1 - k], lam[k]
        pn, pm = float(phi @ n), float(phi @ m)
        if pm == 0:
            raise UnsupportedError("degenerate conic without a parabola branch")
        corners = [np.array(c) for c in ((x0, y0), (x0, y1), (x1, y0), (x1, y1))]
        us = [float(c @ n) for c in corners]
        ts = [float(p @ n) for p in through]
        lo, hi = min(us + ts), max(us + ts)
        dp = float(ball.dprime)
        pts = []
        for u in _grid(lo, hi, samples, ts):
            v = (l * u * u - u * pn - dp) / pm
            x = u * n + v * m
            pts.append((float(x[0]), float(x[1])))
        return [pts]
    center = 0.5 * np.linalg.solve(A, phi)
    D = float(ball.dprime) + float(center @ A @ center)
    local = [R.T @ (p - center) for p in through]
    if lam[0] > 0 or lam[1] < 0:
        sign = 1.0 if lam[0] > 0 else -1.0
        D *= sign
        lam = lam * sign
        if D <= 0:
            return []
        a, b = math.sqrt(D / lam[0]), math.sqrt(D / lam[1])
        ss = [math.atan2(u[1] / b, u[0] / a) for u in local]
        grid = _grid(-math.pi, math.pi, samples, ss)
        pts = [center + R @ np.array([a * math.cos(s), b * math.sin(s)]) for s in grid]
        pts.append(pts[0])
        return [[(float(p[0]), float(p[1])) for p in pts]]
    # indefinite: eigh sorts ascending, so lam[0] < 0 < lam[1]
    neg, pos = 0, 1
    if D == 0:
        raise UnsupportedError("light-cone pair of lines is not a Q-circle of a generic set")
    if D > 0:
        a, b = math.sqrt(D / lam[pos]), math.sqrt(D / -lam[neg])

        def point(s, br):
            u = np.zeros(2)
            u[pos], u[neg] = br * a * math.cosh(s), b * math.sinh(s)
            return u

        def param(u):
            return (1.0 if u[pos] > 0 else -1.0), math.asinh(u[neg] / b)
        scale = min(a, b)
    else:
        a, b = math.sqrt(-D / lam[pos]), math.sqrt(-D / -lam[neg])

        def point(s, br):
            u = np.zeros(2)
            u[pos], u[neg] = a * math.sinh(s), br * b * math.cosh(s)
            return u

        def param(u):
            return (1.0 if u[neg] > 0 else -1.0), math.asinh(u[pos] / a)
        scale = min(a, b)
    dist = float(np.linalg.norm(center - np.array([(x0 + x1) / 2, (y0 + y1) / 2])))
    smax = math.asinh((reach + dist) / scale) + 0.5
    out = []
    for br in (1.0, -1.0):
        ss = [s for (bb, s) in map(param, local) if bb == br]
        grid = _grid(-smax, smax, samples, ss)
        pts = [center + R @ point(s, br) for s in grid]
        out.append([(float(p[0]), float(p[1])) for p in pts])
    return out


def _fmt(v: float) -> str:
    s = f"{v:.10f}".rstrip("0").rstrip(".")
    return "0" if s in ("-0", "") else s


def _polyline(pts, stroke: str, width: float, closed: bool = False) -> str:
    tag = "polygon" if closed else "polyline"
    coords = " ".join(f"{_fmt(x)},{_fmt(y)}" for x, y in pts)
    return f'<{tag} points="{coords}" fill="none" stroke="{stroke}" stroke-width="{_fmt(width)}"/>'


def render_svg(complex_: CellComplex, spec: RenderSpec | None = None, voronoi_cells=None, graphs: dict | None = None) -> str:
    spec = spec or RenderSpec()
    X = complex_.points
    if X.dim != 2:
        raise UnsupportedError("rendering needs d = 2")
    vp = spec.viewport or default_viewport(X.points)
    x0, y0, x1, y1 = (float(v) for v in vp)
    w, h = x1 - x0, y1 - y0
    lw = max(w, h) / 400
    height = int(round(spec.width * h / w))
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{spec.width}" height="{height}" '
        f'viewBox="{_fmt(x0)} {_fmt(-y1)} {_fmt(w)} {_fmt(h)}">',
        f'<desc>form={[[str(v) for v in r] for r in complex_.form.matrix]} kind={complex_.kind}</desc>',
        '<g transform="scale(1,-1)">',
    ]
    pts = X.points
    if "circles" in spec.layers:
        out.append('<g id="circles">')
        for cell, ball in zip(complex_.cells, complex_.balls):
            for line in conic_polylines(ball, vp, spec.samples, [pts[i] for i in cell]):
                out.append(_polyline(line, spec.stroke["circles"], lw))
        out.append("</g>")
    if "voronoi" in spec.layers and voronoi_cells:
        out.append('<g id="voronoi">')
        for c in voronoi_cells:
            if c.polygon:
                out.append(_polyline([(float(p[0]), float(p[1])) for p in c.polygon], spec.stroke["voronoi"], lw, True))
        out.append("</g>")
    if "graphs" in spec.layers and graphs:
        for name in sorted(graphs):
            out.append(f'<g id="graph-{name}">')
            for i, j in graphs[name].edges:
                out.append(_polyline([(float(pts[i][0]), float(pts[i][1])), (float(pts[j][0]), float(pts[j][1]))],
                                     spec.stroke["graphs"], lw))
            out.append("</g>")
    if "cells" in spec.layers:
        out.append('<g id="cells">')
        for cell in complex_.cells:
            out.append(_polyline([(float(pts[i][0]), float(pts[i][1])) for i in cell], spec.stroke["cells"], lw * 1.5, True))
        out.append("</g>")
    if "points" in spec.layers:
        out.append('<g id="points">')
        for p in pts:
            out.append(f'<circle cx="{_fmt(float(p[0]))}" cy="{_fmt(float(p[1]))}" r="{_fmt(lw * 3)}" fill="{spec.stroke["points"]}"/>')
        out.append("</g>")
    out.append("</g>")
    if "points" in spec.layers:
        out.append('<g id="labels" font-size="{}">'.format(_fmt(lw * 12)))
        for label, p in zip(X.labels, pts):
            out.append(f'<text x="{_fmt(float(p[0]) + lw * 4)}" y="{_fmt(-float(p[1]) - lw * 4)}">{_escape(label)}</text>')
        out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _escape(s: str) -> str:
    return s.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")
