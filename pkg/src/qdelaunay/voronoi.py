"""Q-Voronoi and inverse Q-Voronoi cells in the plane (non-degenerate forms).

A cell is the intersection of exact half-planes ``n . z <= c``.  Vertices are
found by clipping a bounding box that strictly contains every pairwise
intersection of bisector lines, so box corners never masquerade as Voronoi
vertices; cells touching the box are unbounded and carry rays.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .exact import dot, matvec, sub
from .qform import InputError, PointSet, PositionError, QuadraticForm, UnsupportedError, evaluate, require_position


@dataclass(frozen=True)
class HalfPlane:
    """``{z : normal . z <= offset}``"""

    normal: tuple[Fraction, Fraction]
    offset: Fraction
    other: int = -1  # index of the competing site

    def value(self, z) -> Fraction:
        return dot(self.normal, z) - self.offset


@dataclass(frozen=True)
class VoronoiCell:
    site: str
    halfplanes: tuple[HalfPlane, ...]
    vertices: tuple[tuple[Fraction, Fraction], ...]
    rays: tuple[tuple[tuple[Fraction, Fraction], tuple[Fraction, Fraction]], ...]
    polygon: tuple[tuple[Fraction, Fraction], ...]  # clipped to the bounding box
    bounded: bool


def bisector(Q: QuadraticForm, x, y, inverse: bool = False) -> HalfPlane:
    """Half-plane ``{z : Q(x - z) <= Q(y - z)}`` (``>=`` when ``inverse``).

    Expanded, this is ``2 <z, y - x>_Q <= Q(y) - Q(x)``.
    """
    if Q.is_degenerate:
        raise UnsupportedError("Voronoi bisectors need a non-degenerate form")
    if evaluate(Q, sub(x, y)) <= 0:
        raise PositionError("bisector needs a spacelike pair", witness=[list(map(str, x)), list(map(str, y))])
    normal = tuple(2 * v for v in matvec(Q.matrix, sub(y, x)))
    offset = evaluate(Q, y) - evaluate(Q, x)
    if inverse:
        normal = tuple(-v for v in normal)
        offset = -offset
    return HalfPlane(normal, offset)


def _line_intersection(h1: HalfPlane, h2: HalfPlane):
    (a, b), (c, d) = h1.normal, h2.normal
    det = a * d - b * c
    if det == 0:
        return None
    return ((h1.offset * d - b * h2.offset) / det, (a * h2.offset - h1.offset * c) / det)


def _clip(polygon: list, h: HalfPlane) -> list:
    out = []
    n = len(polygon)
    for k in range(n):
        p, q = polygon[k], polygon[(k + 1) % n]
        vp, vq = h.value(p), h.value(q)
        if vp <= 0:
            out.append(p)
        if (vp < 0 < vq) or (vq < 0 < vp):
            t = vp / (vp - vq)
            out.append((p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])))
    # drop consecutive duplicates produced by vertices lying on the line
    dedup = []
    for p in out:
        if not dedup or dedup[-1] != p:
            dedup.append(p)
    if len(dedup) > 1 and dedup[0] == dedup[-1]:
        dedup.pop()
    return dedup


def bounding_box(Q: QuadraticForm, X: PointSet, margin: Fraction = Fraction(1)):
    """Box strictly containing all sites and all bisector-line intersections."""
    pts = list(X.points)
    lines = [bisector(Q, X[i], X[j]) for i, j in itertools.combinations(range(len(X)), 2)]
    for h1, h2 in itertools.combinations(lines, 2):
        p = _line_intersection(h1, h2)
        if p is not None:
            pts.append(p)
    xs = [p[0] for p in pts]
    ys = [p[1] for p in pts]
    span = max(max(xs) - min(xs), max(ys) - min(ys), Fraction(1))
    pad = span * margin
    return (min(xs) - pad, min(ys) - pad, max(xs) + pad, max(ys) + pad)


def _cells(Q: QuadraticForm, X: PointSet, inverse: bool, box=None) -> list[VoronoiCell]:
    if Q.is_degenerate:
        raise UnsupportedError("Voronoi decompositions need a non-degenerate form")
    if X.dim != 2:
        raise InputError("Voronoi cells are computed for d = 2 only")
    require_position(Q, X, generic=True)
    if box is None:
        box = bounding_box(Q, X)
    x0, y0, x1, y1 = box
    cells = []
    for i, site in enumerate(X.points):
        hps = []
        for j, other in enumerate(X.points):
            if j != i:
                h = bisector(Q, site, other, inverse)
                hps.append(HalfPlane(h.normal, h.offset, j))
        poly = [(x0, y0), (x1, y0), (x1, y1), (x0, y1)]
        for h in hps:
            poly = _clip(poly, h)
            if not poly:
                break
        on_box = [p[0] in (x0, x1) or p[1] in (y0, y1) for p in poly]
        vertices = tuple(p for p, b in zip(poly, on_box) if not b)
        rays = []
        n = len(poly)
        for k in range(n):
            # an edge leaving the box through a real vertex defines a ray
            p, q = poly[k], poly[(k + 1) % n]
            if not on_box[k] and on_box[(k + 1) % n]:
                rays.append((p, sub(q, p)))
            if on_box[k] and not on_box[(k + 1) % n]:
                rays.append((q, sub(p, q)))
        cells.append(
            VoronoiCell(
                X.labels[i], tuple(hps), vertices, tuple(rays), tuple(poly), bool(poly) and not any(on_box)
            )
        )
    return cells


def voronoi(Q: QuadraticForm, X: PointSet, box=None) -> list[VoronoiCell]:
    """One cell per site: points Q-closer (in Q-value) to it than to every other site."""
    return _cells(Q, X, inverse=False, box=box)


def inverse_voronoi(Q: QuadraticForm, X: PointSet, box=None) -> list[VoronoiCell]:
    """Cells of points Q-farthest from each site; some may be empty."""
    return _cells(Q, X, inverse=True, box=box)


def vertex_set(cells: Sequence[VoronoiCell]) -> set[tuple[Fraction, Fraction]]:
    return {v for c in cells for v in c.vertices}
