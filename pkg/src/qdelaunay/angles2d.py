"""Angles in the Euclidean, Minkowski and degenerate planes.

The three supported forms are diag(1,1), diag(1,-1) and diag(1,0).  Vectors
stay exact; only the final transcendental step happens in floating point, and
it is arranged as ``atan2`` / ``asinh`` of exactly computed quantities so that
small angles keep full relative precision.

Orientation is the standard one of R^2.  Circle tangents are traversed with
the ball on the left.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .delaunay import CellComplex, _triangles_overlap, hull_volume, simplex_volume
from .exact import sub, vec
from .hull import convex_hull
from .qball import circumball
from .qform import InputError, PointSet, QuadraticForm, UnsupportedError

EUCLIDEAN = "euclidean"
MINKOWSKI = "minkowski"
DEGENERATE = "degenerate"

_FAMILIES = {
    ((1, 0), (0, 1)): EUCLIDEAN,
    ((1, 0), (0, -1)): MINKOWSKI,
    ((1, 0), (0, 0)): DEGENERATE,
}


def form_family(Q: QuadraticForm) -> str:
    fam = _FAMILIES.get(Q.matrix)
    if fam is None:
        raise UnsupportedError("angles are defined for diag(1,1), diag(1,-1) and diag(1,0) only")
    return fam


def _sqrt_ratio(num: Fraction, den: Fraction) -> float:
    return math.sqrt(num / den)


def euclidean_angle(v, w) -> float:
    """Unsigned angle in [0, pi]."""
    v, w = vec(v), vec(w)
    cross = v[0] * w[1] - v[1] * w[0]
    return math.atan2(abs(float(cross)), float(v[0] * w[0] + v[1] * w[1]))


def minkowski_angle(v, w) -> float:
    """Signed angle between spacelike vectors of diag(1,-1).

    Non-negative when both lie in the same component of spacelike directions
    (same sign of the first coordinate), negative otherwise.
    """
    v, w = vec(v), vec(w)
    qv = v[0] * v[0] - v[1] * v[1]
    qw = w[0] * w[0] - w[1] * w[1]
    if qv <= 0 or qw <= 0:
        raise InputError("Minkowski angles need spacelike vectors", witness=[list(map(str, v)), list(map(str, w))])
    ip = v[0] * w[0] - v[1] * w[1]
    # cosh(phi)^2 - 1 = (ip^2 - qv qw) / (qv qw), exact; equals (det)^2/(qv qw)
    det = v[0] * w[1] - v[1] * w[0]
    phi = math.asinh(_sqrt_ratio(det * det, qv * qw))
    return phi if (v[0] > 0) == (w[0] > 0) else -phi


def degenerate_angle(v, w) -> Fraction:
    """Signed angle for diag(1,0): ``sign(v1 w1) |v2/v1 - w2/w1|`` (exact).

    Both vectors are scaled to first coordinate 1 before taking the slope
    difference; the sign records whether they point into the same half-plane.
    """
    v, w = vec(v), vec(w)
    if v[0] == 0 or w[0] == 0:
        raise InputError("degenerate angles need vectors with nonzero first coordinate")
    gap = abs(v[1] / v[0] - w[1] / w[0])
    return gap if (v[0] > 0) == (w[0] > 0) else -gap


def timelike_angle(v, w) -> float:
    """Unsigned angle between timelike vectors of diag(1,-1) in the same cone."""
    v, w = vec(v), vec(w)
    qv = v[0] * v[0] - v[1] * v[1]
    qw = w[0] * w[0] - w[1] * w[1]
    if qv >= 0 or qw >= 0:
        raise InputError("timelike angles need timelike vectors")
    if (v[1] > 0) != (w[1] > 0):
        raise InputError("timelike vectors lie in opposite cones")
    det = v[0] * w[1] - v[1] * w[0]
    return math.asinh(_sqrt_ratio(det * det, qv * qw))


def angle(Q: QuadraticForm, v, w) -> float:
    fam = form_family(Q)
    if fam == EUCLIDEAN:
        return euclidean_angle(v, w)
    if fam == MINKOWSKI:
        return minkowski_angle(v, w)
    return float(degenerate_angle(v, w))


def flat_angle(Q: QuadraticForm) -> float:
    """Angle of a straight line: pi in the Euclidean plane, 0 otherwise."""
    return math.pi if form_family(Q) == EUCLIDEAN else 0.0


def spacelike_component(Q: QuadraticForm, p, p1, p2) -> tuple:
    """Key of the connected component of ``p`` among points spacelike to both ``p1`` and ``p2``.

    Minkowski components are indexed by the null coordinate ``x + y`` relative
    to each endpoint, degenerate ones by ``x``.  The Euclidean set is connected.
    """
    fam = form_family(Q)
    p, p1, p2 = vec(p), vec(p1), vec(p2)
    for q in (p1, p2):
        if Q(sub(p, q)) <= 0:
            raise InputError("point is not spacelike to both endpoints")
    if fam == EUCLIDEAN:
        return ()
    if fam == MINKOWSKI:
        return (p[0] + p[1] > p1[0] + p1[1], p[0] + p[1] > p2[0] + p2[1])
    return (p[0] > p1[0], p[0] > p2[0])


def interior_angles(Q: QuadraticForm, triangle: Sequence[Sequence]) -> tuple[float, float, float]:
    tri = [vec(p) for p in triangle]
    if len(tri) != 3:
        raise InputError("a triangle has three vertices")
    for a, b in itertools.combinations(tri, 2):
        if Q(sub(a, b)) <= 0:
            raise InputError("triangle has a non-spacelike edge", witness=[list(map(str, a)), list(map(str, b))])
    return tuple(angle(Q, sub(tri[(k + 1) % 3], tri[k]), sub(tri[(k + 2) % 3], tri[k])) for k in range(3))


def _ball_tangent(Q: QuadraticForm, ball, p):
    # F = Q(x) - phi.x - D' is negative inside; (-g2, g1) keeps the ball on the left
    g0 = 2 * (Q.matrix[0][0] * p[0] + Q.matrix[0][1] * p[1]) - ball.phi[0]
    g1 = 2 * (Q.matrix[1][0] * p[0] + Q.matrix[1][1] * p[1]) - ball.phi[1]
    return (-g1, g0)


def _edge_cells(complex_: CellComplex, edge) -> list[tuple[int, ...]]:
    i, j = edge
    cells = [c for c in complex_.cells if i in c and j in c]
    if not cells:
        raise InputError(f"edge {tuple(edge)} is not in the complex")
    return cells


def edge_angle(Q: QuadraticForm, complex_: CellComplex, edge) -> float:
    """Intersection angle of the two Q-circles meeting along ``edge``.

    For a hull edge the second curve is the line through the edge, with the
    outer half-plane on its left.  The angle is measured as ``flat - angle
    between the tangents`` at the edge endpoint ``edge[0]``; this equals the
    sum of the interior angles opposite the edge.
    """
    if complex_.dim != 2:
        raise UnsupportedError("edge angles are defined for d = 2")
    pts = complex_.points
    cells = _edge_cells(complex_, edge)
    i, j = edge
    p = pts[i]
    balls = [complex_.balls[complex_.cells.index(c)] for c in cells]
    t1 = _ball_tangent(Q, balls[0], p)
    if len(cells) == 2:
        t2 = _ball_tangent(Q, balls[1], p)
    else:
        (k,) = [v for v in cells[0] if v not in (i, j)]
        d = sub(pts[j], p)
        n = (-d[1], d[0])
        if n[0] * (pts[k][0] - p[0]) + n[1] * (pts[k][1] - p[1]) > 0:
            n = (-n[0], -n[1])
        t2 = (n[1], -n[0])
    return flat_angle(Q) - angle(Q, t1, t2)


def opposite_angle_sum(Q: QuadraticForm, complex_: CellComplex, edge) -> float:
    """Sum of the interior angles opposite ``edge`` in its one or two cells."""
    pts = complex_.points
    i, j = edge
    total = 0.0
    for c in _edge_cells(complex_, edge):
        (k,) = [v for v in c if v not in (i, j)]
        total += angle(Q, sub(pts[i], pts[k]), sub(pts[j], pts[k]))
    return total


def exterior_dihedral(Q: QuadraticForm, complex_: CellComplex, edge) -> float:
    """Signed exterior dihedral angle at ``edge``: the negated edge angle."""
    return -edge_angle(Q, complex_, edge)


@dataclass(frozen=True)
class AngleSequence:
    values: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(sorted(self.values)))

    def __len__(self) -> int:
        return len(self.values)


def angle_sequence(Q: QuadraticForm, points, cells=None) -> AngleSequence:
    """Sorted interior angles of all triangles.

    Accepts a :class:`CellComplex`, or a point set together with index triples.
    """
    if isinstance(points, CellComplex):
        cells = points.cells if cells is None else cells
        points = points.points
    pts = points.points if isinstance(points, PointSet) else [vec(p) for p in points]
    values = []
    for c in cells:
        values.extend(interior_angles(Q, [pts[i] for i in c]))
    return AngleSequence(tuple(values))


def compare_fatness(a: AngleSequence, b: AngleSequence, tol: float = 1e-12) -> int:
    """1 if ``a`` is fatter, -1 if ``b`` is fatter, 0 if equal within ``tol``."""
    if len(a) != len(b):
        raise InputError(f"angle sequences of different lengths {len(a)} and {len(b)}")
    for x, y in zip(a.values, b.values):
        if abs(x - y) > tol:
            return 1 if x > y else -1
    return 0


def _orient(a, b, c) -> Fraction:
    return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])


def _strictly_inside(tri, p) -> bool:
    s = [_orient(tri[k], tri[(k + 1) % 3], p) for k in range(3)]
    return all(v > 0 for v in s) or all(v < 0 for v in s)


def enumerate_triangulations(X, cap: int = 8) -> list[tuple[tuple[int, int, int], ...]]:
    """All triangulations of the convex hull using every point as a vertex.

    Backtracking over the triangle adjacent to the smallest open edge.  Input
    must have no three collinear points.  Output is sorted.
    """
    pts = X.points if isinstance(X, PointSet) else [vec(p) for p in X]
    n = len(pts)
    if n > cap:
        raise InputError(f"{n} points exceeds the enumeration cap of {cap}")
    if n < 3:
        raise InputError("need at least 3 points")
    if pts and len(pts[0]) != 2:
        raise UnsupportedError("triangulations are enumerated in the plane only")
    for a, b, c in itertools.combinations(range(n), 3):
        if _orient(pts[a], pts[b], pts[c]) == 0:
            raise InputError("collinear points", witness=[a, b, c])
    hull_edges = set()
    for f in convex_hull(pts):
        hull_edges.add(frozenset(f.vertex_indices))
    empty = {}
    for tri in itertools.combinations(range(n), 3):
        corners = [pts[i] for i in tri]
        empty[tri] = not any(_strictly_inside(corners, pts[j]) for j in range(n) if j not in tri)

    start = min(tuple(sorted(e)) for e in hull_edges)
    a, b = start
    other = next(k for k in range(n) if k not in start)
    if _orient(pts[a], pts[b], pts[other]) < 0:
        a, b = b, a
    target = hull_volume(pts)
    results = []

    def rec(tris: list, open_edges: dict, used: set):
        if not open_edges:
            if sum((simplex_volume([pts[i] for i in t]) for t in tris), Fraction(0)) == target:
                results.append(tuple(sorted(tuple(sorted(t)) for t in tris)))
            return
        key = min(open_edges)
        u, v = open_edges[key]
        for c in range(n):
            if c in (u, v) or _orient(pts[u], pts[v], pts[c]) <= 0:
                continue
            tri = tuple(sorted((u, v, c)))
            if not empty[tri] or tri in used:
                continue
            corners = [pts[u], pts[v], pts[c]]
            if any(_triangles_overlap(corners, [pts[i] for i in t]) for t in tris):
                continue
            new_open = dict(open_edges)
            del new_open[key]
            ok = True
            for s, t in ((v, c), (c, u)):
                e = tuple(sorted((s, t)))
                if e in new_open:
                    if new_open[e] != (s, t):
                        ok = False
                        break
                    del new_open[e]
                elif frozenset(e) not in hull_edges:
                    new_open[e] = (t, s)
            if ok:
                rec(tris + [tri], new_open, used | {tri})

    rec([], {start: (a, b)}, set())
    return sorted(results)
