"""Q-Delaunay and full decompositions, the brute-force oracle, and a verifier."""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .exact import det, sub
from .hull import DegenerateHullError, classify_and_project, convex_hull, lift
from .qball import QBall, circumball
from .qform import InputError, PointSet, QuadraticForm, require_position

DELAUNAY = "delaunay"
FULL = "full"


class TilingError(AssertionError):
    """Brute-force cells do not tile the convex hull."""


@dataclass(frozen=True)
class CellComplex:
    form: QuadraticForm
    points: PointSet
    cells: tuple[tuple[int, ...], ...]
    balls: tuple[QBall, ...]
    kind: str = DELAUNAY

    @property
    def dim(self) -> int:
        return self.points.dim

    @property
    def adjacency(self) -> dict[tuple[int, ...], list[int]]:
        """Codimension-one face -> indices of the cells containing it."""
        faces: dict[tuple[int, ...], list[int]] = {}
        for ci, cell in enumerate(self.cells):
            for face in itertools.combinations(cell, len(cell) - 1):
                faces.setdefault(face, []).append(ci)
        return faces

    def edges(self) -> set[tuple[int, int]]:
        return {e for cell in self.cells for e in itertools.combinations(cell, 2)}

    def combinatorics(self) -> frozenset[frozenset[int]]:
        return frozenset(frozenset(c) for c in self.cells)

    def labeled_cells(self) -> list[list[str]]:
        return [[self.points.labels[i] for i in c] for c in self.cells]


def _normalize(cells: Iterable[Sequence[int]]) -> tuple[tuple[int, ...], ...]:
    return tuple(sorted(tuple(sorted(c)) for c in cells))


def make_complex(Q: QuadraticForm, X: PointSet, cells, kind: str = DELAUNAY) -> CellComplex:
    cells = _normalize(cells)
    balls = tuple(circumball(Q, [X[i] for i in c]) for c in cells)
    return CellComplex(Q, X, cells, balls, kind)


def _decompose(Q: QuadraticForm, X: PointSet, kind: str) -> CellComplex:
    require_position(Q, X, generic=True)
    d = X.dim
    if len(X) < d + 1:
        raise InputError(f"need at least {d + 1} points in dimension {d}, got {len(X)}")
    if len(X) == d + 1:
        return make_complex(Q, X, [tuple(range(d + 1))], kind)
    lifted = lift(Q, X)
    facets = convex_hull(lifted.lifted)
    bottom, top = classify_and_project(Q, X, facets)
    return make_complex(Q, X, bottom if kind == DELAUNAY else top, kind)


def delaunay(Q: QuadraticForm, X: PointSet) -> CellComplex:
    """The unique Q-Delaunay decomposition of a spacelike, generic point set."""
    return _decompose(Q, X, DELAUNAY)


def full_decomposition(Q: QuadraticForm, X: PointSet) -> CellComplex:
    """Decomposition whose inscribed Q-balls contain every point weakly."""
    return _decompose(Q, X, FULL)


def simplex_volume(points: Sequence[Sequence]) -> Fraction:
    """Exact unsigned volume |det| / d! of a simplex."""
    p0 = points[0]
    return abs(det([sub(p, p0) for p in points[1:]])) / math.factorial(len(p0))


def hull_volume(points: Sequence[Sequence]) -> Fraction:
    facets = convex_hull(points)
    n = len(points)
    center = tuple(sum(p[k] for p in points) / n for k in range(len(points[0])))
    return sum((simplex_volume([center] + [points[i] for i in f.vertex_indices]) for f in facets), Fraction(0))


def brute_force_delaunay(Q: QuadraticForm, X: PointSet, cap: int = 12, kind: str = DELAUNAY) -> CellComplex:
    """Enumerate all (d+1)-subsets and keep those with an empty (or full) ball.

    Independent of the hull route; raises :class:`TilingError` if the kept
    simplices do not exactly fill the convex hull by volume.
    """
    d = X.dim
    if d not in (2, 3):
        raise InputError("brute force supports d = 2 or 3")
    if len(X) > cap:
        raise InputError(f"{len(X)} points exceeds the brute-force cap of {cap}")
    require_position(Q, X, generic=True)
    pts = X.points
    lifts = [Q(p) for p in pts]
    kept = []
    for subset in itertools.combinations(range(len(pts)), d + 1):
        if det([list(pts[i]) + [1] for i in subset]) == 0:
            continue
        ball = circumball(Q, [pts[i] for i in subset])
        others = (j for j in range(len(pts)) if j not in subset)
        if kind == DELAUNAY:
            ok = all(lifts[j] - sum(a * b for a, b in zip(ball.phi, pts[j])) - ball.dprime >= 0 for j in others)
        else:
            ok = all(lifts[j] - sum(a * b for a, b in zip(ball.phi, pts[j])) - ball.dprime <= 0 for j in others)
        if ok:
            kept.append(subset)
    total = sum((simplex_volume([pts[i] for i in c]) for c in kept), Fraction(0))
    if total != hull_volume(pts):
        raise TilingError(f"kept {len(kept)} simplices of total volume {total}, hull volume {hull_volume(pts)}")
    return make_complex(Q, X, kept, kind)


def _barycentric_sign_inside(simplex: Sequence[Sequence], p) -> bool:
    """True iff ``p`` is strictly inside the simplex."""
    d = len(p)
    base = det([list(q) + [1] for q in simplex])
    for k in range(d + 1):
        pts = list(simplex)
        pts[k] = p
        s = det([list(q) + [1] for q in pts])
        if s == 0 or (s > 0) != (base > 0):
            return False
    return True


def _triangles_overlap(a: Sequence[Sequence], b: Sequence[Sequence]) -> bool:
    """Exact test for overlapping interiors of two triangles (separating axes)."""
    for tri, other in ((a, b), (b, a)):
        for k in range(3):
            p, q, r = tri[k], tri[(k + 1) % 3], tri[(k + 2) % 3]
            ex, ey = q[0] - p[0], q[1] - p[1]
            side_r = ex * (r[1] - p[1]) - ey * (r[0] - p[0])
            sides = [ex * (o[1] - p[1]) - ey * (o[0] - p[0]) for o in other]
            if side_r > 0 and all(s <= 0 for s in sides):
                return False
            if side_r < 0 and all(s >= 0 for s in sides):
                return False
    return True


@dataclass
class VerifyReport:
    ok: bool
    violations: list[dict] = field(default_factory=list)

    def add(self, kind: str, **info) -> None:
        self.ok = False
        self.violations.append({"type": kind, **info})


def verify(complex_: CellComplex) -> VerifyReport:
    """Re-check every invariant of a cell complex exactly."""
    Q, X = complex_.form, complex_.points
    d = X.dim
    report = VerifyReport(True)
    pts = X.points
    for ci, cell in enumerate(complex_.cells):
        if len(cell) != d + 1 or len(set(cell)) != d + 1:
            report.add("cell_size", cell=list(cell))
            continue
        simplex = [pts[i] for i in cell]
        if det([list(p) + [1] for p in simplex]) == 0:
            report.add("degenerate_cell", cell=list(cell))
            continue
        ball = complex_.balls[ci] if ci < len(complex_.balls) else None
        if ball is None or ball != circumball(Q, simplex):
            report.add("ball_mismatch", cell=list(cell))
            ball = circumball(Q, simplex)
        for j, p in enumerate(pts):
            v = ball.value(p)
            if j in cell:
                if v != 0:
                    report.add("vertex_off_sphere", cell=list(cell), point=j)
            elif complex_.kind == DELAUNAY and v < 0:
                report.add("point_inside", cell=list(cell), point=j)
            elif complex_.kind == FULL and v > 0:
                report.add("point_outside", cell=list(cell), point=j)
    used = {i for c in complex_.cells for i in c}
    if complex_.kind == DELAUNAY and used != set(range(len(pts))):
        report.add("missing_vertices", points=sorted(set(range(len(pts))) - used))
    try:
        expected = hull_volume(pts)
    except DegenerateHullError:
        report.add("degenerate_hull")
        return report
    total = sum(
        (simplex_volume([pts[i] for i in c]) for c in complex_.cells if len(c) == d + 1), Fraction(0)
    )
    if total != expected:
        report.add("coverage", cell_volume=str(total), hull_volume=str(expected))
    cells = [c for c in complex_.cells if len(c) == d + 1]
    for a, b in itertools.combinations(range(len(cells)), 2):
        sa = [pts[i] for i in cells[a]]
        sb = [pts[i] for i in cells[b]]
        if d == 2:
            overlap = _triangles_overlap(sa, sb)
        else:
            overlap = any(_barycentric_sign_inside(sb, s) for s in _samples(sa)) or any(
                _barycentric_sign_inside(sa, s) for s in _samples(sb)
            )
        if overlap:
            report.add("overlap", cells=[list(cells[a]), list(cells[b])])
    return report


def _samples(simplex):
    n = len(simplex)
    bary = tuple(sum(p[k] for p in simplex) / n for k in range(len(simplex[0])))
    out = [bary]
    for v in simplex:
        out.append(tuple((b + c) / 2 for b, c in zip(bary, v)))
    return out
