"""Exact incremental convex hulls in R^2..R^4 and the lift/project steps.

Points ``x`` of R^d are lifted to ``(x, Q(x))`` in R^{d+1}.  Hull facets whose
inward normal has positive last coordinate are *bottom* facets and project
to the Q-Delaunay cells; the *top* facets project to the full decomposition.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .exact import dot, hyperplane_normal, null_vector, rank, sub
from .qform import PointSet, PositionError, QuadraticForm, evaluate

BOTTOM = "bottom"
TOP = "top"
VERTICAL = "vertical"


class DegenerateHullError(ValueError):
    """All points lie on a common hyperplane ``normal . x = offset``."""

    def __init__(self, message, normal=None, offset=None):
        super().__init__(message)
        self.normal = normal
        self.offset = offset


@dataclass(frozen=True)
class LiftedPointSet:
    base: PointSet
    lifted: tuple[tuple[Fraction, ...], ...]


@dataclass(frozen=True)
class HullFacet:
    vertex_indices: tuple[int, ...]
    inward_normal: tuple[Fraction, ...]
    offset: Fraction  # inward_normal . x >= offset for every input point

    @property
    def orientation_class(self) -> str:
        last = self.inward_normal[-1]
        if last > 0:
            return BOTTOM
        if last < 0:
            return TOP
        return VERTICAL

    def side(self, p) -> Fraction:
        return dot(self.inward_normal, p) - self.offset


def lift(Q: QuadraticForm, X: PointSet) -> LiftedPointSet:
    return LiftedPointSet(X, tuple(tuple(p) + (evaluate(Q, p),) for p in X))


def _initial_simplex(points: Sequence[Sequence]) -> list[int]:
    dim = len(points[0])
    chosen = [0]
    diffs: list = []
    for i in range(1, len(points)):
        cand = diffs + [sub(points[i], points[0])]
        if rank(cand) == len(cand):
            chosen.append(i)
            diffs = cand
            if len(chosen) == dim + 1:
                return chosen
    normal = null_vector(diffs) if diffs else tuple(Fraction(int(k == 0)) for k in range(dim))
    offset = dot(normal, points[0])
    raise DegenerateHullError(
        f"points span only a {len(chosen) - 1}-dimensional affine subspace; "
        f"all satisfy {list(map(str, normal))} . x = {offset}",
        normal=normal,
        offset=offset,
    )


def convex_hull(points: Sequence[Sequence]) -> list[HullFacet]:
    """Facets of the convex hull of ``points`` (dimension 2 to 4).

    Incremental insertion in index order with exact side tests.  Facets are
    returned sorted by their vertex index tuples.
    """
    pts = [tuple(p) for p in points]
    if not pts:
        raise DegenerateHullError("no points")
    dim = len(pts[0])
    if not 2 <= dim <= 4:
        raise ValueError(f"hull dimension {dim} not supported")
    init = _initial_simplex(pts)
    centroid = tuple(sum(pts[i][k] for i in init) / (dim + 1) for k in range(dim))

    def make_facet(idx) -> HullFacet:
        idx = tuple(sorted(idx))
        normal = hyperplane_normal([pts[i] for i in idx])
        if not any(normal):
            raise DegenerateHullError(f"facet {idx} is affinely degenerate")
        offset = dot(normal, pts[idx[0]])
        if dot(normal, centroid) < offset:
            normal = tuple(-v for v in normal)
            offset = -offset
        return HullFacet(idx, normal, offset)

    facets: dict[tuple[int, ...], HullFacet] = {}
    for skip in init:
        f = make_facet([i for i in init if i != skip])
        facets[f.vertex_indices] = f

    chosen = set(init)
    for i, p in enumerate(pts):
        if i in chosen:
            continue
        visible = [f for f in facets.values() if f.side(p) < 0]
        if not visible:
            continue
        ridge_count: dict[tuple[int, ...], int] = {}
        for f in visible:
            for k in range(len(f.vertex_indices)):
                ridge = f.vertex_indices[:k] + f.vertex_indices[k + 1:]
                ridge_count[ridge] = ridge_count.get(ridge, 0) + 1
            del facets[f.vertex_indices]
        for ridge, count in ridge_count.items():
            if count == 1:
                nf = make_facet(ridge + (i,))
                facets[nf.vertex_indices] = nf
    return [facets[k] for k in sorted(facets)]


def classify_and_project(Q: QuadraticForm, X: PointSet, facets: Sequence[HullFacet]):
    """Split lifted-hull facets into ``(bottom cells, top cells)``.

    Each cell is the sorted vertex index tuple of the projected facet.
    """
    bottom, top = [], []
    for f in facets:
        cls = f.orientation_class
        if cls == VERTICAL:
            raise PositionError(
                "lifted hull has a vertical facet; input not in generic position",
                witness=[X.labels[i] for i in f.vertex_indices],
            )
        (bottom if cls == BOTTOM else top).append(f.vertex_indices)
    return sorted(bottom), sorted(top)
