"""Edge-weight prescription checks for Delaunay triangulations in R^{1,1} and R^{1,0,1}.

A disk graph carries the weights of a planar triangulation; adding a vertex at
infinity joined to the exterior vertices turns it into a sphere triangulation.
Transverse Jordan curves are enumerated as simple cycles of the dual graph of
the sphere triangulation: such a cycle crosses a set of primal edges whose
removal leaves exactly two connected sides.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Sequence

import networkx as nx

from .angles2d import DEGENERATE, MINKOWSKI, exterior_dihedral, form_family
from .delaunay import CellComplex, delaunay
from .qform import InputError, PointSet, QuadraticForm, UnsupportedError

DEFAULT_TOL = 1e-9
FACE_CAP = 16


class MalformedGraphError(InputError):
    """Edges, faces and exterior cycle do not describe a triangulated disk or sphere."""


def _key(i: int, j: int) -> tuple[int, int]:
    return (i, j) if i < j else (j, i)


@dataclass(frozen=True)
class WeightedPlanarGraph:
    labels: tuple[str, ...]
    weights: dict  # (i, j) with i < j -> float
    faces: tuple[tuple[int, int, int], ...]
    exterior_cycle: tuple[int, ...] = ()
    spherical: bool = False

    def __post_init__(self):
        weights = {_key(*e): float(w) for e, w in self.weights.items()}
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "faces", tuple(tuple(sorted(f)) for f in self.faces))
        object.__setattr__(self, "labels", tuple(self.labels))
        self._check()

    def _check(self) -> None:
        n = len(self.labels)
        zero = [e for e, w in self.weights.items() if w == 0]
        if zero:
            raise MalformedGraphError("edge weights must be nonzero", witness=[list(e) for e in zero])
        count: dict = {}
        for f in self.faces:
            if len(set(f)) != 3 or any(not 0 <= v < n for v in f):
                raise MalformedGraphError(f"bad face {f}", witness=list(f))
            for a, b in itertools.combinations(f, 2):
                count[(a, b)] = count.get((a, b), 0) + 1
        if set(count) != set(self.weights):
            extra = sorted(set(count) ^ set(self.weights))
            raise MalformedGraphError("faces and weighted edges disagree", witness=[list(e) for e in extra])
        boundary = set()
        if not self.spherical:
            cyc = self.exterior_cycle
            if len(cyc) < 3 or len(set(cyc)) != len(cyc):
                raise MalformedGraphError("exterior cycle needs at least 3 distinct vertices")
            boundary = {_key(cyc[k], cyc[(k + 1) % len(cyc)]) for k in range(len(cyc))}
        for e, c in count.items():
            expected = 1 if e in boundary else 2
            if c != expected:
                raise MalformedGraphError(f"edge {e} lies in {c} faces, expected {expected}", witness=list(e))
        euler = n - len(self.weights) + len(self.faces)
        if euler != (2 if self.spherical else 1):
            raise MalformedGraphError(f"Euler characteristic {euler} does not match the surface")

    @property
    def n(self) -> int:
        return len(self.labels)

    @property
    def exterior(self) -> tuple[bool, ...]:
        ext = set(self.exterior_cycle)
        return tuple(i in ext for i in range(self.n))

    def vertex_sum(self, v: int) -> float:
        return sum(w for e, w in self.weights.items() if v in e)

    def negative_edges(self) -> list[tuple[int, int]]:
        return sorted(e for e, w in self.weights.items() if w < 0)

    def relabel(self, perm: Sequence[int]) -> "WeightedPlanarGraph":
        """Vertex ``i`` becomes vertex ``perm[i]``."""
        labels = [None] * self.n
        for i, p in enumerate(perm):
            labels[p] = self.labels[i]
        return WeightedPlanarGraph(
            tuple(labels),
            {_key(perm[a], perm[b]): w for (a, b), w in self.weights.items()},
            tuple(tuple(perm[v] for v in f) for f in self.faces),
            tuple(perm[v] for v in self.exterior_cycle),
            self.spherical,
        )


@dataclass
class ConditionReport:
    conditions: dict = field(default_factory=dict)

    def set(self, name: str, passed: bool, witness=None, **info) -> None:
        self.conditions[name] = {"pass": bool(passed), "witness": witness, **info}

    @property
    def ok(self) -> bool:
        return all(c["pass"] for c in self.conditions.values())

    def passed(self, name: str) -> bool:
        return self.conditions[name]["pass"]


def _exterior_cycle(complex_: CellComplex) -> tuple[int, ...]:
    pts = complex_.points
    boundary = [e for e, cs in _edge_faces(complex_.cells).items() if len(cs) == 1]
    nbrs: dict = {}
    for a, b in boundary:
        nbrs.setdefault(a, []).append(b)
        nbrs.setdefault(b, []).append(a)
    start = min(nbrs)
    cyc = [start]
    prev, cur = None, start
    while True:
        nxt = [v for v in nbrs[cur] if v != prev][0] if prev is not None else min(nbrs[cur])
        if nxt == start:
            break
        cyc.append(nxt)
        prev, cur = cur, nxt
    # orient counterclockwise
    area = sum(pts[cyc[k]][0] * pts[cyc[(k + 1) % len(cyc)]][1] - pts[cyc[(k + 1) % len(cyc)]][0] * pts[cyc[k]][1]
               for k in range(len(cyc)))
    if area < 0:
        cyc = [cyc[0]] + cyc[:0:-1]
    return tuple(cyc)


def _edge_faces(cells) -> dict:
    out: dict = {}
    for c in cells:
        for a, b in itertools.combinations(sorted(c), 2):
            out.setdefault((a, b), []).append(c)
    return out


def weights_from_delaunay(Q: QuadraticForm, X: PointSet) -> WeightedPlanarGraph:
    """1-skeleton of the Delaunay triangulation weighted by exterior dihedral angles.

    The weight of an edge is the negated edge angle, i.e. minus the sum of the
    interior angles opposite it.
    """
    if form_family(Q) not in (MINKOWSKI, DEGENERATE):
        raise UnsupportedError("edge-weight prescription is for diag(1,-1) and diag(1,0)")
    complex_ = delaunay(Q, X)
    weights = {e: exterior_dihedral(Q, complex_, e) for e in sorted(complex_.edges())}
    return WeightedPlanarGraph(X.labels, weights, complex_.cells, _exterior_cycle(complex_))


def augment_to_sphere(g: WeightedPlanarGraph, label: str = "v_inf") -> WeightedPlanarGraph:
    """Add a vertex at infinity joined to every exterior vertex.

    Each new edge gets minus the vertex sum of its exterior endpoint, so that
    every vertex sum of the exterior vertices vanishes.
    """
    if g.spherical:
        raise MalformedGraphError("graph is already spherical")
    inf = g.n
    weights = dict(g.weights)
    for v in g.exterior_cycle:
        weights[(v, inf)] = -g.vertex_sum(v)
    cyc = g.exterior_cycle
    faces = list(g.faces) + [(cyc[k], cyc[(k + 1) % len(cyc)], inf) for k in range(len(cyc))]
    return WeightedPlanarGraph(g.labels + (label,), weights, tuple(faces), (), True)


def _path_or_cycle(n: int, edges: list, cycle: bool):
    """Endpoints of a Hamiltonian path (or ``()`` for a cycle), else None."""
    G = nx.Graph()
    G.add_nodes_from(range(n))
    G.add_edges_from(edges)
    if len(edges) != (n if cycle else n - 1) or not nx.is_connected(G):
        return None
    deg = dict(G.degree())
    if cycle:
        return () if all(d == 2 for d in deg.values()) else None
    if max(deg.values()) > 2:
        return None
    return tuple(sorted(v for v, d in deg.items() if d == 1))


def jordan_curves(g: WeightedPlanarGraph, face_cap: int = FACE_CAP):
    """Yield ``(crossed_edges, side_a, side_b)`` for every transverse Jordan curve.

    Curves are simple cycles of the dual graph of a sphere triangulation.
    """
    if not g.spherical:
        raise MalformedGraphError("Jordan curves are enumerated on a sphere graph")
    if len(g.faces) > face_cap:
        raise InputError(f"{len(g.faces)} faces exceeds the cycle-enumeration cap of {face_cap}")
    owner = _edge_faces(g.faces)
    dual = nx.Graph()
    dual.add_nodes_from(g.faces)
    for e, (f1, f2) in owner.items():
        dual.add_edge(f1, f2, primal=e)
    primal = nx.Graph()
    primal.add_nodes_from(range(g.n))
    primal.add_edges_from(g.weights)
    for cyc in nx.simple_cycles(dual):
        if len(cyc) < 3:
            continue
        crossed = sorted(dual.edges[cyc[k], cyc[(k + 1) % len(cyc)]]["primal"] for k in range(len(cyc)))
        cut = primal.copy()
        cut.remove_edges_from(crossed)
        sides = sorted((sorted(c) for c in nx.connected_components(cut)), key=lambda s: s[0])
        if len(sides) != 2:
            raise AssertionError(f"dual cycle {cyc} does not separate the sphere into two sides")
        yield crossed, tuple(sides[0]), tuple(sides[1])


def _curve_check(g: WeightedPlanarGraph, tol: float, face_cap: int):
    """Shared core of condition (iii) on a sphere graph.

    Returns ``(violations, curves_checked)``.
    """
    neg = set(g.negative_edges())
    violations = []
    checked = 0
    for crossed, a, b in jordan_curves(g, face_cap):
        if sum(e in neg for e in crossed) != 2:
            continue
        checked += 1
        total = sum(g.weights[e] for e in crossed)
        single = len(a) == 1 or len(b) == 1
        if total < -tol:
            violations.append({"crossed": [list(e) for e in crossed], "sum": total, "reason": "negative"})
        elif abs(total) <= tol and not single:
            violations.append({"crossed": [list(e) for e in crossed], "sum": total, "reason": "equality off a vertex link"})
        elif total > tol and single:
            violations.append({"crossed": [list(e) for e in crossed], "sum": total, "reason": "vertex link not tight"})
    return violations, checked


def validate_sphere(g: WeightedPlanarGraph, tol: float = DEFAULT_TOL, face_cap: int = FACE_CAP) -> ConditionReport:
    """Conditions (i)-(iii) for weights on a sphere triangulation."""
    if not g.spherical:
        raise MalformedGraphError("validate_sphere needs a spherical graph")
    report = ConditionReport()
    bad = [(g.labels[v], g.vertex_sum(v)) for v in range(g.n) if abs(g.vertex_sum(v)) > tol]
    report.set("i", not bad, witness=bad or None)
    neg = g.negative_edges()
    ham = _path_or_cycle(g.n, neg, cycle=True)
    report.set("ii", ham is not None, witness=None if ham is not None else [list(e) for e in neg])
    violations, checked = _curve_check(g, tol, face_cap)
    report.set("iii", not violations, witness=violations[:5] or None, curves_checked=checked)
    return report


def validate_disk(g: WeightedPlanarGraph, tol: float = DEFAULT_TOL, face_cap: int = FACE_CAP) -> ConditionReport:
    """Conditions (1)-(4) for weights on a triangulated disk.

    Condition (4) is evaluated on the sphere graph from :func:`augment_to_sphere`:
    there the left-hand side of the disk inequality is exactly the sum of the
    crossed sphere-graph weights, and "encircles all vertices" becomes
    "encircles the vertex at infinity".
    """
    if g.spherical:
        raise MalformedGraphError("validate_disk needs a disk graph")
    report = ConditionReport()
    ext = g.exterior
    bad = [(g.labels[v], g.vertex_sum(v)) for v in range(g.n) if not ext[v] and abs(g.vertex_sum(v)) > tol]
    report.set("1", not bad, witness=bad or None)
    neg = g.negative_edges()
    ends = _path_or_cycle(g.n, neg, cycle=False)
    ok2 = ends is not None and len(ends) == 2 and all(ext[v] for v in ends)
    report.set(
        "2", ok2,
        witness=None if ok2 else {"negative_edges": [[g.labels[a], g.labels[b]] for a, b in neg]},
        endpoints=[g.labels[v] for v in ends] if ok2 else None,
    )
    if ok2:
        wrong = []
        for v in g.exterior_cycle:
            s = g.vertex_sum(v)
            want_positive = v in ends
            if (want_positive and s <= tol) or (not want_positive and s >= -tol):
                wrong.append((g.labels[v], s))
        report.set("3", not wrong, witness=wrong or None)
    else:
        report.set("3", False, witness="condition (2) fails, so v1 and v2 are undefined")
    violations, checked = _curve_check(augment_to_sphere(g), tol, face_cap)
    report.set("4", not violations, witness=violations[:5] or None, curves_checked=checked)
    return report
