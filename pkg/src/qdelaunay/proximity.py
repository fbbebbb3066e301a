"""Proximity graphs for a quadratic form: minimum spanning tree, RNG, Gabriel graph.

Lengths are ``sqrt(Q(x - y))`` for spacelike pairs.  Every decision compares
squared lengths exactly; only the exhaustive spanning-tree oracle sums square
roots, using interval arithmetic.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

import mpmath

from .exact import sub
from .qform import InputError, PointSet, QuadraticForm, UnsupportedError, evaluate, require_position


class UnresolvedTieError(ArithmeticError):
    """Two spanning-tree lengths could not be separated by interval refinement."""


@dataclass(frozen=True)
class Graph:
    labels: tuple[str, ...]
    edges: tuple[tuple[int, int], ...]
    sq_lengths: tuple[Fraction, ...]

    def edge_set(self) -> set[tuple[int, int]]:
        return set(self.edges)

    def labeled_edges(self) -> list[list[str]]:
        return [[self.labels[i], self.labels[j]] for i, j in self.edges]


def _graph(Q: QuadraticForm, X: PointSet, edges) -> Graph:
    edges = tuple(sorted(edges))
    return Graph(X.labels, edges, tuple(evaluate(Q, sub(X[i], X[j])) for i, j in edges))


def _sq(Q: QuadraticForm, X: PointSet):
    n = len(X)
    return {(i, j): evaluate(Q, sub(X[i], X[j])) for i, j in itertools.combinations(range(n), 2)}


def mst(Q: QuadraticForm, X: PointSet) -> Graph:
    """Kruskal on exact squared lengths; ties broken by the label pair."""
    require_position(Q, X, generic=False)
    sq = _sq(Q, X)
    order = sorted(sq, key=lambda e: (sq[e], X.labels[e[0]], X.labels[e[1]]))
    parent = list(range(len(X)))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    chosen = []
    for i, j in order:
        ri, rj = find(i), find(j)
        if ri != rj:
            parent[ri] = rj
            chosen.append((i, j))
    return _graph(Q, X, chosen)


def rng(Q: QuadraticForm, X: PointSet) -> Graph:
    """Edge (x, y) iff ``Q(x-y) < max(Q(z-x), Q(z-y))`` for every other z."""
    require_position(Q, X, generic=False)
    sq = _sq(Q, X)
    n = len(X)

    def d(a, b):
        return sq[(a, b) if a < b else (b, a)]

    edges = [
        (i, j) for (i, j), v in sq.items()
        if all(v < max(d(k, i), d(k, j)) for k in range(n) if k not in (i, j))
    ]
    return _graph(Q, X, edges)


def in_diameter_ball(Q: QuadraticForm, x, y, z) -> bool:
    """True iff ``z`` is strictly inside the ball with diameter segment ``xy``."""
    m = tuple((a + b) / 2 for a, b in zip(x, y))
    return evaluate(Q, sub(z, m)) < evaluate(Q, sub(x, y)) / 4


def gabriel(Q: QuadraticForm, X: PointSet) -> Graph:
    """Edge (x, y) iff the open diameter ball of ``xy`` holds no other point."""
    if Q.is_degenerate:
        raise UnsupportedError("the Gabriel graph needs a non-degenerate form")
    require_position(Q, X, generic=False)
    n = len(X)
    edges = [
        (i, j) for i, j in itertools.combinations(range(n), 2)
        if not any(in_diameter_ball(Q, X[i], X[j], X[k]) for k in range(n) if k not in (i, j))
    ]
    return _graph(Q, X, edges)


def diameter_ball_lemma(Q: QuadraticForm, x, y, z) -> bool:
    """For ``z`` inside the diameter ball of ``xy`` and spacelike to both ends,
    both ``Q(z-x)`` and ``Q(z-y)`` are below ``Q(x-y)``.

    Returns True when the premise fails.  Without the spacelike premise the
    statement is false for indefinite forms.
    """
    qx, qy, qd = evaluate(Q, sub(z, x)), evaluate(Q, sub(z, y)), evaluate(Q, sub(x, y))
    if not (qx > 0 and qy > 0 and qd > 0 and in_diameter_ball(Q, x, y, z)):
        return True
    return qx < qd and qy < qd


def _prufer_trees(n: int):
    if n == 1:
        yield ()
        return
    if n == 2:
        yield ((0, 1),)
        return
    for seq in itertools.product(range(n), repeat=n - 2):
        degree = [1] * n
        for v in seq:
            degree[v] += 1
        edges = []
        for v in seq:
            leaf = next(k for k in range(n) if degree[k] == 1)
            edges.append((min(leaf, v), max(leaf, v)))
            degree[leaf] -= 1
            degree[v] -= 1
        u, w = (k for k in range(n) if degree[k] == 1)
        edges.append((u, w))
        yield tuple(sorted(edges))


def _interval_sum(values, prec: int):
    with mpmath.workprec(prec):
        return mpmath.fsum(mpmath.sqrt(mpmath.mpi(v.numerator) / v.denominator) for v in values)


def _strictly_less(a, b) -> bool | None:
    """Compare sums of square roots exactly; None for an exact tie."""
    if sorted(a) == sorted(b):
        return None
    prec = 64
    while prec <= 4096:
        ia, ib = _interval_sum(a, prec), _interval_sum(b, prec)
        if ia.b < ib.a:
            return True
        if ib.b < ia.a:
            return False
        if max(ia.delta, ib.delta) < mpmath.mpf("1e-30") and prec >= 256:
            break
        prec *= 2
    raise UnresolvedTieError("spanning-tree lengths agree to within 1e-30")


def exhaustive_mst(Q: QuadraticForm, X: PointSet, cap: int = 8) -> list[tuple[tuple[int, int], ...]]:
    """All minimum spanning trees, by enumerating every labeled tree.

    Float sums pick a shortlist; interval arithmetic settles the order within it.
    """
    require_position(Q, X, generic=False)
    n = len(X)
    if n > cap:
        raise InputError(f"{n} points exceeds the exhaustive cap of {cap}")
    sq = _sq(Q, X)
    root = {e: math.sqrt(v) for e, v in sq.items()}
    trees = [(sum(root[e] for e in t), t) for t in _prufer_trees(n)]
    best = min(s for s, _ in trees)
    shortlist = [t for s, t in trees if s <= best * (1 + 1e-9) + 1e-12]
    winners = [shortlist[0]]
    for t in shortlist[1:]:
        cmp = _strictly_less([sq[e] for e in t], [sq[e] for e in winners[0]])
        if cmp is None:
            winners.append(t)
        elif cmp:
            winners = [t]
    return sorted(winners)
