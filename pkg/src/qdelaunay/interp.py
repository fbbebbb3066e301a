"""Piecewise-linear interpolation error of degree-2 polynomials, and the
Lipschitz-graph construction of spacelike point sets.

On a triangle with vertices P_0, P_1, P_2 the residual of a quadratic
``f(x) = x^T H x + b.x + c`` against its linear interpolant is, in barycentric
coordinates,

    r = - sum_{i<j} lam_i lam_j H(P_i - P_j),

so L^1 (for sign-definite residuals), L^2 and L^inf norms are exact rationals
before the final square root.  Sign-changing residuals in L^1 use adaptive
subdivision with a Bernstein sign test.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .angles2d import enumerate_triangulations
from .delaunay import CellComplex, _triangles_overlap, delaunay, hull_volume, simplex_volume
from .exact import solve, sub, to_fraction, vec, SingularMatrixError
from .qform import InputError, PointSet, QuadraticForm, evaluate

INF = "inf"


@dataclass(frozen=True)
class PolyFunction:
    """``f(x) = x^T H x + b.x + c`` with rational coefficients."""

    quadratic: tuple[tuple[Fraction, ...], ...]
    linear: tuple[Fraction, ...]
    constant: Fraction = Fraction(0)

    def __post_init__(self):
        H = tuple(tuple(to_fraction(v) for v in row) for row in self.quadratic)
        if any(H[i][j] != H[j][i] for i in range(len(H)) for j in range(i)):
            raise InputError("quadratic part must be symmetric")
        object.__setattr__(self, "quadratic", H)
        object.__setattr__(self, "linear", vec(self.linear))
        object.__setattr__(self, "constant", to_fraction(self.constant))
        if len(self.linear) != len(H):
            raise InputError("linear part has the wrong dimension")

    @classmethod
    def from_form(cls, Q: QuadraticForm) -> "PolyFunction":
        return cls(Q.matrix, (0,) * Q.dim)

    @classmethod
    def affine(cls, linear, constant=0) -> "PolyFunction":
        d = len(linear)
        return cls(tuple((0,) * d for _ in range(d)), linear, constant)

    def quad(self, v) -> Fraction:
        H = self.quadratic
        return sum((v[i] * H[i][j] * v[j] for i in range(len(v)) for j in range(len(v))), Fraction(0))

    def __call__(self, x) -> Fraction:
        x = vec(x)
        return self.quad(x) + sum((a * b for a, b in zip(self.linear, x)), Fraction(0)) + self.constant

    @property
    def is_affine(self) -> bool:
        return not any(v for row in self.quadratic for v in row)


def _pair_coefficients(f: PolyFunction, tri) -> dict:
    """``c_ij`` with ``r = sum_{i<j} c_ij lam_i lam_j``."""
    return {(i, j): -f.quad(sub(tri[i], tri[j])) for i, j in itertools.combinations(range(3), 2)}


def _monomial_integral(area: Fraction, exps: Sequence[int]) -> Fraction:
    a, b, c = exps
    return 2 * area * math.factorial(a) * math.factorial(b) * math.factorial(c) / Fraction(math.factorial(a + b + c + 2))


def _l2_squared(coef: dict, area: Fraction) -> Fraction:
    total = Fraction(0)
    for (p, cp), (q, cq) in itertools.product(coef.items(), repeat=2):
        exps = [0, 0, 0]
        for k in p + q:
            exps[k] += 1
        total += cp * cq * _monomial_integral(area, exps)
    return total


def _linf(coef: dict) -> Fraction:
    # edge midpoints: lam_i = lam_j = 1/2
    cands = [abs(c) / 4 for c in coef.values()]
    # interior critical point of r(l1, l2) with l0 = 1 - l1 - l2
    c01, c02, c12 = coef[(0, 1)], coef[(0, 2)], coef[(1, 2)]
    # r = c01 l0 l1 + c02 l0 l2 + c12 l1 l2; grad in (l1, l2)
    m = [[-2 * c01, c12 - c01 - c02], [c12 - c01 - c02, -2 * c02]]
    try:
        l1, l2 = solve(m, [-c01, -c02])
    except SingularMatrixError:
        return max(cands)
    l0 = 1 - l1 - l2
    if l0 > 0 and l1 > 0 and l2 > 0:
        cands.append(abs(c01 * l0 * l1 + c02 * l0 * l2 + c12 * l1 * l2))
    return max(cands)


def _l1_signed(coef: dict, area: Fraction):
    """Exact L1 if the residual has one sign, else None."""
    vals = [v for v in coef.values() if v]
    if all(v >= 0 for v in vals) or all(v <= 0 for v in vals):
        # integral of lam_i lam_j over the triangle is area / 12
        return abs(sum(coef.values(), Fraction(0))) * area / 12
    return None


def _l1_subdivide(coef: dict, area: float, depth: int = 9) -> float:
    """Adaptive integral of |r| for a sign-changing residual.

    Each sub-triangle carries its six quadratic Bernstein coefficients; if they
    share a sign the integral is ``area/6 * sum``; otherwise split in four.
    """
    c = {k: float(v) for k, v in coef.items()}

    def r(l):
        return c[(0, 1)] * l[0] * l[1] + c[(0, 2)] * l[0] * l[2] + c[(1, 2)] * l[1] * l[2]

    def bern(a, b, e):
        # control values: vertices, then edge controls 2 r(mid) - (r(u)+r(v))/2
        ra, rb, re = r(a), r(b), r(e)
        mids = [(a, b), (b, e), (e, a)]
        ctrl = [2 * r([(x + y) / 2 for x, y in zip(u, v)]) - (r(u) + r(v)) / 2 for u, v in mids]
        return [ra, rb, re] + ctrl

    def rec(a, b, e, ar, lvl):
        bs = bern(a, b, e)
        if all(v >= 0 for v in bs) or all(v <= 0 for v in bs):
            return abs(sum(bs)) * ar / 6
        if lvl == 0:
            # centroid-weighted midpoint rule on the undecided leaf
            pts = [a, b, e] + [[(x + y) / 2 for x, y in zip(u, v)] for u, v in ((a, b), (b, e), (e, a))]
            return ar * sum(abs(r(p)) for p in pts[3:]) / 3
        ab = [(x + y) / 2 for x, y in zip(a, b)]
        be = [(x + y) / 2 for x, y in zip(b, e)]
        ea = [(x + y) / 2 for x, y in zip(e, a)]
        q = ar / 4
        return (rec(a, ab, ea, q, lvl - 1) + rec(ab, b, be, q, lvl - 1)
                + rec(ea, be, e, q, lvl - 1) + rec(ab, be, ea, q, lvl - 1))

    return rec([1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0], area, depth)


def _normalize_p(p):
    if p in (1, 2):
        return p
    if p == INF or p == math.inf or (isinstance(p, str) and p.lower() in ("inf", "infinity")):
        return INF
    if isinstance(p, str) and p in ("1", "2"):
        return int(p)
    raise InputError(f"p must be 1, 2 or inf, got {p!r}")


def _check_cover(points, cells) -> None:
    total = sum((simplex_volume([points[i] for i in c]) for c in cells), Fraction(0))
    hull = hull_volume(points)
    if total != hull:
        raise InputError(f"triangles cover area {total}, convex hull has area {hull}")
    for a, b in itertools.combinations(cells, 2):
        if _triangles_overlap([points[i] for i in a], [points[i] for i in b]):
            raise InputError("triangles overlap", witness=[list(a), list(b)])


def interp_error_exact(points, cells, f: PolyFunction, p):
    """Exact pieces of the norm: ``sum |r|`` (p=1), ``sum r^2`` (p=2) or ``max |r|`` (p=inf).

    Returns a Fraction, except for sign-changing L1 residuals (float).
    """
    p = _normalize_p(p)
    pts = [vec(q) for q in points]
    if len(pts[0]) != 2:
        raise InputError("interpolation error is computed for d = 2")
    _check_cover(pts, cells)
    acc = Fraction(0)
    for c in cells:
        tri = [pts[i] for i in c]
        coef = _pair_coefficients(f, tri)
        area = simplex_volume(tri)
        if p == INF:
            acc = max(acc, _linf(coef))
        elif p == 2:
            acc += _l2_squared(coef, area)
        else:
            exact = _l1_signed(coef, area)
            acc = acc + (exact if exact is not None else _l1_subdivide(coef, float(area)))
    return acc


def interp_error(T, f: PolyFunction, p, points=None) -> float:
    """L^p norm over the hull of ``f`` minus its piecewise-linear interpolant on ``T``.

    ``T`` is a :class:`CellComplex` or a list of index triples into ``points``.
    """
    if isinstance(T, CellComplex):
        points, cells = T.points.points, T.cells
    else:
        cells = [tuple(c) for c in T]
        if points is None:
            raise InputError("points are required when T is a list of cells")
        points = points.points if isinstance(points, PointSet) else points
    value = interp_error_exact(points, cells, f, p)
    if _normalize_p(p) == 2:
        return math.sqrt(value)
    return float(value)


@dataclass
class OptimalityReport:
    p: object
    table: list  # (cells, error)
    delaunay_index: int
    argmin: int
    delaunay_minimal: bool


def optimality_check(Q: QuadraticForm, X: PointSet, p, cap: int = 7, rel_tol: float = 1e-9) -> OptimalityReport:
    """Compare the Delaunay interpolation error of ``f = Q`` with every other triangulation."""
    if len(X) > cap:
        raise InputError(f"{len(X)} points exceeds the cap of {cap}")
    f = PolyFunction.from_form(Q)
    del_cells = delaunay(Q, X).cells
    tris = enumerate_triangulations(X, cap=max(cap, 8))
    table = [(t, interp_error(t, f, p, points=X)) for t in tris]
    errors = [e for _, e in table]
    best = min(errors)
    di = tris.index(tuple(del_cells))
    return OptimalityReport(
        _normalize_p(p), [([list(c) for c in t], e) for t, e in table], di,
        errors.index(best), errors[di] <= best * (1 + rel_tol),
    )


def lipschitz_graph(X0, u: Sequence, k) -> PointSet:
    """Graph points ``(x, u(x))``; spacelike for ``diag(1, .., 1, -1)`` when u is k-Lipschitz with k < 1."""
    pts = X0.points if isinstance(X0, PointSet) else [vec(p) for p in X0]
    labels = X0.labels if isinstance(X0, PointSet) else None
    k = to_fraction(k)
    if not 0 <= k < 1:
        raise InputError("Lipschitz bound must satisfy 0 <= k < 1")
    if len(u) != len(pts):
        raise InputError("one sample value per point is required")
    vals = [to_fraction(v) for v in u]
    for i, j in itertools.combinations(range(len(pts)), 2):
        dx = sub(pts[i], pts[j])
        n2 = sum((v * v for v in dx), Fraction(0))
        du = vals[i] - vals[j]
        # k < 1 already makes the graph strictly spacelike, so the bound itself may be attained
        if du * du > k * k * n2:
            raise InputError("samples violate the Lipschitz bound", witness=[i, j] if labels is None else [labels[i], labels[j]])
    coords = [tuple(p) + (v,) for p, v in zip(pts, vals)]
    return PointSet.from_coords(coords, labels)


def lipschitz_form(d: int) -> QuadraticForm:
    return QuadraticForm.diag([1] * (d - 1) + [-1])
