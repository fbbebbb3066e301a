"""Isometries, the degenerate symmetry group G, projective Moebius maps, rescaled limits.

Homogeneous coordinates on R^{d+2} carry the form
``Qhat(y, a, b) = Q(y) - a b``; a point x of R^d embeds as ``(x, Q(x), 1)``
and infinity is ``(0_d, 1, 0)``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .delaunay import delaunay, full_decomposition
from .exact import det, identity, inverse, matmul, matvec, to_fraction, transpose, vec
from .qball import BOUNDARY, INSIDE, OUTSIDE, QBall
from .qform import InputError, PointSet, PositionError, QuadraticForm, evaluate, inner

ISOMETRY = "isometry"
GROUP_G = "groupG"
MOEBIUS = "moebius"
INFINITY = "infinity"


class GroupValidationError(InputError):
    """Matrix does not belong to the claimed group."""


class BoundaryEscapeError(InputError):
    """A Moebius map sends a point onto the light cone of infinity."""


class LimitMismatchError(AssertionError):
    """Rescaled combinatorics disagree with the degenerate limit at the smallest t."""


def _matrix(m) -> tuple[tuple[Fraction, ...], ...]:
    return tuple(tuple(to_fraction(v) for v in row) for row in m)


def hat_matrix(Q: QuadraticForm) -> tuple[tuple[Fraction, ...], ...]:
    """Matrix of ``Qhat = Q - x_{d+1} x_{d+2}`` on R^{d+2}."""
    d = Q.dim
    half = Fraction(-1, 2)
    rows = [list(Q.matrix[i]) + [Fraction(0), Fraction(0)] for i in range(d)]
    rows.append([Fraction(0)] * d + [Fraction(0), half])
    rows.append([Fraction(0)] * d + [half, Fraction(0)])
    return _matrix(rows)


@dataclass(frozen=True)
class DegenerationSplit:
    """``R^d = V + U`` with ``Q = Q_V + Q_U`` block diagonal; V is the first m coordinates."""

    m: int
    q_v: QuadraticForm
    q_u: QuadraticForm

    @classmethod
    def from_form(cls, Q: QuadraticForm, m: int) -> "DegenerationSplit":
        d = Q.dim
        if not 0 < m < d:
            raise InputError(f"split dimension m={m} must lie strictly between 0 and {d}")
        A = Q.matrix
        if any(A[i][j] for i in range(m) for j in range(m, d)):
            raise InputError("form is not block diagonal for this split")
        q_v = QuadraticForm(tuple(row[:m] for row in A[:m]))
        q_u = QuadraticForm(tuple(row[m:] for row in A[m:]))
        return cls(m, q_v, q_u)

    @property
    def dim(self) -> int:
        return self.m + self.q_u.dim

    @property
    def full(self) -> QuadraticForm:
        d, m = self.dim, self.m
        return QuadraticForm(tuple(
            tuple(self.q_v.matrix[i][j] if i < m and j < m else
                  self.q_u.matrix[i - m][j - m] if i >= m and j >= m else Fraction(0) for j in range(d))
            for i in range(d)
        ))

    @property
    def degenerate(self) -> QuadraticForm:
        """``Q(y, z) = Q_V(y)``."""
        d, m = self.dim, self.m
        return QuadraticForm(tuple(
            tuple(self.q_v.matrix[i][j] if i < m and j < m else Fraction(0) for j in range(d)) for i in range(d)
        ))


def _preserves(M, A) -> bool:
    return matmul(matmul(transpose(M), A), M) == [list(r) for r in A]


@dataclass(frozen=True)
class GroupElement:
    kind: str
    form: QuadraticForm
    linear: tuple
    translation: tuple = ()
    split: DegenerationSplit | None = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "linear", _matrix(self.linear))
        object.__setattr__(self, "translation", vec(self.translation) if self.translation else ())
        d = self.form.dim
        L = self.linear
        if self.kind == MOEBIUS:
            if len(L) != d + 2 or any(len(r) != d + 2 for r in L):
                raise GroupValidationError(f"Moebius matrix must be {d + 2}x{d + 2}")
            if not _preserves(L, hat_matrix(self.form)):
                raise GroupValidationError("matrix does not preserve the extended form")
            return
        if len(L) != d or any(len(r) != d for r in L):
            raise GroupValidationError(f"linear part must be {d}x{d}")
        if not self.translation:
            object.__setattr__(self, "translation", tuple(Fraction(0) for _ in range(d)))
        if len(self.translation) != d:
            raise GroupValidationError("translation has the wrong dimension")
        if self.kind == ISOMETRY:
            if not _preserves(L, self.form.matrix):
                raise GroupValidationError("linear part is not in O(Q)", witness=[list(map(str, r)) for r in L])
        elif self.kind == GROUP_G:
            sp = self.split
            if sp is None:
                raise GroupValidationError("group G elements need a degeneration split")
            m = sp.m
            if self.form != sp.degenerate:
                raise GroupValidationError("group G acts for the degenerate form of its split")
            if any(L[i][j] for i in range(m) for j in range(m, d)):
                raise GroupValidationError("upper-right block must vanish")
            a_block = [row[:m] for row in L[:m]]
            c_block = [row[m:] for row in L[m:]]
            if not _preserves(a_block, sp.q_v.matrix):
                raise GroupValidationError("upper-left block is not in O(Q_V)")
            if not _preserves(c_block, sp.q_u.matrix):
                raise GroupValidationError("lower-right block is not in O(Q_U)")
            if det(L) == 0:
                # O(Q_U) of a zero form admits singular blocks
                raise GroupValidationError("linear part is singular")
        else:
            raise GroupValidationError(f"unknown group kind {self.kind!r}")

    def apply(self, x) -> tuple[Fraction, ...]:
        if self.kind == MOEBIUS:
            return moebius_point(self, x)
        return tuple(a + b for a, b in zip(matvec(self.linear, vec(x)), self.translation))

    def inverse(self) -> "GroupElement":
        Linv = inverse(self.linear)
        if self.kind == MOEBIUS:
            return GroupElement(MOEBIUS, self.form, Linv)
        t = tuple(-v for v in matvec(Linv, self.translation))
        return GroupElement(self.kind, self.form, Linv, t, self.split)

    def compose(self, other: "GroupElement") -> "GroupElement":
        """``self`` after ``other``."""
        if self.kind == MOEBIUS or other.kind == MOEBIUS:
            a, b = as_moebius(self), as_moebius(other)
            return GroupElement(MOEBIUS, self.form, matmul(a.linear, b.linear))
        L = matmul(self.linear, other.linear)
        t = tuple(x + y for x, y in zip(matvec(self.linear, other.translation), self.translation))
        return GroupElement(self.kind, self.form, L, t, self.split)


def isometry(Q: QuadraticForm, M, translation=()) -> GroupElement:
    return GroupElement(ISOMETRY, Q, M, translation)


def minkowski_boost(s) -> tuple:
    """Rational element of O(1,1); ``s`` is any rational other than +-1."""
    s = to_fraction(s)
    if s * s == 1:
        raise InputError("boost parameter must differ from +-1")
    den = 1 - s * s
    c, h = (1 + s * s) / den, 2 * s / den
    return ((c, h), (h, c))


def euclidean_rotation(m) -> tuple:
    """Rational rotation with ``cos = (1 - m^2)/(1 + m^2)``, ``sin = 2m/(1 + m^2)``."""
    m = to_fraction(m)
    den = 1 + m * m
    c, s = (1 - m * m) / den, 2 * m / den
    return ((c, -s), (s, c))


def group_g_element(split: DegenerationSplit, a_block, b_block, c_block, translation=()) -> GroupElement:
    m, d = split.m, split.dim
    L = [[Fraction(0)] * d for _ in range(d)]
    for i in range(m):
        for j in range(m):
            L[i][j] = to_fraction(a_block[i][j])
    for i in range(d - m):
        for j in range(m):
            L[m + i][j] = to_fraction(b_block[i][j])
        for j in range(d - m):
            L[m + i][m + j] = to_fraction(c_block[i][j])
    return GroupElement(GROUP_G, split.degenerate, L, translation, split)


def apply_affine(g: GroupElement, X: PointSet) -> PointSet:
    if g.kind not in (ISOMETRY, GROUP_G):
        raise InputError("apply_affine needs an isometry or a group G element")
    return X.with_points(g.apply(p) for p in X)


def rescale(t, X: PointSet, split: DegenerationSplit) -> PointSet:
    """``L_t(y, z) = (y, z / t)``."""
    t = to_fraction(t)
    if t <= 0:
        raise InputError("rescaling parameter must be positive")
    m = split.m
    return X.with_points(tuple(p[:m]) + tuple(v / t for v in p[m:]) for p in X)


# --- projective model -------------------------------------------------------

def hat(Q: QuadraticForm, x) -> tuple[Fraction, ...]:
    """Homogeneous representative; ``INFINITY`` maps to ``(0_d, 1, 0)``."""
    if isinstance(x, str) and x == INFINITY:
        return tuple(Fraction(0) for _ in range(Q.dim)) + (Fraction(1), Fraction(0))
    x = vec(x)
    return x + (evaluate(Q, x), Fraction(1))


def hat_inner(Q: QuadraticForm, u, v) -> Fraction:
    H = hat_matrix(Q)
    return sum((a * b for a, b in zip(u, matvec(H, v))), Fraction(0))


def embed_affine(Q: QuadraticForm, M, translation=()) -> GroupElement:
    """Moebius matrix of ``x -> M x + c`` for ``M`` in O(Q)."""
    d = Q.dim
    M = _matrix(M)
    c = vec(translation) if translation else tuple(Fraction(0) for _ in range(d))
    AM = matmul(Q.matrix, M)
    row = [2 * sum(c[k] * AM[k][j] for k in range(d)) for j in range(d)]
    L = [list(M[i]) + [Fraction(0), c[i]] for i in range(d)]
    L.append(row + [Fraction(1), evaluate(Q, c)])
    L.append([Fraction(0)] * (d + 1) + [Fraction(1)])
    return GroupElement(MOEBIUS, Q, L)


def as_moebius(g: GroupElement) -> GroupElement:
    if g.kind == MOEBIUS:
        return g
    if g.kind != ISOMETRY:
        raise InputError("only isometries embed as Moebius maps")
    return embed_affine(g.form, g.linear, g.translation)


def dilation(Q: QuadraticForm, lam) -> GroupElement:
    """``x -> lam x`` as ``diag(1, .., 1, lam, 1/lam)``."""
    lam = to_fraction(lam)
    if lam == 0:
        raise InputError("dilation factor must be nonzero")
    d = Q.dim
    diag = [Fraction(1)] * d + [lam, 1 / lam]
    return GroupElement(MOEBIUS, Q, [[diag[i] if i == j else Fraction(0) for j in range(d + 2)] for i in range(d + 2)])


def inversion(Q: QuadraticForm) -> GroupElement:
    """Swap of the last two coordinates: ``x -> x / Q(x)``."""
    d = Q.dim
    L = [list(r) for r in identity(d + 2)]
    L[d][d] = L[d + 1][d + 1] = Fraction(0)
    L[d][d + 1] = L[d + 1][d] = Fraction(1)
    return GroupElement(MOEBIUS, Q, L)


def special_conformal(Q: QuadraticForm, c) -> GroupElement:
    """Inversion, translation by ``c``, inversion.  Sends ``(-c, 1, Q(c))`` to infinity."""
    J = inversion(Q)
    return J.compose(embed_affine(Q, identity(Q.dim), c)).compose(J)


def steer_infinity(Q: QuadraticForm, z) -> GroupElement:
    """A special conformal map whose inverse sends infinity to ``z`` (needs ``Q(z) != 0``)."""
    z = vec(z)
    qz = evaluate(Q, z)
    if qz == 0:
        raise InputError("target point lies on the light cone of the origin")
    return special_conformal(Q, tuple(-v / qz for v in z))


def preimage_of_infinity(g: GroupElement) -> tuple[Fraction, ...]:
    return matvec(inverse(g.linear), hat(g.form, INFINITY))


def moebius_point(g: GroupElement, x) -> tuple[Fraction, ...]:
    Q = g.form
    y = matvec(g.linear, hat(Q, x))
    d = Q.dim
    if y[d + 1] == 0:
        raise BoundaryEscapeError("point is sent onto the light cone of infinity", witness=[list(map(str, vec(x)))])
    z = tuple(v / y[d + 1] for v in y[:d])
    if y[d] / y[d + 1] != evaluate(Q, z):
        raise AssertionError("image left the graph of Q")
    return z


def moebius_apply(g: GroupElement, X: PointSet) -> PointSet:
    if g.kind != MOEBIUS:
        g = as_moebius(g)
    out = []
    for label, p in zip(X.labels, X.points):
        try:
            out.append(moebius_point(g, p))
        except BoundaryEscapeError as exc:
            raise BoundaryEscapeError(f"point {label!r} escapes to infinity", witness=[label]) from exc
    return X.with_points(out)


def lightcone_test(Q: QuadraticForm, a, b) -> bool:
    """True iff the homogeneous representatives are Qhat-orthogonal."""
    return hat_inner(Q, hat(Q, a), hat(Q, b)) == 0


def sphere_functional(ball: QBall, w) -> Fraction:
    """``phi(y) - a + D' b``: the hyperplane of the ball's sphere, at homogeneous ``w``."""
    d = ball.form.dim
    return sum((p * v for p, v in zip(ball.phi, w[:d])), Fraction(0)) - w[d] + ball.dprime * w[d + 1]


def inside_via_projective_line(Q: QuadraticForm, ball: QBall, x) -> str:
    """Containment read off the line through ``x`` and infinity.

    The line ``t xhat + s inf`` meets the sphere hyperplane at a point whose
    Qhat value is negative exactly when ``x`` lies inside the ball.
    """
    xh = hat(Q, x)
    inf = hat(Q, INFINITY)
    # sphere_functional is linear: l(xh) + s l(inf) = 0 with l(inf) = -1
    s = sphere_functional(ball, xh) / -sphere_functional(ball, inf)
    p = tuple(a + s * b for a, b in zip(xh, inf))
    v = hat_inner(Q, p, p)
    if v < 0:
        return INSIDE
    if v > 0:
        return OUTSIDE
    return BOUNDARY


def avoidance_pattern(Q: QuadraticForm, X: PointSet, balls: Sequence[QBall], w):
    """Signs relative to infinity of the sphere and light-cone functionals at ``w``.

    ``w`` is homogeneous, so the pattern is normalized by the sign of the
    light-cone functional of the first point.  Returns a list of booleans
    (True = same side as infinity) or None if ``w`` lies on one of the loci.
    """
    cones = [hat_inner(Q, w, hat(Q, p)) for p in X]
    spheres = [sphere_functional(b, w) for b in balls]
    if any(v == 0 for v in cones + spheres):
        return None
    s = -1 if cones[0] > 0 else 1
    # at infinity every functional is negative
    return [s * v < 0 for v in cones + spheres]


@dataclass
class MoebiusReport:
    combinatorics_equal: bool
    condition_holds: bool | None
    path_ends_at_g: bool | None
    cells_before: list
    cells_after: list
    samples: list = field(default_factory=list)


def _projectively_equal(a, b) -> bool:
    fa = [v for row in a for v in row]
    fb = [v for row in b for v in row]
    k = next(i for i, v in enumerate(fa) if v != 0)
    if fb[k] == 0:
        return False
    r = fb[k] / fa[k]
    return all(y == r * x for x, y in zip(fa, fb))


def moebius_delaunay_check(Q: QuadraticForm, X: PointSet, g: GroupElement, path: Sequence[GroupElement] | None = None) -> MoebiusReport:
    """Compare Delaunay combinatorics before and after ``g``.

    With a ``path`` of group samples (ideally starting at the identity and
    ending at ``g``) the avoidance condition is evaluated at every sample:
    the preimage of infinity must stay on the side of infinity of every empty
    and full sphere and of every light cone of a point of X.
    """
    g = as_moebius(g)
    before = delaunay(Q, X)
    after = delaunay(Q, moebius_apply(g, X))
    report = MoebiusReport(before.cells == after.cells, None, None, [list(c) for c in before.cells], [list(c) for c in after.cells])
    if path is not None:
        balls = list(before.balls) + list(full_decomposition(Q, X).balls)
        ok = True
        for h in path:
            pattern = avoidance_pattern(Q, X, balls, preimage_of_infinity(as_moebius(h)))
            good = pattern is not None and all(pattern)
            report.samples.append(good)
            ok = ok and good
        report.condition_holds = ok
        report.path_ends_at_g = bool(path) and _projectively_equal(as_moebius(path[-1]).linear, g.linear)
    return report


# --- rescaled limits --------------------------------------------------------

@dataclass
class LimitReport:
    limit_cells: list
    per_t: list  # dicts with t, valid, cells, match
    threshold: Fraction | None


def limit_harness(Q: QuadraticForm, base: Sequence, velocities: Sequence, t_values: Sequence, m: int = 1) -> LimitReport:
    """Delaunay combinatorics along ``p_k(t) = (y_k, t v_k)`` against the degenerate limit.

    The limit set ``{(y_k, v_k)}`` is triangulated for the degenerate form
    ``Q_V(y)``.  ``threshold`` is the largest sampled t such that every sampled
    t' <= t matches; positions that are invalid at some t count as mismatches.
    """
    split = DegenerationSplit.from_form(Q, m)
    ts = [to_fraction(t) for t in t_values]
    if any(t <= 0 for t in ts) or any(a <= b for a, b in zip(ts, ts[1:])):
        raise InputError("t_values must be positive and strictly decreasing")
    if len(base) != len(velocities):
        raise InputError("base and velocities differ in length")
    limit_pts = [vec(y) + vec(v) for y, v in zip(base, velocities)]
    X = PointSet.from_coords(limit_pts)
    limit = delaunay(split.degenerate, X)
    rows = []
    for t in ts:
        Xt = X.with_points(vec(y) + tuple(t * c for c in vec(v)) for y, v in zip(base, velocities))
        try:
            cells = delaunay(Q, Xt).cells
            rows.append({"t": t, "valid": True, "cells": [list(c) for c in cells], "match": cells == limit.cells})
        except PositionError as exc:
            rows.append({"t": t, "valid": False, "cells": None, "match": False, "reason": str(exc)})
    threshold = None
    for row in reversed(rows):
        if not row["match"]:
            break
        threshold = row["t"]
    if threshold is None:
        raise LimitMismatchError(f"combinatorics differ from the degenerate limit at t = {ts[-1]}")
    return LimitReport([list(c) for c in limit.cells], rows, threshold)
