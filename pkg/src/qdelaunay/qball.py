"""Q-balls ``{x : Q(x) <= phi(x) + D'}`` and exact containment.

The functional form ``(phi, D')`` is canonical and valid for every signature.
A center/radius view ``Q(x - p) <= D`` exists only for non-degenerate forms;
there ``phi = 2 A p`` and ``D' = D - Q(p)``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .exact import SingularMatrixError, det, dot, matvec, solve, sub, to_fraction, vec, inverse
from .qform import QuadraticForm, UnsupportedError, evaluate

INSIDE = "inside"
BOUNDARY = "boundary"
OUTSIDE = "outside"


class DegenerateSimplexError(SingularMatrixError):
    """The simplex vertices are affinely dependent."""


@dataclass(frozen=True)
class QBall:
    form: QuadraticForm
    phi: tuple[Fraction, ...]
    dprime: Fraction

    def __post_init__(self):
        object.__setattr__(self, "phi", vec(self.phi))
        object.__setattr__(self, "dprime", to_fraction(self.dprime))
        if len(self.phi) != self.form.dim:
            raise ValueError("phi has the wrong dimension")

    def value(self, x) -> Fraction:
        """``Q(x) - phi(x) - D'``: negative inside, zero on the sphere."""
        return evaluate(self.form, x) - dot(self.phi, x) - self.dprime


@dataclass(frozen=True)
class CenterForm:
    center: tuple[Fraction, ...]
    radius_sq: Fraction


def circumball(Q: QuadraticForm, simplex: Sequence[Sequence]) -> QBall:
    """The unique Q-ball whose sphere passes through the ``d+1`` vertices."""
    d = Q.dim
    if len(simplex) != d + 1:
        raise ValueError(f"a simplex in R^{d} needs {d + 1} vertices, got {len(simplex)}")
    rows = [list(p) + [1] for p in simplex]
    rhs = [evaluate(Q, p) for p in simplex]
    try:
        sol = solve(rows, rhs)
    except SingularMatrixError as exc:
        raise DegenerateSimplexError("simplex vertices are affinely dependent") from exc
    return QBall(Q, sol[:d], sol[d])


def contains(ball: QBall, x) -> str:
    v = ball.value(x)
    if v < 0:
        return INSIDE
    if v > 0:
        return OUTSIDE
    return BOUNDARY


def center_form(ball: QBall) -> CenterForm:
    Q = ball.form
    if Q.is_degenerate:
        raise UnsupportedError("degenerate Q-balls have no center")
    p = tuple(c / 2 for c in matvec(inverse(Q.matrix), ball.phi))
    return CenterForm(p, ball.dprime + evaluate(Q, p))


def from_center(Q: QuadraticForm, center: Sequence, radius_sq) -> QBall:
    """Expand ``Q(x - p) <= D`` into functional form."""
    p = vec(center)
    phi = tuple(2 * v for v in matvec(Q.matrix, p))
    return QBall(Q, phi, to_fraction(radius_sq) - evaluate(Q, p))


def in_sphere_sign(Q: QuadraticForm, simplex: Sequence[Sequence], query) -> int:
    """Sign of the lifted in-sphere determinant, normalized so that -1 means inside.

    The determinant with rows ``(x_i, Q(x_i), 1)`` and the query row equals,
    up to the simplex orientation, ``-(Q(q) - phi(q) - D')`` times the affine
    determinant of the simplex.
    """
    d = Q.dim
    if len(simplex) != d + 1:
        raise ValueError(f"a simplex in R^{d} needs {d + 1} vertices")
    orient = det([list(p) + [1] for p in simplex])
    if orient == 0:
        raise DegenerateSimplexError("simplex vertices are affinely dependent")
    lifted = det([list(p) + [evaluate(Q, p), 1] for p in list(simplex) + [query]])
    # column-reduce the Q column to Q(x) - phi(x) - D'; only the query row survives,
    # in position (d+1, d), so lifted = -orient * (Q(q) - phi(q) - D')
    s = -lifted * orient
    return (s > 0) - (s < 0)
