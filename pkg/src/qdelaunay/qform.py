"""Quadratic forms, labeled point sets and the position predicates.

A :class:`QuadraticForm` stores an exact symmetric rational matrix ``A`` and
evaluates ``Q(x) = x^T A x``.  Spacelike and generic position are decided by
exact sign tests; violations are reported with a witness instead of being
perturbed away.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .exact import det, sub, to_fraction, vec

SPACELIKE = "spacelike"
TIMELIKE = "timelike"
LIGHTLIKE = "lightlike"


class InputError(ValueError):
    """Invalid user input.  ``witness`` carries the offending data, if any."""

    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


class PositionError(InputError):
    """A point set is not in spacelike or generic position."""


class DimensionError(InputError):
    pass


class UnsupportedError(ValueError):
    """Operation undefined for this kind of form (e.g. centers of degenerate balls)."""


def _signature(matrix: Sequence[Sequence[Fraction]]) -> tuple[int, int, int]:
    # symmetric Gaussian elimination (congruence), counting pivot signs
    a = [list(row) for row in matrix]
    n = len(a)
    pos = neg = 0
    k = 0
    while k < n:
        piv = next((i for i in range(k, n) if a[i][i] != 0), None)
        if piv is None:
            pair = next(((i, j) for i in range(k, n) for j in range(i + 1, n) if a[i][j] != 0), None)
            if pair is None:
                break
            i, j = pair
            # row/col i += row/col j makes a[i][i] = 2 a[i][j] != 0
            for c in range(n):
                a[i][c] += a[j][c]
            for r in range(n):
                a[r][i] += a[r][j]
            piv = i
        if piv != k:
            a[k], a[piv] = a[piv], a[k]
            for row in a:
                row[k], row[piv] = row[piv], row[k]
        p = a[k][k]
        if p > 0:
            pos += 1
        else:
            neg += 1
        for i in range(k + 1, n):
            f = a[i][k] / p
            if f:
                for c in range(k, n):
                    a[i][c] -= f * a[k][c]
        for i in range(k + 1, n):
            a[k][i] = Fraction(0)
            a[i][k] = Fraction(0)
        k += 1
    return pos, neg, n - pos - neg


@dataclass(frozen=True)
class QuadraticForm:
    """Symmetric bilinear form on R^d with exact rational matrix."""

    matrix: tuple[tuple[Fraction, ...], ...]
    name: str | None = field(default=None, compare=False)

    def __post_init__(self):
        m = tuple(tuple(to_fraction(v) for v in row) for row in self.matrix)
        d = len(m)
        if d < 1 or any(len(row) != d for row in m):
            raise DimensionError("quadratic form matrix must be square and nonempty")
        for i in range(d):
            for j in range(i):
                if m[i][j] != m[j][i]:
                    raise InputError(f"matrix not symmetric at ({i},{j})", witness=[i, j])
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "_sig", _signature(m))

    @classmethod
    def diag(cls, entries: Iterable, name: str | None = None) -> "QuadraticForm":
        e = [to_fraction(v) for v in entries]
        n = len(e)
        return cls(tuple(tuple(e[i] if i == j else Fraction(0) for j in range(n)) for i in range(n)), name)

    @classmethod
    def euclidean(cls, d: int = 2) -> "QuadraticForm":
        return cls.diag([1] * d, name="euclidean")

    @classmethod
    def minkowski(cls, d: int = 2) -> "QuadraticForm":
        return cls.diag([1] * (d - 1) + [-1], name="minkowski")

    @classmethod
    def degenerate(cls, d: int = 2) -> "QuadraticForm":
        return cls.diag([1] * (d - 1) + [0], name="degenerate")

    @property
    def dim(self) -> int:
        return len(self.matrix)

    @property
    def signature(self) -> tuple[int, int, int]:
        return self._sig

    @property
    def is_degenerate(self) -> bool:
        return self._sig[2] > 0

    @property
    def is_definite(self) -> bool:
        return self._sig[0] == self.dim

    def kind(self) -> str:
        """One of ``"definite"``, ``"indefinite"`` or ``"degenerate"``."""
        if self.is_degenerate:
            return "degenerate"
        return "definite" if self._sig[1] == 0 else "indefinite"

    def _check(self, x) -> None:
        if len(x) != self.dim:
            raise DimensionError(f"point of dimension {len(x)} for a form of dimension {self.dim}")

    def __call__(self, x) -> Fraction:
        return evaluate(self, x)


def evaluate(Q: QuadraticForm, x) -> Fraction:
    """Return ``x^T A x`` exactly."""
    Q._check(x)
    m = Q.matrix
    total = Fraction(0)
    for i, xi in enumerate(x):
        if xi:
            row = m[i]
            total += xi * sum((row[j] * xj for j, xj in enumerate(x) if row[j]), Fraction(0))
    return total


def inner(Q: QuadraticForm, x, y) -> Fraction:
    """Return ``x^T A y`` exactly."""
    Q._check(x)
    Q._check(y)
    m = Q.matrix
    total = Fraction(0)
    for i, xi in enumerate(x):
        if xi:
            row = m[i]
            total += xi * sum((row[j] * yj for j, yj in enumerate(y) if row[j]), Fraction(0))
    return total


def classify_displacement(Q: QuadraticForm, x, y) -> str:
    if tuple(x) == tuple(y):
        raise InputError("displacement between identical points is not classified", witness=[list(x)])
    v = evaluate(Q, sub(x, y))
    if v > 0:
        return SPACELIKE
    if v < 0:
        return TIMELIKE
    return LIGHTLIKE


@dataclass(frozen=True)
class PointSet:
    """Ordered, labeled points with exact rational coordinates."""

    points: tuple[tuple[Fraction, ...], ...]
    labels: tuple[str, ...]

    def __post_init__(self):
        pts = tuple(vec(p) for p in self.points)
        labels = tuple(str(l) for l in self.labels)
        if len(labels) != len(pts):
            raise InputError("number of labels does not match number of points")
        if len(set(labels)) != len(labels):
            dup = next(l for l in labels if labels.count(l) > 1)
            raise InputError(f"duplicate label {dup!r}", witness=[dup])
        if pts:
            d = len(pts[0])
            bad = next((labels[i] for i, p in enumerate(pts) if len(p) != d), None)
            if bad is not None:
                raise DimensionError(f"point {bad!r} has the wrong dimension", witness=[bad])
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "labels", labels)

    @classmethod
    def from_coords(cls, coords: Iterable[Sequence], labels: Iterable[str] | None = None) -> "PointSet":
        coords = [vec(c) for c in coords]
        if labels is None:
            labels = [f"p{i}" for i in range(len(coords))]
        return cls(tuple(coords), tuple(labels))

    @property
    def dim(self) -> int:
        return len(self.points[0]) if self.points else 0

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def __getitem__(self, i):
        return self.points[i]

    def index(self, label: str) -> int:
        return self.labels.index(label)

    def with_points(self, points: Iterable[Sequence]) -> "PointSet":
        return PointSet(tuple(vec(p) for p in points), self.labels)


def _as_pointset(X) -> PointSet:
    return X if isinstance(X, PointSet) else PointSet.from_coords(X)


def check_duplicates(X: PointSet) -> None:
    seen: dict = {}
    for label, p in zip(X.labels, X.points):
        if p in seen:
            raise InputError(f"duplicate point {label!r} (same as {seen[p]!r})", witness=[seen[p], label])
        seen[p] = label


def is_spacelike_position(Q: QuadraticForm, X) -> tuple[bool, tuple[int, int] | None]:
    """``(True, None)`` if all pairs are spacelike, else ``(False, (i, j))``."""
    X = _as_pointset(X)
    if len(X) < 1:
        raise InputError("empty point set")
    check_duplicates(X)
    for i, j in itertools.combinations(range(len(X)), 2):
        if evaluate(Q, sub(X[i], X[j])) <= 0:
            return False, (i, j)
    return True, None


def affine_det(points: Sequence[Sequence]) -> Fraction:
    """Determinant with rows (x_i, 1): zero iff the d+1 points are affinely dependent."""
    return det([list(p) + [1] for p in points])


def lifted_det(Q: QuadraticForm, points: Sequence[Sequence]) -> Fraction:
    """Determinant with rows (x_i, Q(x_i), 1): zero iff d+2 points share a Q-sphere
    (or are affinely degenerate)."""
    return det([list(p) + [evaluate(Q, p), 1] for p in points])


def is_generic_position(Q: QuadraticForm, X) -> tuple[bool, tuple[int, ...] | None]:
    """Exact genericity test; the witness is the first violating index subset."""
    X = _as_pointset(X)
    d = X.dim
    n = len(X)
    check_duplicates(X)
    for sub_idx in itertools.combinations(range(n), d + 1):
        if affine_det([X[i] for i in sub_idx]) == 0:
            return False, sub_idx
    lifts = [evaluate(Q, p) for p in X]
    for sub_idx in itertools.combinations(range(n), d + 2):
        rows = [list(X[i]) + [lifts[i], 1] for i in sub_idx]
        if det(rows) == 0:
            return False, sub_idx
    return True, None


def require_position(Q: QuadraticForm, X: PointSet, generic: bool = True) -> None:
    """Raise :class:`PositionError` with a labeled witness on any violation."""
    if X.dim != Q.dim:
        raise DimensionError(f"point dimension {X.dim} does not match form dimension {Q.dim}")
    ok, pair = is_spacelike_position(Q, X)
    if not ok:
        i, j = pair
        raise PositionError(
            f"points {X.labels[i]!r} and {X.labels[j]!r} are not in spacelike position",
            witness=[X.labels[i], X.labels[j]],
        )
    if generic:
        ok, subset = is_generic_position(Q, X)
        if not ok:
            raise PositionError(
                "points not in generic position: " + ", ".join(X.labels[i] for i in subset),
                witness=[X.labels[i] for i in subset],
            )
