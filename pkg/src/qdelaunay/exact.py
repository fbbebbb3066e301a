"""Exact rational linear algebra on small dense matrices.

Everything here works on lists of :class:`fractions.Fraction` (ints are
accepted and promoted).  Sizes never exceed 6x6 in this package, so plain
Gaussian elimination is used throughout.
"""
from __future__ import annotations

from decimal import Decimal
from fractions import Fraction
from typing import Sequence

Vector = tuple  # tuple[Fraction, ...]


class SingularMatrixError(ValueError):
    """Raised when an exact linear solve meets a singular system."""


def to_fraction(value) -> Fraction:
    """Parse ``value`` as an exact rational.

    Strings may be integers, decimals (``"0.125"``) or ratios (``"3/8"``).
    Floats are read through their shortest repr, i.e. as exact decimals.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not coordinates")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        return Fraction(Decimal(repr(value)))
    if isinstance(value, Decimal):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"cannot interpret {value!r} as a rational number")


def vec(values) -> Vector:
    return tuple(to_fraction(v) for v in values)


def sub(x: Sequence, y: Sequence) -> Vector:
    return tuple(a - b for a, b in zip(x, y))


def add(x: Sequence, y: Sequence) -> Vector:
    return tuple(a + b for a, b in zip(x, y))


def scale(c, x: Sequence) -> Vector:
    return tuple(c * a for a in x)


def dot(x: Sequence, y: Sequence):
    return sum((a * b for a, b in zip(x, y)), Fraction(0))


def matvec(m: Sequence[Sequence], x: Sequence) -> Vector:
    return tuple(dot(row, x) for row in m)


def matmul(a: Sequence[Sequence], b: Sequence[Sequence]) -> list[list[Fraction]]:
    cols = list(zip(*b))
    return [[dot(row, col) for col in cols] for row in a]


def transpose(m: Sequence[Sequence]) -> list[list]:
    return [list(col) for col in zip(*m)]


def identity(n: int) -> list[list[Fraction]]:
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def det(m: Sequence[Sequence]) -> Fraction:
    a = [[to_fraction(v) for v in row] for row in m]
    n = len(a)
    sign = 1
    result = Fraction(1)
    for k in range(n):
        pivot = next((i for i in range(k, n) if a[i][k] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != k:
            a[k], a[pivot] = a[pivot], a[k]
            sign = -sign
        pk = a[k][k]
        result *= pk
        for i in range(k + 1, n):
            f = a[i][k] / pk
            if f:
                row_i, row_k = a[i], a[k]
                for j in range(k + 1, n):
                    row_i[j] -= f * row_k[j]
    return sign * result


def solve(m: Sequence[Sequence], b: Sequence) -> Vector:
    """Solve ``m x = b`` exactly; raise :class:`SingularMatrixError` if singular."""
    n = len(m)
    a = [[to_fraction(v) for v in row] + [to_fraction(b[i])] for i, row in enumerate(m)]
    for k in range(n):
        pivot = next((i for i in range(k, n) if a[i][k] != 0), None)
        if pivot is None:
            raise SingularMatrixError("singular linear system")
        a[k], a[pivot] = a[pivot], a[k]
        pk = a[k][k]
        for i in range(n):
            if i != k and a[i][k] != 0:
                f = a[i][k] / pk
                row_i, row_k = a[i], a[k]
                for j in range(k, n + 1):
                    row_i[j] -= f * row_k[j]
    return tuple(a[i][n] / a[i][i] for i in range(n))


def inverse(m: Sequence[Sequence]) -> list[list[Fraction]]:
    n = len(m)
    cols = [solve(m, [int(i == j) for i in range(n)]) for j in range(n)]
    return transpose(cols)


def rank(rows: Sequence[Sequence]) -> int:
    a = [[to_fraction(v) for v in row] for row in rows]
    if not a:
        return 0
    r = 0
    ncols = len(a[0])
    for c in range(ncols):
        pivot = next((i for i in range(r, len(a)) if a[i][c] != 0), None)
        if pivot is None:
            continue
        a[r], a[pivot] = a[pivot], a[r]
        for i in range(r + 1, len(a)):
            if a[i][c]:
                f = a[i][c] / a[r][c]
                for j in range(c, ncols):
                    a[i][j] -= f * a[r][j]
        r += 1
        if r == len(a):
            break
    return r


def null_vector(rows: Sequence[Sequence]) -> Vector | None:
    """Return one nonzero vector orthogonal to every row, or ``None``."""
    a = [[to_fraction(v) for v in row] for row in rows]
    ncols = len(a[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, len(a)) if a[i][c] != 0), None)
        if pivot is None:
            continue
        a[r], a[pivot] = a[pivot], a[r]
        inv = 1 / a[r][c]
        a[r] = [v * inv for v in a[r]]
        for i in range(len(a)):
            if i != r and a[i][c]:
                f = a[i][c]
                a[i] = [vi - f * vr for vi, vr in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == len(a):
            break
    free = [c for c in range(ncols) if c not in pivots]
    if not free:
        return None
    f = free[0]
    x = [Fraction(0)] * ncols
    x[f] = Fraction(1)
    for i, c in enumerate(pivots):
        x[c] = -a[i][f]
    return tuple(x)


def hyperplane_normal(points: Sequence[Sequence]) -> Vector:
    """Normal of the hyperplane through ``len(p0)`` points in general position.

    Computed as the generalized cross product of the edge vectors from the
    first point, so the result is exact and nonzero iff the points are
    affinely independent.
    """
    p0 = points[0]
    edges = [sub(p, p0) for p in points[1:]]
    dim = len(p0)
    normal = []
    for i in range(dim):
        minor = [[e[j] for j in range(dim) if j != i] for e in edges]
        normal.append((-1) ** i * det(minor) if minor else Fraction(1))
    return tuple(normal)


def orientation(points: Sequence[Sequence]) -> int:
    """Sign of det[[p_1 - p_0], ..., [p_d - p_0]] for d+1 points in R^d."""
    p0 = points[0]
    d = det([sub(p, p0) for p in points[1:]])
    return (d > 0) - (d < 0)


def is_finite_decimal(x: Fraction) -> bool:
    den = x.denominator
    for p in (2, 5):
        while den % p == 0:
            den //= p
    return den == 1


def format_rational(x: Fraction) -> str:
    """Exact decimal string when possible, else ``"num/den"``."""
    x = to_fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    if not is_finite_decimal(x):
        return f"{x.numerator}/{x.denominator}"
    den = x.denominator
    places = 0
    while (10 ** places) % den:
        places += 1
    scaled = x.numerator * (10 ** places // den)
    sign = "-" if scaled < 0 else ""
    digits = str(abs(scaled)).rjust(places + 1, "0")
    return f"{sign}{digits[:-places]}.{digits[-places:]}"
