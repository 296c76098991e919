"""Exact integer and rational linear algebra in dimension 2 and 3.

Vectors are plain tuples of Python ints and matrices are sequences of rows.
Nothing in here ever touches floating point.
"""

from __future__ import annotations

from fractions import Fraction
from functools import reduce
from itertools import combinations
from math import gcd
from typing import Sequence

from .errors import DegenerateInputError, DimensionError, SingularMatrixError

Vector = tuple[int, ...]
Matrix = Sequence[Sequence[int]]


def as_vector(v) -> Vector:
    out = tuple(int(x) for x in v)
    for x, y in zip(out, v):
        if x != y:
            raise DegenerateInputError(f"non-integral coordinate in {tuple(v)!r}")
    return out


def _check_square(m: Matrix) -> int:
    n = len(m)
    if n == 0 or any(len(row) != n for row in m):
        raise DimensionError(f"expected a square matrix, got {n} rows of lengths "
                             f"{[len(r) for r in m]}")
    return n


def _det(m) -> int:
    n = len(m)
    if n == 1:
        return m[0][0]
    if n == 2:
        return m[0][0] * m[1][1] - m[0][1] * m[1][0]
    total = 0
    for j in range(n):
        if m[0][j] == 0:
            continue
        minor = [row[:j] + row[j + 1:] for row in m[1:]]
        sign = -1 if j % 2 else 1
        total += sign * m[0][j] * _det(minor)
    return total


def determinant(m: Matrix) -> int:
    """Determinant by cofactor expansion along the first row."""
    _check_square(m)
    return _det([list(row) for row in m])


def primitivize(v) -> Vector:
    """Divide ``v`` by the gcd of its coordinates."""
    v = as_vector(v)
    g = reduce(gcd, v, 0)
    if g == 0:
        raise DegenerateInputError("cannot primitivize the zero vector")
    return tuple(x // g for x in v)


def is_primitive(v) -> bool:
    return reduce(gcd, v, 0) == 1


def dot(u, v):
    return sum(a * b for a, b in zip(u, v))


def cross(u, v) -> Vector:
    return (u[1] * v[2] - u[2] * v[1],
            u[2] * v[0] - u[0] * v[2],
            u[0] * v[1] - u[1] * v[0])


def transpose(m: Matrix) -> list[list[int]]:
    return [list(col) for col in zip(*m)]


def adjugate(m: Matrix) -> list[list[int]]:
    """Integer adjugate, so that ``adj(m) @ m == det(m) * I``."""
    n = _check_square(m)
    if n == 1:
        return [[1]]
    rows = [list(r) for r in m]
    cof = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            minor = [r[:j] + r[j + 1:] for k, r in enumerate(rows) if k != i]
            cof[i][j] = (-1) ** (i + j) * _det(minor)
    return transpose(cof)


def solve_rational(m: Matrix, rhs) -> tuple[Fraction, ...]:
    """Solve ``m @ x == rhs`` exactly.

    Raises SingularMatrixError when ``m`` is not invertible over Q.
    """
    n = _check_square(m)
    if len(rhs) != n:
        raise DimensionError(f"rhs has length {len(rhs)}, expected {n}")
    d = determinant(m)
    if d == 0:
        raise SingularMatrixError("matrix is singular")
    adj = adjugate(m)
    rhs = [Fraction(x) for x in rhs]
    return tuple(sum((a * b for a, b in zip(row, rhs)), Fraction(0)) / d for row in adj)


def mat_vec(m: Matrix, v) -> tuple:
    return tuple(dot(row, v) for row in m)


def rank(m: Matrix) -> int:
    """Rank over Q via fraction-free elimination (tiny matrices only)."""
    rows = [[Fraction(x) for x in r] for r in m]
    if not rows:
        return 0
    ncols = len(rows[0])
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c] / rows[r][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        r += 1
    return r


def maximal_minor_gcd(m: Matrix, k: int | None = None) -> int:
    """gcd of all k x k minors of a k-row integer matrix.

    For primitive-ray faces this is the index of the sublattice spanned by the
    rows inside its saturation, i.e. the multiplicity of the face.
    """
    rows = [as_vector(r) for r in m]
    if k is None:
        k = len(rows)
    if len(rows) != k:
        raise DimensionError(f"expected {k} rows, got {len(rows)}")
    n = len(rows[0])
    if any(len(r) != n for r in rows) or n < k:
        raise DimensionError("inconsistent row lengths")
    g = 0
    for cols in combinations(range(n), k):
        g = gcd(g, _det([[r[c] for c in cols] for r in rows]))
    if g == 0:
        raise DegenerateInputError("rows are linearly dependent")
    return g
