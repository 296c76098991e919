"""Simplicial lattice cones of dimension 2 and 3.

A cone is stored by its primitive ray generators in lexicographic order, so two
cones are equal exactly when they span the same rays.  The *support form* of a
cone is the linear form taking the value 1 on every generator; the *shed* is
the part of the cone where that form is at most 1.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import combinations, product
from math import ceil, floor
from typing import Iterable, NamedTuple, Sequence

from .errors import DegenerateInputError, DimensionError
from .linalg import (
    Vector,
    adjugate,
    cross,
    determinant,
    dot,
    maximal_minor_gcd,
    primitivize,
    solve_rational,
    transpose,
)

# A linear constraint ``coeffs . x >= bound`` with integer data.
Constraint = tuple[Vector, int]


class Containment(NamedTuple):
    inside: bool
    coords: tuple[Fraction, ...]


@dataclass(frozen=True)
class Face:
    rays: tuple[Vector, ...]
    indices: tuple[int, ...]
    multiplicity: int

    @property
    def singular(self) -> bool:
        return self.multiplicity > 1


@dataclass(frozen=True, eq=True)
class SimplicialCone:
    """Full-dimensional simplicial cone spanned by primitive lattice vectors."""

    rays: tuple[Vector, ...]
    dim: int = field(init=False, compare=False)

    def __init__(self, rays: Iterable[Sequence[int]]):
        rays = tuple(sorted(primitivize(r) for r in rays))
        if not rays:
            raise DimensionError("a cone needs at least one ray")
        dim = len(rays[0])
        if dim not in (2, 3):
            raise DimensionError(f"only dimensions 2 and 3 are supported, got {dim}")
        if len(rays) != dim or any(len(r) != dim for r in rays):
            raise DimensionError(f"a simplicial {dim}-cone needs exactly {dim} rays "
                                 f"of length {dim}, got {rays}")
        if determinant(rays) == 0:
            raise DegenerateInputError(f"rays {rays} are linearly dependent")
        object.__setattr__(self, "rays", rays)
        object.__setattr__(self, "dim", dim)

    def __repr__(self):
        return f"SimplicialCone({[list(r) for r in self.rays]})"

    @cached_property
    def _det(self) -> int:
        return determinant(self.rays)

    @cached_property
    def multiplicity(self) -> int:
        return abs(self._det)

    @property
    def is_regular(self) -> bool:
        return self.multiplicity == 1

    @cached_property
    def support_form(self) -> tuple[Fraction, ...]:
        return solve_rational(self.rays, [1] * self.dim)

    @cached_property
    def _bary(self) -> list[list[int]]:
        # rows r with r . x == |det| * lambda_i(x); all integer.
        sign = 1 if self._det > 0 else -1
        return [[sign * a for a in row] for row in adjugate(transpose(self.rays))]

    def scaled_coords(self, x) -> tuple[int, ...]:
        """Barycentric coordinates of ``x`` multiplied by the multiplicity."""
        return tuple(dot(row, x) for row in self._bary)

    def coords(self, x) -> tuple[Fraction, ...]:
        mu = self.multiplicity
        return tuple(Fraction(c, mu) for c in self.scaled_coords(x))

    def contains(self, x) -> Containment:
        if len(x) != self.dim:
            raise DimensionError(f"point {tuple(x)} has wrong dimension for {self!r}")
        lam = self.coords(x)
        return Containment(all(c >= 0 for c in lam), lam)

    def level(self, x) -> Fraction:
        """Value of the support form at ``x``."""
        return sum(self.coords(x), Fraction(0))

    def ray_index(self, ray) -> int:
        return self.rays.index(tuple(ray))

    def facet(self, omit: int) -> tuple[Vector, ...]:
        return tuple(r for i, r in enumerate(self.rays) if i != omit)

    # lattice point enumeration

    def _points(self, constraints: list[Constraint], scale: Fraction) -> list[Vector]:
        lo = [min(0, floor(scale * min(r[i] for r in self.rays))) for i in range(self.dim)]
        hi = [max(0, ceil(scale * max(r[i] for r in self.rays))) for i in range(self.dim)]
        return enumerate_lattice_points(constraints, lo, hi)

    def points_up_to_level(self, level: Fraction | int = 1) -> list[Vector]:
        """Nonzero lattice points of the cone with support-form value <= ``level``."""
        level = Fraction(level)
        mu = self.multiplicity
        cons: list[Constraint] = [(tuple(row), 0) for row in self._bary]
        total = tuple(-sum(col) * level.denominator for col in zip(*self._bary))
        cons.append((total, -mu * level.numerator))
        pts = [p for p in self._points(cons, level) if any(p)]
        return sorted(pts)

    def points_at_level(self, level: Fraction | int) -> list[Vector]:
        level = Fraction(level)
        return [p for p in self.points_up_to_level(level) if self.level(p) == level]

    def shed_lattice_points(self) -> list[Vector]:
        return self.points_up_to_level(1)

    def strict_shed_points(self) -> list[Vector]:
        """Shed points with support-form value < 1, generators excluded."""
        return [p for p in self.shed_lattice_points()
                if p not in self.rays and self.level(p) < 1]

    def parallelepiped_points(self) -> list[Vector]:
        """Lattice points of the half-open box {sum c_i r_i : 0 <= c_i < 1}."""
        mu = self.multiplicity
        cons: list[Constraint] = []
        for row in self._bary:
            cons.append((tuple(row), 0))
            cons.append((tuple(-a for a in row), -(mu - 1)))
        lo = [sum(min(0, r[i]) for r in self.rays) for i in range(self.dim)]
        hi = [sum(max(0, r[i]) for r in self.rays) for i in range(self.dim)]
        return sorted(enumerate_lattice_points(cons, lo, hi))

    def faces(self, size: int) -> list[Face]:
        out = []
        for idx in combinations(range(self.dim), size):
            rays = tuple(self.rays[i] for i in idx)
            out.append(Face(rays, idx, maximal_minor_gcd(rays, size)))
        return out

    def face_multiplicities(self) -> list[Face]:
        if self.dim != 3:
            raise DimensionError("face multiplicities are defined for 3-cones")
        return self.faces(2)

    def dual(self) -> "SimplicialCone":
        if self.dim == 2:
            normals = []
            for i, (a, b) in enumerate(self.rays):
                n = (-b, a)
                if dot(n, self.rays[1 - i]) < 0:
                    n = (b, -a)
                normals.append(n)
            return SimplicialCone(normals)
        normals = []
        for i in range(3):
            u, v = self.facet(i)
            n = cross(u, v)
            if dot(n, self.rays[i]) < 0:
                n = tuple(-x for x in n)
            normals.append(primitivize(n))
        return SimplicialCone(normals)


def enumerate_lattice_points(constraints: Sequence[Constraint], lo, hi) -> list[Vector]:
    """Integer points of the box [lo, hi] satisfying every ``c . x >= b``.

    The last coordinate is solved as an interval instead of being scanned.
    """
    n = len(lo)
    out: list[Vector] = []
    for head in product(*(range(lo[i], hi[i] + 1) for i in range(n - 1))):
        a, b = lo[-1], hi[-1]
        for coeffs, bound in constraints:
            rest = bound - sum(c * x for c, x in zip(coeffs, head))
            c = coeffs[-1]
            if c > 0:
                a = max(a, -((-rest) // c))
            elif c < 0:
                b = min(b, rest // c)
            elif rest > 0:
                a, b = 1, 0
            if a > b:
                break
        for last in range(a, b + 1):
            out.append(head + (last,))
    return out


def multiplicity(c: SimplicialCone) -> int:
    return c.multiplicity


def support_form(c: SimplicialCone) -> tuple[Fraction, ...]:
    return c.support_form


def dual_cone(c: SimplicialCone) -> SimplicialCone:
    return c.dual()


def contains(c: SimplicialCone, x) -> Containment:
    return c.contains(x)


def shed_lattice_points(c: SimplicialCone) -> list[Vector]:
    return c.shed_lattice_points()


def face_multiplicities(c: SimplicialCone) -> list[Face]:
    return c.face_multiplicities()


def evaluate(form: Sequence[Fraction], x) -> Fraction:
    return sum((Fraction(a) * b for a, b in zip(form, x)), Fraction(0))
