"""Desingularization procedures for simplicial fans.

``g_desingularize`` repeatedly star-subdivides the worst cone at its G-point,
the lattice point whose support-form value is exactly ``1 + 1/mu``.  The 2D
minimal resolution and the Hilbert basis of a cone live here as well.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cmp_to_key

from .cone import SimplicialCone
from .errors import DimensionError, HypothesisViolation, NonTermination, ResourceError
from .fan import Fan
from .linalg import Vector, is_primitive

DEFAULT_MAX_MULT = 10_000


@dataclass(frozen=True)
class GStep:
    cone: tuple[Vector, ...]
    mu: int
    point: Vector
    l_value: Fraction

    def to_json(self, index: int) -> str:
        return json.dumps({"step": index, "cone": [list(r) for r in self.cone],
                           "mu": self.mu, "point": list(self.point),
                           "l_value": f"{self.l_value.numerator}/{self.l_value.denominator}"},
                          sort_keys=True)


@dataclass
class GResult:
    fan: Fan
    steps: list[GStep] = field(default_factory=list)
    diagnostic: str | None = None

    @property
    def added_rays(self) -> list[Vector]:
        return [s.point for s in self.steps]


def g_candidates(c: SimplicialCone) -> list[Vector]:
    target = 1 + Fraction(1, c.multiplicity)
    return [p for p in c.points_at_level(target) if is_primitive(p)]


def g_subdivision_point(c: SimplicialCone) -> Vector:
    """The unique primitive point of ``c`` at support-form level 1 + 1/mu."""
    if c.multiplicity == 1:
        raise HypothesisViolation(f"{c!r} is regular; it has no G-point")
    found = g_candidates(c)
    if len(found) != 1:
        raise HypothesisViolation(
            f"{c!r} (mu={c.multiplicity}) has {len(found)} points at level "
            f"1+1/{c.multiplicity}", found)
    return found[0]


def g_desingularize(fan: Fan, max_steps: int = 1000) -> GResult:
    """Subdivide the cone of largest multiplicity at its G-point until regular.

    Ties are broken by the lexicographically smallest ray tuple.  When the
    selected cone has no unique G-point the partial fan is returned with a
    diagnostic; exhausting ``max_steps`` raises NonTermination.
    """
    steps: list[GStep] = []
    while True:
        singular = [c for c in fan.maximal_cones if c.multiplicity > 1]
        if not singular:
            return GResult(fan, steps)
        if len(steps) >= max_steps:
            raise NonTermination(f"fan still singular after {max_steps} G-steps", fan, steps)
        cone = min(singular, key=lambda c: (-c.multiplicity, c.rays))
        try:
            x = g_subdivision_point(cone)
        except HypothesisViolation as exc:
            return GResult(fan, steps, str(exc))
        steps.append(GStep(cone.rays, cone.multiplicity, x, cone.level(x)))
        fan = fan.star_subdivide(x, f"G-step {len(steps)}")


def _cross2(u, v) -> int:
    return u[0] * v[1] - u[1] * v[0]


def minimal_resolution_2d(c: SimplicialCone) -> list[Vector]:
    """Lattice points on the compact boundary of conv(c ∩ Z^2 minus 0).

    Points are listed in angular order from ``c.rays[0]`` to ``c.rays[1]``;
    subdividing at all of them gives the minimal regular refinement.
    """
    if c.dim != 2:
        raise DimensionError("minimal_resolution_2d expects a 2D cone")
    if c.multiplicity == 1:
        return []
    u, w = c.rays
    orient = 1 if _cross2(u, w) > 0 else -1
    # a non-primitive point is never on the boundary: its primitive part is closer
    pts = [p for p in c.shed_lattice_points() if p not in (u, w) and is_primitive(p)]
    pts.sort(key=cmp_to_key(lambda a, b: -orient * _cross2(a, b)))
    chain = [u]
    for p in pts + [w]:
        while len(chain) >= 2:
            a, b = chain[-2], chain[-1]
            side_b = _cross2((p[0] - a[0], p[1] - a[1]), (b[0] - a[0], b[1] - a[1]))
            side_0 = _cross2((p[0] - a[0], p[1] - a[1]), (-a[0], -a[1]))
            if side_b != 0 and (side_b > 0) != (side_0 > 0):
                chain.pop()
            else:
                break
        chain.append(p)
    return chain[1:-1]


def resolve_2d(c: SimplicialCone) -> Fan:
    fan = Fan.from_cones([c])
    for p in minimal_resolution_2d(c):
        fan = fan.star_subdivide(p)
    return fan


def max_multiplicity_bound() -> int:
    return int(os.environ.get("SHEDKIT_MAX_MULT", DEFAULT_MAX_MULT))


def hilbert_basis(c: SimplicialCone, max_mult: int | None = None) -> list[Vector]:
    """Minimal generating set of the semigroup ``c ∩ Z^n``.

    Candidates are the ray generators and the nonzero points of the half-open
    fundamental parallelepiped; a candidate is dropped when it is the sum of
    two other nonzero candidates.
    """
    bound = max_multiplicity_bound() if max_mult is None else max_mult
    if c.multiplicity > bound:
        raise ResourceError(f"multiplicity {c.multiplicity} exceeds bound {bound}")
    candidates = sorted(set(c.rays) | {p for p in c.parallelepiped_points() if any(p)})
    pool = set(candidates)
    coords = {p: c.scaled_coords(p) for p in candidates}
    basis = []
    for x in candidates:
        cx = coords[x]
        reducible = False
        for y in candidates:
            if y == x or any(a > b for a, b in zip(coords[y], cx)):
                continue
            z = tuple(a - b for a, b in zip(x, y))
            if z in pool:
                reducible = True
                break
        if not reducible:
            basis.append(x)
    return basis
