"""Simplicial fans: star subdivision and global checks.

A :class:`Fan` keeps its rays in lexicographic order and each maximal cone as a
sorted tuple of ray indices, so the JSON form of a fan is canonical.  Fans are
immutable; every refinement returns a new fan.
"""

from __future__ import annotations

import hashlib
import json
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, cmp_to_key
from itertools import combinations
from math import factorial
from typing import Iterable, Mapping, Sequence

from .cone import SimplicialCone
from .errors import (
    DegenerateProjectionError,
    DimensionError,
    DomainError,
    IdempotenceError,
    InvalidFanError,
    ScheduleError,
)
from .linalg import Vector, cross, dot, is_primitive, mat_vec, primitivize, rank

STRICT = "strictly_concave"
FLAT = "concave"
NOT_CONCAVE = "not_concave"
_VERDICT_ORDER = {STRICT: 2, FLAT: 1, NOT_CONCAVE: 0}


@dataclass(frozen=True)
class ScheduleEntry:
    ray: Vector
    label: str = ""


class SubdivisionSchedule(tuple):
    """Ordered rays to star-subdivide at, each with a provenance label."""

    def __new__(cls, entries: Iterable = ()):
        items = []
        for e in entries:
            if not isinstance(e, ScheduleEntry):
                ray, label = (e, "") if not isinstance(e[0], (tuple, list)) else e
                e = ScheduleEntry(tuple(int(x) for x in ray), label)
            if not any(e.ray) or not is_primitive(e.ray):
                raise ValueError(f"schedule ray {e.ray} is not primitive")
            items.append(e)
        return super().__new__(cls, items)

    @property
    def rays(self) -> list[Vector]:
        return [e.ray for e in self]

    def __add__(self, other):
        return SubdivisionSchedule(tuple(self) + tuple(other))

    def __getitem__(self, item):
        out = super().__getitem__(item)
        return SubdivisionSchedule(out) if isinstance(item, slice) else out


@dataclass(frozen=True)
class Wall:
    rays: tuple[Vector, ...]
    cones: tuple[int, ...]

    @property
    def internal(self) -> bool:
        return len(self.cones) == 2


@dataclass(frozen=True)
class WallConcavity:
    """Support form of one incident cone evaluated at the far ray of the other.

    ``values`` holds both directions; they always lie on the same side of 1.
    """

    wall: Wall
    opposite: tuple[Vector, Vector]
    values: tuple[Fraction, Fraction]
    verdict: str

    @property
    def value(self) -> Fraction:
        return self.values[0]


@dataclass(frozen=True)
class RoofReport:
    walls: tuple[WallConcavity, ...]
    verdict: str

    @property
    def strictly_concave(self) -> bool:
        return self.verdict == STRICT


@dataclass(frozen=True)
class SubdivisionStep:
    index: int
    ray: Vector
    label: str
    removed: tuple[tuple[Vector, ...], ...]
    added: tuple[tuple[Vector, ...], ...]


class Fan:
    """A fan of full-dimensional simplicial cones in a lattice of rank 2 or 3."""

    def __init__(self, rays: Iterable[Sequence[int]], cones: Iterable[Iterable[int]],
                 labels: Mapping | None = None, check: bool = True):
        raw = [tuple(int(x) for x in r) for r in rays]
        if not raw:
            raise InvalidFanError("a fan needs at least one ray")
        dim = len(raw[0])
        if dim not in (2, 3) or any(len(r) != dim for r in raw):
            raise DimensionError("fan rays must all have length 2 or all length 3")
        for r in raw:
            if not any(r) or not is_primitive(r):
                raise InvalidFanError(f"ray {r} is not a primitive nonzero vector")
        if len(set(raw)) != len(raw):
            raise InvalidFanError("duplicate rays")
        order = sorted(range(len(raw)), key=lambda i: raw[i])
        new_index = {old: new for new, old in enumerate(order)}
        self.dim = dim
        self.rays: tuple[Vector, ...] = tuple(raw[i] for i in order)
        cone_list = []
        for c in cones:
            c = tuple(sorted(new_index[int(i)] for i in c))
            if len(c) != dim or len(set(c)) != dim:
                raise InvalidFanError(f"cone {c} does not have {dim} distinct rays")
            cone_list.append(c)
        if len(set(cone_list)) != len(cone_list):
            raise InvalidFanError("duplicate cones")
        self.cones: tuple[tuple[int, ...], ...] = tuple(sorted(cone_list))
        self.labels: dict[Vector, str] = {}
        for key, value in (labels or {}).items():
            ray = raw[int(key)] if isinstance(key, (int, str)) else tuple(key)
            if value:
                self.labels[ray] = str(value)
        if check:
            self.validate()

    @classmethod
    def from_cones(cls, cones: Iterable[SimplicialCone | Sequence[Sequence[int]]],
                   labels: Mapping | None = None, check: bool = True) -> "Fan":
        cones = [c if isinstance(c, SimplicialCone) else SimplicialCone(c) for c in cones]
        rays = sorted({r for c in cones for r in c.rays})
        index = {r: i for i, r in enumerate(rays)}
        return cls(rays, [[index[r] for r in c.rays] for c in cones],
                   {index[tuple(k)]: v for k, v in (labels or {}).items() if tuple(k) in index},
                   check=check)

    def __eq__(self, other):
        return (isinstance(other, Fan) and self.rays == other.rays
                and self.cones == other.cones)

    def __hash__(self):
        return hash((self.rays, self.cones))

    def __repr__(self):
        return f"Fan(dim={self.dim}, rays={len(self.rays)}, cones={len(self.cones)})"

    def __len__(self):
        return len(self.cones)

    # basic views

    @cached_property
    def maximal_cones(self) -> tuple[SimplicialCone, ...]:
        return tuple(SimplicialCone(self.cone_rays(c)) for c in self.cones)

    def cone_rays(self, cone: Sequence[int]) -> tuple[Vector, ...]:
        return tuple(self.rays[i] for i in cone)

    def label(self, ray) -> str:
        return self.labels.get(tuple(ray), "")

    def multiplicities(self) -> list[int]:
        return [c.multiplicity for c in self.maximal_cones]

    def total_multiplicity(self) -> int:
        return sum(self.multiplicities())

    @cached_property
    def walls(self) -> tuple[Wall, ...]:
        incidence: dict[tuple[int, ...], list[int]] = {}
        for ci, cone in enumerate(self.cones):
            for face in combinations(cone, self.dim - 1):
                incidence.setdefault(face, []).append(ci)
        return tuple(Wall(tuple(self.rays[i] for i in face), tuple(cs))
                     for face, cs in sorted(incidence.items()))

    def internal_walls(self) -> list[Wall]:
        return [w for w in self.walls if w.internal]

    def to_dict(self) -> dict:
        labels = {str(i): self.labels[r] for i, r in enumerate(self.rays) if r in self.labels}
        return {"dim": self.dim, "rays": [list(r) for r in self.rays],
                "cones": [list(c) for c in self.cones], "labels": labels}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=1) + "\n"

    @classmethod
    def from_dict(cls, data: Mapping, check: bool = True) -> "Fan":
        try:
            rays, cones = data["rays"], data["cones"]
        except (KeyError, TypeError) as exc:
            raise InvalidFanError(f"fan JSON is missing key {exc}") from None
        fan = cls(rays, cones, {int(k): v for k, v in data.get("labels", {}).items()},
                  check=check)
        if "dim" in data and int(data["dim"]) != fan.dim:
            raise InvalidFanError(f"declared dim {data['dim']} does not match rays")
        return fan

    def fingerprint(self) -> str:
        return hashlib.sha256(self.to_json().encode()).hexdigest()

    # validity

    def validate(self) -> None:
        """Raise InvalidFanError unless the cones form a fan."""
        cones = []
        for c in self.cones:
            try:
                cones.append(SimplicialCone(self.cone_rays(c)))
            except Exception as exc:
                raise InvalidFanError(f"cone {self.cone_rays(c)} is invalid: {exc}") from None
        used = {i for c in self.cones for i in c}
        if len(used) != len(self.rays):
            raise InvalidFanError("some rays belong to no maximal cone")
        for cone_idx, cone in zip(self.cones, cones):
            for i, r in enumerate(self.rays):
                if i not in cone_idx and cone.contains(r).inside:
                    raise InvalidFanError(f"ray {r} lies inside cone {cone.rays}")
        for w in self.walls:
            if len(w.cones) > 2:
                raise InvalidFanError(f"wall {w.rays} has {len(w.cones)} incident cones")
            if len(w.cones) == 2 and not self._opposite_sides(w):
                raise InvalidFanError(f"cones on wall {w.rays} overlap")
        for a, b in combinations(range(len(cones)), 2):
            if not _separated(cones[a].rays, cones[b].rays):
                raise InvalidFanError(
                    f"cones {cones[a].rays} and {cones[b].rays} have overlapping interiors")

    def _wall_normal(self, wall: Wall) -> Vector:
        if self.dim == 2:
            (a, b), = wall.rays
            return (-b, a)
        return cross(*wall.rays)

    def _opposite_ray(self, cone_index: int, wall: Wall) -> Vector:
        (r,) = [r for r in self.cone_rays(self.cones[cone_index]) if r not in wall.rays]
        return r

    def _opposite_sides(self, wall: Wall) -> bool:
        n = self._wall_normal(wall)
        s = [dot(n, self._opposite_ray(ci, wall)) for ci in wall.cones]
        return s[0] * s[1] < 0

    # subdivision

    def containing_cones(self, x) -> list[int]:
        return [i for i, c in enumerate(self.maximal_cones) if c.contains(x).inside]

    def star_subdivide(self, ray, label: str = "") -> "Fan":
        return self.star_subdivide_logged(ray, label)[0]

    def star_subdivide_logged(self, ray, label: str = "") -> tuple["Fan", SubdivisionStep]:
        ray = tuple(int(x) for x in ray)
        if len(ray) != self.dim:
            raise DimensionError(f"ray {ray} has wrong dimension")
        if not any(ray) or not is_primitive(ray):
            raise DomainError(f"subdivision center {ray} is not primitive")
        if ray in self.rays:
            raise IdempotenceError(f"{ray} is already a ray of the fan")
        hit = self.containing_cones(ray)
        if not hit:
            raise DomainError(f"{ray} is not in the support of the fan")
        kept = [self.cone_rays(c) for i, c in enumerate(self.cones) if i not in hit]
        removed, added = [], []
        for i in hit:
            cone = self.maximal_cones[i]
            removed.append(cone.rays)
            lam = cone.contains(ray).coords
            for j, coeff in enumerate(cone.rays):
                if lam[j] > 0:
                    added.append(tuple(sorted(cone.facet(j) + (ray,))))
        labels = dict(self.labels)
        if label:
            labels[ray] = label
        rays = sorted(set(self.rays) | {ray})
        index = {r: i for i, r in enumerate(rays)}
        fan = Fan(rays, [[index[r] for r in c] for c in kept + added],
                  {index[r]: v for r, v in labels.items()}, check=False)
        step = SubdivisionStep(-1, ray, label, tuple(removed), tuple(sorted(added)))
        return fan, step

    def apply_schedule(self, schedule: Iterable) -> tuple["Fan", list[SubdivisionStep]]:
        fan, log = self, []
        for k, entry in enumerate(SubdivisionSchedule(schedule)):
            try:
                fan, step = fan.star_subdivide_logged(entry.ray, entry.label)
            except (DomainError, IdempotenceError) as exc:
                raise ScheduleError(k, exc) from exc
            log.append(SubdivisionStep(k, step.ray, step.label, step.removed, step.added))
        return fan, log

    # global properties

    def is_regular(self) -> bool:
        return all(c.multiplicity == 1 for c in self.maximal_cones)

    def terminal_witnesses(self) -> list[tuple[tuple[Vector, ...], Vector]]:
        out = []
        for cone in self.maximal_cones:
            if cone.multiplicity == 1:
                continue
            for p in cone.shed_lattice_points():
                if p not in cone.rays:
                    out.append((cone.rays, p))
        return out

    def is_terminal(self) -> bool:
        return not self.terminal_witnesses()

    def roof_concavity(self) -> RoofReport:
        results = []
        for w in self.internal_walls():
            a, b = w.cones
            far = (self._opposite_ray(b, w), self._opposite_ray(a, w))
            values = (self.maximal_cones[a].level(far[0]), self.maximal_cones[b].level(far[1]))
            value = values[0]
            if value > 1:
                verdict = STRICT
            elif value == 1:
                verdict = FLAT
            else:
                verdict = NOT_CONCAVE
            results.append(WallConcavity(w, far, values, verdict))
        verdict = min((r.verdict for r in results), key=_VERDICT_ORDER.__getitem__,
                      default=STRICT)
        return RoofReport(tuple(results), verdict)

    def shed_volume(self) -> Fraction:
        return Fraction(self.total_multiplicity(), factorial(self.dim))

    def generic_directions(self, count: int = 24) -> list[Vector]:
        rng = random.Random(self.fingerprint())
        out = []
        while len(out) < count:
            v = tuple(rng.randint(-997, 997) for _ in range(self.dim))
            if any(v):
                out.append(v)
        return out

    def cover_counts(self, directions: Iterable[Vector]) -> list[int]:
        """How many maximal cones contain each direction in their interior.

        Directions that hit the boundary of some cone are skipped.
        """
        counts = []
        for v in directions:
            n, boundary = 0, False
            for cone in self.maximal_cones:
                lam = cone.scaled_coords(v)
                if min(lam) > 0:
                    n += 1
                elif min(lam) == 0:
                    boundary = True
            if not boundary:
                counts.append(n)
        return counts

    def is_complete(self) -> bool:
        if any(not w.internal for w in self.walls):
            return False
        if not all(self._opposite_sides(w) for w in self.walls):
            return False
        counts = self.cover_counts(self.generic_directions())
        return bool(counts) and all(n == 1 for n in counts)

    def project(self, matrix: Sequence[Sequence[int]]) -> "Fan":
        """Image of the fan under an integer linear map to rank 2.

        Rays in the kernel of the map are dropped; the image cones are the
        angular sectors between consecutive image rays that the image covers.
        """
        if len(matrix) != 2 or any(len(row) != self.dim for row in matrix):
            raise DimensionError(f"projection must be a 2x{self.dim} matrix")
        if rank(matrix) != 2:
            raise DegenerateProjectionError("projection matrix does not have rank 2")
        image = {}
        for r in self.rays:
            v = mat_vec(matrix, r)
            if any(v):
                image[r] = primitivize(v)
        targets = sorted(set(image.values()), key=_angle_key)
        if len(targets) < 2:
            raise DegenerateProjectionError("projection has fewer than two image rays")
        generators = []
        for cone in self.cones:
            gens = [image[self.rays[i]] for i in cone if self.rays[i] in image]
            if not gens:
                raise DegenerateProjectionError(f"cone {self.cone_rays(cone)} maps to 0")
            generators.append(gens)
        sectors = []
        for k, u in enumerate(targets):
            v = targets[(k + 1) % len(targets)]
            if u == v or _cross2(u, v) <= 0:
                continue
            mid = (u[0] + v[0], u[1] + v[1])
            if any(_in_planar_hull(mid, gens) for gens in generators):
                sectors.append((u, v))
        if not sectors:
            raise DegenerateProjectionError("projected fan has no full-dimensional cone")
        labels = {}
        for src, dst in image.items():
            if src in self.labels and dst not in labels:
                labels[dst] = self.labels[src]
        return Fan.from_cones(sectors, labels)


def _separated(a: Sequence[Vector], b: Sequence[Vector]) -> bool:
    """True if some hyperplane through 0 weakly separates cones ``a`` and ``b``."""
    pool = list(a) + list(b)
    if len(pool[0]) == 2:
        normals = [(-y, x) for x, y in pool]
    else:
        normals = [cross(u, v) for u, v in combinations(pool, 2)]
    for n in normals:
        if not any(n):
            continue
        for s in (1, -1):
            if all(s * dot(n, r) >= 0 for r in a) and all(s * dot(n, r) <= 0 for r in b):
                return True
    return False


def _cross2(u, v) -> int:
    return u[0] * v[1] - u[1] * v[0]


def _half(v) -> int:
    x, y = v
    return 0 if y > 0 or (y == 0 and x > 0) else 1


def _angle_cmp(u, v) -> int:
    """Exact comparison of polar angles in [0, 2*pi)."""
    hu, hv = _half(u), _half(v)
    if hu != hv:
        return -1 if hu < hv else 1
    c = _cross2(u, v)
    return -1 if c > 0 else (1 if c < 0 else 0)


_angle_key = cmp_to_key(_angle_cmp)


def _in_planar_hull(x, gens) -> bool:
    """Whether ``x`` lies in the cone generated by the planar vectors ``gens``."""
    for g in gens:
        if _cross2(g, x) == 0 and dot(g, x) > 0:
            return True
    for u, v in combinations(gens, 2):
        d = _cross2(u, v)
        if d == 0:
            continue
        a = _cross2(x, v) * (1 if d > 0 else -1)
        b = _cross2(u, x) * (1 if d > 0 else -1)
        if a >= 0 and b >= 0:
            return True
    return False


def star_subdivide(f: Fan, ray, label: str = "") -> Fan:
    return f.star_subdivide(ray, label)


def apply_schedule(f: Fan, schedule) -> tuple[Fan, list[SubdivisionStep]]:
    return f.apply_schedule(schedule)
