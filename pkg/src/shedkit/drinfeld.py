"""Cones, fans and subdivision schedules of the rank-4 Drinfeld moduli threefold.

Everything is an exact function of the field size ``q``.  Rays are written in
the lattice coordinates (x1, x2, x3); with N = q^3 + q^2 + q + 1 the affine
moduli cone is spanned by

    e1 = (N, -q-1, -q^2-q-1),  e2 = (0, 1, 0),  e3 = (0, 0, 1)

and the compactification adds e4 = (-1, 0, 0).
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from math import gcd

from .cone import Face, SimplicialCone
from .errors import ConsistencyError, ContradictionError, CorrespondenceError
from .fan import Fan, ScheduleEntry, SubdivisionSchedule
from .linalg import Vector, solve_rational, transpose

KINDS = ("j1", "j2", "j3", "j12", "j13", "j23", "j123")

NAMED_CONSTRUCTIONS = ("sigma_M", "sigma_M_dual", "bar_sigma_M", "Sigma_min", "Sigma_ess",
                       "bar_Sigma_min", "bar_Sigma_ess", "surface13", "m3fan")


def _check_q(q: int) -> int:
    if int(q) != q or q < 2:
        raise ValueError(f"q must be an integer >= 2, got {q!r}")
    return int(q)


def big_n(q: int) -> int:
    """(q^4 - 1) / (q - 1)."""
    return q**3 + q**2 + q + 1


def e_rays(q: int) -> tuple[Vector, Vector, Vector, Vector]:
    q = _check_q(q)
    return ((big_n(q), -q - 1, -q * q - q - 1), (0, 1, 0), (0, 0, 1), (-1, 0, 0))


def p_point(q: int, k: int, l: int) -> Vector:
    """(kq^2 + lq + 1, -k, -kq - l); the essential-model ray family."""
    return (k * q * q + l * q + 1, -k, -k * q - l)


def q_point(q: int, k: int) -> Vector:
    """(kq^2 + q, -k, -kq - 1); the boundary chain of the compactification."""
    return (k * q * q + q, -k, -k * q - 1)


def terminal_ray(q: int) -> Vector:
    return (q * q + 1, -1, -q)


def weight_of_coefficient(k: int, q: int) -> int:
    if not 1 <= k <= 4:
        raise ValueError(f"coefficient index must be in 1..4, got {k}")
    return q**k - 1


# cones

def sigma_M(q: int) -> SimplicialCone:
    return SimplicialCone(e_rays(q)[:3])


def sigma_M_dual_expected(q: int) -> SimplicialCone:
    q = _check_q(q)
    return SimplicialCone([(1, 0, 0), (1, q * q + 1, 0), (q * q + q + 1, 0, big_n(q))])


def covering_degree(q: int) -> int:
    q = _check_q(q)
    return big_n(q) * (q * q + 1)


def sigma_k(q: int, k: int) -> SimplicialCone:
    """<e2, (q^2+1,-1,-q), P_k>; for k = q+1 this is the cone sigma_{q+1}."""
    return SimplicialCone([(0, 1, 0), terminal_ray(q), p_point(q, k, 1)])


def sigma_prime(q: int, k: int) -> SimplicialCone:
    """<P_k, P_{k+1}, e2> for k >= 1, and <(1,0,0), e2, (q^2+1,-1,-q)> for k = 0."""
    if k == 0:
        return SimplicialCone([(1, 0, 0), (0, 1, 0), terminal_ray(q)])
    return SimplicialCone([p_point(q, k, 1), p_point(q, k + 1, 1), (0, 1, 0)])


def sigma_tilde(q: int, k: int) -> SimplicialCone:
    """<e4, Q_k, e1>; Q_0 = (q, 0, -1)."""
    e1, _, _, e4 = e_rays(q)
    return SimplicialCone([e4, q_point(q, k), e1])


def printed_sigma_tilde0_form(q: int) -> tuple[Fraction, Fraction, Fraction]:
    """Support form of sigma_tilde(q, 0) with the printed y-coefficient.

    Kept only so reports can show that it differs from the computed form.
    """
    return (Fraction(-1), Fraction(q * q + q + 1, q + 1), Fraction(-(q + 1)))


def expected_sigma_tilde0_form(q: int) -> tuple[Fraction, Fraction, Fraction]:
    return (Fraction(-1), Fraction(q * q + q - 1, q + 1), Fraction(-(q + 1)))


# fans

def _labels(q: int) -> dict[Vector, str]:
    e1, e2, e3, e4 = e_rays(q)
    return {e1: "e1", e2: "e2", e3: "e3", e4: "e4"}


def sigma_M_fan(q: int) -> Fan:
    return Fan.from_cones([sigma_M(q)], _labels(q))


def bar_sigma_M(q: int) -> Fan:
    rays = e_rays(q)
    cones = [[r for j, r in enumerate(rays) if j != i] for i in range(4)]
    return Fan.from_cones(cones, _labels(q))


def wps_weights(q: int) -> tuple[tuple[int, ...], tuple[int, ...]]:
    q = _check_q(q)
    raw = tuple(q**k - 1 for k in range(1, 5))
    g = reduce(gcd, raw)
    if g != q - 1:
        raise ContradictionError(f"gcd of weights {raw} is {g}, expected {q - 1}")
    return raw, tuple(w // g for w in raw)


def weighted_relation(q: int) -> Vector:
    """sum_i w_i e_i over the four rays; zero when the weights are right."""
    _, w = wps_weights(q)
    rays = e_rays(q)
    return tuple(sum(wi * r[c] for wi, r in zip(w, rays)) for c in range(3))


# schedules

def terminal_schedule(q: int) -> SubdivisionSchedule:
    q = _check_q(q)
    return SubdivisionSchedule([ScheduleEntry(terminal_ray(q), "terminal:(q^2+1,-1,-q)"),
                                ScheduleEntry((1, 0, 0), "terminal:(1,0,0)")])


def essential_batches(q: int) -> tuple[SubdivisionSchedule, SubdivisionSchedule]:
    q = _check_q(q)
    first = [ScheduleEntry(p_point(q, k, 1), f"essential:P_{k}")
             for k in range(q, 0, -1)]
    second = [ScheduleEntry(p_point(q, 0, l), f"essential:P_0,{l}") for l in range(1, q)]
    second += [ScheduleEntry(p_point(q, k, l), f"essential:P_{k},{l}")
               for k in range(1, q + 1) for l in range(2, q + 1)]
    return SubdivisionSchedule(first), SubdivisionSchedule(second)


def essential_schedule(q: int) -> SubdivisionSchedule:
    first, second = essential_batches(q)
    return first + second


def essential_ray_set(q: int) -> set[Vector]:
    """The ray family of the essential model, straight from its index ranges."""
    out = {p_point(q, k, 1) for k in range(1, q + 1)}
    out |= {p_point(q, k, l) for k in range(1, q + 1) for l in range(2, q + 1)}
    out |= {p_point(q, 0, l) for l in range(1, q)}
    return out


def compactified_terminal_schedule(q: int) -> SubdivisionSchedule:
    q = _check_q(q)
    return terminal_schedule(q) + [ScheduleEntry((q, 0, -1), "compact-terminal:(q,0,-1)")]


def compactified_essential_schedule(q: int) -> SubdivisionSchedule:
    q = _check_q(q)
    entries = list(terminal_schedule(q)) + list(essential_schedule(q))
    entries += [ScheduleEntry(q_point(q, k), "compact-essential:(q,0,-1)" if k == 0
                              else f"compact-essential:Q_{k}") for k in range(0, q + 1)]
    seen, out = set(), []
    for e in entries:
        if e.ray in seen:
            warnings.warn(f"duplicate schedule ray {e.ray} dropped", stacklevel=2)
            continue
        seen.add(e.ray)
        out.append(e)
    return SubdivisionSchedule(out)


def sigma_min(q: int) -> Fan:
    return sigma_M_fan(q).apply_schedule(terminal_schedule(q))[0]


def sigma_ess(q: int) -> Fan:
    return sigma_min(q).apply_schedule(essential_schedule(q))[0]


def bar_sigma_min(q: int) -> Fan:
    return bar_sigma_M(q).apply_schedule(compactified_terminal_schedule(q))[0]


def bar_sigma_ess(q: int) -> Fan:
    return bar_sigma_M(q).apply_schedule(compactified_essential_schedule(q))[0]


# 2D shadows

X1X3 = ((1, 0, 0), (0, 0, 1))
MINUS_X3_X2 = ((0, 0, -1), (0, 1, 0))


def surface13_cone(q: int) -> tuple[SimplicialCone, list[Vector]]:
    q = _check_q(q)
    cone = SimplicialCone([(big_n(q), -q * q - q - 1), (0, 1)])
    return cone, [(l * q + 1, -l) for l in range(q * q + q + 1)]


def m3_fan(q: int) -> tuple[Fan, list[Vector]]:
    q = _check_q(q)
    rays = [(q * q + q + 1, -q - 1), (0, 1), (-1, 0)]
    fan = Fan.from_cones([[rays[0], rays[1]], [rays[1], rays[2]], [rays[2], rays[0]]])
    return fan, [(l * q + 1, -l) for l in range(q + 1)] + [(q, -1)]


def _resolved_2d(fan: Fan, points, tag: str) -> Fan:
    fan = Fan(fan.rays, fan.cones, {i: "boundary" for i in range(len(fan.rays))}, check=False)
    for p in points:
        fan = fan.star_subdivide(p, f"{tag}:interior")
    return fan


# proof-step checks

def support_form_sigma_M(q: int) -> tuple[Fraction, ...]:
    return sigma_M(q).support_form


def terminal_candidate_exclusion(q: int) -> list[tuple[Vector, Fraction]]:
    """Points 0 <= -x2 <= q, x3 = q x2 - 1, x1 = 1 - q x3 with their l-value.

    Every value must exceed 1; otherwise ContradictionError is raised.
    """
    q = _check_q(q)
    cone = sigma_M(q)
    out = []
    for x2 in range(0, -q - 1, -1):
        x3 = q * x2 - 1
        x = (1 - q * x3, x2, x3)
        value = cone.level(x)
        if value <= 1:
            raise ContradictionError(f"candidate {x} has l = {value} <= 1")
        out.append((x, value))
    return out


def candidate_levels_in_terminal_model(q: int) -> list[tuple[Vector, Fraction]]:
    """Level of each exclusion candidate in its cone of the terminal model.

    This is the statement terminality actually needs: every candidate sits
    strictly above the roof of Sigma_min.
    """
    q = _check_q(q)
    fan = sigma_min(q)
    out = []
    for x2 in range(0, -q - 1, -1):
        x3 = q * x2 - 1
        x = (1 - q * x3, x2, x3)
        cones = [c for c in fan.maximal_cones if c.contains(x).inside]
        out.append((x, min(c.level(x) for c in cones)))
    return out


def singular_face_report(q: int) -> dict:
    q = _check_q(q)
    faces: list[Face] = sigma_M(q).face_multiplicities()
    singular = [f for f in faces if f.singular]
    e1, _, e3, _ = e_rays(q)
    if len(singular) != 1:
        raise ContradictionError(f"expected one singular face, found {len(singular)}")
    (face,) = singular
    if set(face.rays) != {e1, e3} or face.multiplicity != q + 1:
        raise ContradictionError(f"singular face {face.rays} has multiplicity "
                                 f"{face.multiplicity}, expected <e1,e3> with {q + 1}")
    return {"q": q, "faces": [{"rays": [list(r) for r in f.rays],
                               "multiplicity": f.multiplicity} for f in faces],
            "singular_face": [list(r) for r in face.rays], "multiplicity": face.multiplicity}


# invariants

@dataclass(frozen=True, order=True)
class InvariantExponent:
    """Exponents of a1^d1 a2^d2 a3^d3 / Delta^d4."""

    d1: int
    d2: int
    d3: int
    d4: int
    kind: str

    def weight_defect(self, q: int) -> int:
        return self.d1 + (q + 1) * self.d2 + (q * q + q + 1) * self.d3 - big_n(q) * self.d4

    def vector(self) -> tuple[int, int, int, int]:
        return (self.d1, self.d2, self.d3, -self.d4)


def generator_exponents(q: int) -> dict[str, InvariantExponent]:
    n = big_n(q)
    return {"j1": InvariantExponent(n, 0, 0, 1, "j1"),
            "j2": InvariantExponent(0, q * q + 1, 0, 1, "j2"),
            "j3": InvariantExponent(0, 0, n, q * q + q + 1, "j3")}


def _kind(d1: int, d2: int, d3: int) -> str:
    name = "j" + "".join(str(i) for i, d in zip((1, 2, 3), (d1, d2, d3)) if d)
    return name


def delta4_bound(q: int) -> int:
    """Largest d4 compatible with the basic box: max weight of a1,a2,a3 part over N."""
    n = big_n(q)
    max_lhs = n + (q + 1) * (q * q + 1) + (q * q + q + 1) * n
    return max_lhs // n


def enumerate_basic_invariants(q: int, kinds=None) -> list[InvariantExponent]:
    """All weight-zero exponent vectors inside the basic box, d4 >= 1.

    Sorted by (kind order, d4, d1, d2, d3).
    """
    q = _check_q(q)
    n = big_n(q)
    wanted = set(KINDS if kinds is None else kinds)
    out = []
    for d4 in range(1, delta4_bound(q) + 1):
        for d2 in range(q * q + 2):
            for d3 in range(n + 1):
                d1 = n * d4 - (q + 1) * d2 - (q * q + q + 1) * d3
                if d1 < 0:
                    break
                if d1 > n:
                    continue
                kind = _kind(d1, d2, d3)
                if kind in wanted:
                    out.append(InvariantExponent(d1, d2, d3, d4, kind))
    out.sort(key=lambda e: (KINDS.index(e.kind), e.d4, -e.d1, e.d2, e.d3))
    return out


def is_generator_product(q: int, e: InvariantExponent) -> bool:
    """True when ``e`` is a product of at least two of j1, j2, j3."""
    gens = generator_exponents(q)
    a, rem1 = divmod(e.d1, gens["j1"].d1)
    b, rem2 = divmod(e.d2, gens["j2"].d2)
    c, rem3 = divmod(e.d3, gens["j3"].d3)
    if rem1 or rem2 or rem3:
        return False
    return a + b + c >= 2 and a + b + c * gens["j3"].d4 == e.d4


def exponent_to_lattice(q: int, e: InvariantExponent) -> Vector:
    """Character of the monomial ``e`` in the dual lattice of sigma_M.

    Uses the linear map sending the exponents of j1, j2, j3 to the three
    generators of the dual cone.
    """
    q = _check_q(q)
    if e.weight_defect(q) != 0:
        raise CorrespondenceError(f"{e} violates the weight equation")
    gens = generator_exponents(q)
    basis = [gens[k].vector() for k in ("j1", "j2", "j3")]
    # the first three coordinates of the generators already form an invertible matrix
    coeffs = solve_rational(transpose([b[:3] for b in basis]), e.vector()[:3])
    if sum(c * b[3] for c, b in zip(coeffs, basis)) != e.vector()[3]:
        raise CorrespondenceError(f"{e} is not in the span of j1, j2, j3")
    targets = [(1, 0, 0), (1, q * q + 1, 0), (q * q + q + 1, 0, big_n(q))]
    image = tuple(sum(c * t[i] for c, t in zip(coeffs, targets)) for i in range(3))
    if any(Fraction(x).denominator != 1 for x in image):
        raise CorrespondenceError(f"{e} maps to the non-integral point {image}")
    image = tuple(int(x) for x in image)
    dual = sigma_M_dual_expected(q)
    if not dual.contains(image).inside:
        raise ConsistencyError(f"{e} maps to {image}, outside the dual cone")
    return image


# named constructions

def build(name: str, q: int) -> Fan:
    """Realize a named construction as a fan; 2D constructions come resolved."""
    q = _check_q(q)
    if name == "sigma_M":
        return sigma_M_fan(q)
    if name == "sigma_M_dual":
        return Fan.from_cones([sigma_M(q).dual()])
    if name == "bar_sigma_M":
        return bar_sigma_M(q)
    if name == "Sigma_min":
        return sigma_min(q)
    if name == "Sigma_ess":
        return sigma_ess(q)
    if name == "bar_Sigma_min":
        return bar_sigma_min(q)
    if name == "bar_Sigma_ess":
        return bar_sigma_ess(q)
    if name == "surface13":
        cone, pts = surface13_cone(q)
        return _resolved_2d(Fan.from_cones([cone]), pts, "surface13")
    if name == "m3fan":
        fan, pts = m3_fan(q)
        return _resolved_2d(fan, pts, "m3")
    raise KeyError(f"unknown construction {name!r}; choose from {', '.join(NAMED_CONSTRUCTIONS)}")
