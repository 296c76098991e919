from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given

from oracles import box_points, cones
from shedkit import SimplicialCone, dual_cone, face_multiplicities, multiplicity, support_form
from shedkit.cone import contains, shed_lattice_points
from shedkit.errors import DegenerateInputError, DimensionError

UNIT3 = SimplicialCone([(1, 0, 0), (0, 1, 0), (0, 0, 1)])
SIGMA_M2 = SimplicialCone([(15, -3, -7), (0, 1, 0), (0, 0, 1)])


def test_constructor_checks():
    with pytest.raises(DimensionError):
        SimplicialCone([(1, 0, 0), (0, 1, 0)])
    with pytest.raises(DegenerateInputError):
        SimplicialCone([(1, 0, 0), (0, 1, 0), (1, 1, 0)])
    with pytest.raises(DimensionError):
        SimplicialCone([(1, 0, 0, 0)] * 4)


def test_rays_are_primitivized():
    assert SimplicialCone([(2, 0), (0, 3)]).rays == ((0, 1), (1, 0))


def test_multiplicity_examples():
    assert multiplicity(UNIT3) == 1
    assert multiplicity(SimplicialCone([(1, 0), (1, 5)])) == 5
    assert multiplicity(SIGMA_M2) == 15


def test_support_form_examples():
    assert support_form(UNIT3) == (1, 1, 1)
    assert support_form(SIGMA_M2) == (Fraction(11, 15), 1, 1)


@given(cones())
def test_support_form_is_one_on_rays(c):
    assert all(c.level(r) == 1 for r in c.rays)


def test_contains_examples():
    assert contains(UNIT3, (1, 2, 3)).inside
    assert not contains(UNIT3, (-1, 2, 3)).inside
    # rays are stored sorted: (0,0,1), (0,1,0), (1,0,0)
    assert contains(UNIT3, (1, 2, 3)).coords == (3, 2, 1)


@given(cones(max_mult=30))
def test_parallelepiped_count_equals_multiplicity(c):
    assert len(c.parallelepiped_points()) == c.multiplicity


@given(cones(max_mult=25, bound=3))
def test_shed_points_match_brute_force(c):
    radius = max(abs(x) for r in c.rays for x in r)
    # every shed point is a combination with coefficients summing to at most 1
    oracle = sorted(p for p in box_points(c, radius) if c.level(p) <= 1)
    got = shed_lattice_points(c)
    assert got == oracle
    assert all(0 < c.level(p) <= 1 for p in got)
    assert set(c.rays) <= set(got)


@given(cones())
def test_biduality(c):
    assert dual_cone(dual_cone(c)) == c


@given(cones())
def test_dual_pairs_nonnegatively(c):
    d = dual_cone(c)
    assert all(sum(a * b for a, b in zip(u, r)) >= 0 for u in d.rays for r in c.rays)


def test_dual_2d():
    c = SimplicialCone([(1, 0), (1, 2)])
    assert dual_cone(c) == SimplicialCone([(0, 1), (2, -1)])


def test_face_multiplicities():
    faces = face_multiplicities(SIGMA_M2)
    singular = [f for f in faces if f.singular]
    assert len(singular) == 1
    assert set(singular[0].rays) == {(15, -3, -7), (0, 0, 1)}
    assert singular[0].multiplicity == 3


def test_strict_shed_points_2d():
    c = SimplicialCone([(15, -7), (0, 1)])
    assert c.strict_shed_points() == [(l * 2 + 1, -l) for l in range(7)]


def test_points_at_level_on_a_regular_cone():
    assert UNIT3.points_at_level(2) == sorted(
        p for p in product(range(3), repeat=3) if sum(p) == 2)
