from fractions import Fraction
from math import gcd

import pytest

from shedkit import Fan, SimplicialCone, g_desingularize, minimal_resolution_2d
from shedkit import drinfeld as dr
from shedkit.errors import ContradictionError
from shedkit.linalg import determinant


def test_sigma_M_examples():
    assert dr.sigma_M(2) == SimplicialCone([(15, -3, -7), (0, 1, 0), (0, 0, 1)])
    assert dr.sigma_M(3) == SimplicialCone([(40, -4, -13), (0, 1, 0), (0, 0, 1)])
    assert dr.sigma_M(2).multiplicity == 15


def test_q_validation():
    for bad in (1, 0, -3):
        with pytest.raises(ValueError):
            dr.sigma_M(bad)


def test_dual_and_degree_examples():
    assert dr.sigma_M_dual_expected(2) == SimplicialCone([(1, 0, 0), (1, 5, 0), (7, 0, 15)])
    assert dr.sigma_M_dual_expected(3) == SimplicialCone([(1, 0, 0), (1, 10, 0), (13, 0, 40)])
    assert dr.covering_degree(2) == 75 and dr.covering_degree(3) == 400
    assert abs(determinant(dr.sigma_M_dual_expected(2).rays)) == 75


def test_bar_sigma_M(q):
    fan = dr.bar_sigma_M(q)
    assert len(fan.rays) == 4 and len(fan) == 4 and fan.is_complete()
    e1, e2, e3, _ = dr.e_rays(q)
    assert dr.sigma_M(q) in fan.maximal_cones
    assert SimplicialCone([e1, e2, e3]) == dr.sigma_M(q)


def test_wps_weights():
    assert dr.wps_weights(2) == ((1, 3, 7, 15), (1, 3, 7, 15))
    assert dr.wps_weights(3) == ((2, 8, 26, 80), (1, 4, 13, 40))
    for q in range(2, 6):
        raw, _ = dr.wps_weights(q)
        assert gcd(*raw) == q - 1
        assert dr.weighted_relation(q) == (0, 0, 0)


def test_terminal_schedule_examples():
    assert dr.terminal_schedule(2).rays == [(5, -1, -2), (1, 0, 0)]
    assert dr.terminal_schedule(3).rays == [(10, -1, -3), (1, 0, 0)]
    fan = dr.sigma_min(2)
    assert len(fan) == 4 and fan.is_terminal() and fan.roof_concavity().strictly_concave


def test_essential_schedule_examples():
    first, second = dr.essential_batches(2)
    assert first.rays == [(11, -2, -5), (7, -1, -3)]
    assert second.rays == [(3, 0, -1), (9, -1, -4), (13, -2, -6)]
    assert dr.sigma_ess(2).is_regular()
    assert len(dr.essential_schedule(3)) == 3 * 3 + 3 - 1


def test_compactified_schedules():
    assert dr.compactified_terminal_schedule(2).rays == [(5, -1, -2), (1, 0, 0), (2, 0, -1)]
    fan = dr.bar_sigma_min(2)
    assert fan.is_terminal() and fan.is_complete()
    e1, e2, _, e4 = dr.e_rays(2)
    assert SimplicialCone([e2, e4, e1]).contains((2, 0, -1)).inside
    boundary = dr.compactified_essential_schedule(2).rays[-3:]
    assert boundary == [(2, 0, -1), (6, -1, -3), (10, -2, -5)]
    fan = dr.bar_sigma_ess(2)
    assert fan.is_regular() and fan.is_complete()
    run = g_desingularize(Fan.from_cones([dr.sigma_tilde(2, 0)]))
    assert set(run.added_rays) == {(6, -1, -3), (10, -2, -5)}


def test_surface13():
    cone, pts = dr.surface13_cone(2)
    assert cone == SimplicialCone([(15, -7), (0, 1)]) and len(pts) == 7
    for q in (2, 3):
        cone, pts = dr.surface13_cone(q)
        assert minimal_resolution_2d(cone) == pts
        assert all(x1 == 1 - q * x3 for x1, x3 in pts)


def test_m3_fan():
    fan, pts = dr.m3_fan(2)
    assert set(fan.rays) == {(7, -3), (0, 1), (-1, 0)}
    assert set(pts) == {(1, 0), (3, -1), (5, -2), (2, -1)}
    strict = {p for c in fan.maximal_cones for p in c.strict_shed_points()}
    assert strict == set(pts)
    assert dr.build("m3fan", 2).is_regular()


def test_m3_fan_q3_shed_interior_is_larger_than_the_resolution():
    # the strict shed also holds points off the convex boundary, e.g. (2, 0)
    fan, pts = dr.m3_fan(3)
    strict = {p for c in fan.maximal_cones for p in c.strict_shed_points()}
    assert strict > set(pts) and (2, 0) in strict
    resolution = {p for c in fan.maximal_cones for p in minimal_resolution_2d(c)}
    assert resolution == set(pts)


def test_terminal_candidate_levels():
    values = dict(dr.terminal_candidate_exclusion(2))
    assert values[(7, -1, -3)] == Fraction(17, 15)
    assert values[(3, 0, -1)] == Fraction(18, 15)
    assert all(v > 1 for v in values.values())


def test_terminal_candidate_at_q3_lies_below_the_sigma_M_roof():
    assert dr.sigma_M(3).level((22, -2, -7)) == Fraction(9, 10)
    with pytest.raises(ContradictionError):
        dr.terminal_candidate_exclusion(3)
    assert all(v > 1 for _, v in dr.candidate_levels_in_terminal_model(3))


def test_basic_invariants_j12():
    rows = dr.enumerate_basic_invariants(2, ["j12"])
    assert {(e.d1, e.d2) for e in rows if e.d4 == 1} == {(12, 1), (9, 2), (6, 3), (3, 4)}
    assert all(e.weight_defect(2) == 0 for e in dr.enumerate_basic_invariants(2))


def test_basic_invariants_j13_and_generators():
    rows = dr.enumerate_basic_invariants(2, ["j13"])
    assert {(e.d1, e.d3) for e in rows if e.d4 == 1} == {(8, 1), (1, 2)}
    assert dr.generator_exponents(2)["j2"] == dr.InvariantExponent(0, 5, 0, 1, "j2")


def test_exponent_to_lattice():
    gens = dr.generator_exponents(2)
    assert dr.exponent_to_lattice(2, gens["j1"]) == (1, 0, 0)
    assert dr.exponent_to_lattice(2, gens["j2"]) == (1, 5, 0)
    assert dr.exponent_to_lattice(2, dr.InvariantExponent(12, 1, 0, 1, "j12")) == (1, 1, 0)


def test_weight_of_coefficient():
    assert dr.weight_of_coefficient(1, 2) == 1
    assert dr.weight_of_coefficient(4, 2) == 15
    assert dr.weight_of_coefficient(3, 3) == 26


def test_singular_face_report():
    for q, mult in ((2, 3), (3, 4), (5, 6)):
        report = dr.singular_face_report(q)
        assert report["multiplicity"] == mult
        e1, _, e3, _ = dr.e_rays(q)
        assert sorted(map(tuple, report["singular_face"])) == sorted([e1, e3])


def test_build_every_construction():
    for name in dr.NAMED_CONSTRUCTIONS:
        fan = dr.build(name, 2)
        fan.validate()
    with pytest.raises(KeyError):
        dr.build("nope", 2)
