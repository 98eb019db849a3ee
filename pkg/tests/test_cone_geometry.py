import math
from fractions import Fraction

import numpy as np
import pytest
from numpy.polynomial.legendre import leggauss

from lawson.cone_geometry import (
    AmbientPoint,
    ConeParams,
    ReducedPoint,
    Region,
    all_certified_cones,
    cone_angle,
    cone_frame,
    dist_array,
    dist_to_cone,
    is_area_minimizing,
    l_constant,
    link_area,
    oriented_pair,
    p_array,
    p_function,
    principal_curvatures,
    reduce,
    region_array,
    second_fundamental_norm_sq,
    unit_ball_volume,
    weight_array,
)
from lawson.errors import ConfigError, OffConeError, SingularApexError

CONES = all_certified_cones()
IDS = [cone.label for cone in CONES]


def test_certified_family_has_both_orderings():
    labels = {cone.label for cone in CONES}
    assert len(CONES) == 12
    assert len(labels) == 12
    assert {"3-5", "5-3", "7-2", "2-7", "11-2", "2-11"} <= labels
    assert all(cone.certified for cone in CONES)
    assert max(cone.m for cone in CONES) == 13


@pytest.mark.parametrize("k, h", [(1, 5), (5, 1), (2, 1), (10, 10), (2, 1.5)])
def test_cone_params_rejects_bad_dimensions(k, h):
    with pytest.raises(ConfigError):
        ConeParams(k=k, h=h)


def test_parse():
    cone = ConeParams.parse(" 3 , 5 ")
    assert (cone.k, cone.h) == (3, 5)
    assert str(cone) == "C(3,5)"
    assert cone.swapped() == ConeParams(k=5, h=3)
    assert ConeParams.parse("2x7") == ConeParams(k=2, h=7)
    for text in ("3;5", "3,5,7", "a,b", "", "3x5x", "3,5,", "x3,5", "-3,5", "3.0,5"):
        with pytest.raises(ConfigError):
            ConeParams.parse(text)


def test_uncertified_pairs():
    assert oriented_pair(ConeParams(k=4, h=4)) is None
    assert not ConeParams(k=2, h=6).certified
    assert oriented_pair(ConeParams(k=2, h=9)) == (2, 9)
    assert oriented_pair(ConeParams(k=9, h=2)) == (2, 9)


@pytest.mark.parametrize("k, h, expected", [
    (3, 5, True), (5, 3, True), (4, 4, True), (2, 7, True), (2, 6, False), (3, 4, False),
])
def test_is_area_minimizing(k, h, expected):
    assert is_area_minimizing(k, h) is expected


def test_reduce_exact_on_cone(cone35):
    # cone (k, h) = (3, 5): u = 4|x|^2, v = 2|y|^2
    on = reduce(AmbientPoint((1, 0, 0), (1, 1, 0, 0, 0)), cone35)
    assert on.region is Region.ON_CONE
    assert on.exact_sq == (Fraction(1), Fraction(2))
    inside = reduce(AmbientPoint((1, 0, 0), (1, 1, 1, 0, 0)), cone35)
    assert inside.region is Region.IN_K
    outside = reduce(AmbientPoint((2, 0, 0), (1, 0, 0, 0, 0)), cone35)
    assert outside.region is Region.IN_K_COMPLEMENT


def test_reduce_float_and_dimension_check(cone35):
    p = reduce(AmbientPoint([0.6, 0.8, 0.0], [0.0, 0.0, 0.0, 0.0, 3.0]), cone35)
    assert p.r_x == pytest.approx(1.0)
    assert p.r_y == pytest.approx(3.0)
    assert p.region is Region.IN_K
    with pytest.raises(ValueError):
        reduce(AmbientPoint([1.0, 0.0], [1.0]), cone35)


def test_from_uv_round_trip(cone72):
    p = ReducedPoint.from_uv(cone72, Fraction(9, 4), Fraction(1))
    assert p.u == pytest.approx(2.25)
    assert p.v == pytest.approx(1.0)
    assert p.region is Region.IN_K_COMPLEMENT
    with pytest.raises(ValueError):
        ReducedPoint.from_uv(cone72, -1.0, 1.0)


def test_direct_construction_labels_the_region(cone35):
    # u = 4 r_x^2, v = 2 r_y^2
    assert ReducedPoint(1.0, 3.0, cone35).region is Region.IN_K
    assert ReducedPoint(2.0, 0.5, cone35).region is Region.IN_K_COMPLEMENT
    assert ReducedPoint(1.0, math.sqrt(2.0), cone35).region is Region.ON_CONE
    exact = ReducedPoint(1.0, math.sqrt(2.0), cone35, exact_sq=(Fraction(1), Fraction(2)))
    assert exact.region is Region.ON_CONE
    assert ReducedPoint(1.0, 3.0, cone35, Region.ON_CONE).region is Region.ON_CONE
    assert ReducedPoint(1.0, 3.0, cone35) == ReducedPoint.from_radii(cone35, 1.0, 3.0)
    with pytest.raises(ValueError):
        ReducedPoint(-1.0, 3.0, cone35)


@pytest.mark.parametrize("cone", CONES, ids=IDS)
def test_swapped_cone_exchanges_regions(cone, rng):
    r_x, r_y = rng.uniform(0.01, 2.0, size=(2, 500))
    labels = region_array(cone, r_x, r_y)
    swapped = region_array(cone.swapped(), r_y, r_x)
    assert np.array_equal(labels, -swapped)


@pytest.mark.parametrize("cone", CONES, ids=IDS)
def test_dist_is_distance_to_the_cone_line(cone, rng):
    e, n = cone_frame(cone)
    points = rng.uniform(0.0, 3.0, size=(200, 2))
    expected = np.abs(points @ n)
    assert np.allclose(dist_array(cone, points[:, 0], points[:, 1]), expected, rtol=1e-12, atol=1e-14)
    assert np.allclose(p_array(cone, points[:, 0], points[:, 1]), l_constant(cone) * expected,
                       rtol=1e-12, atol=1e-14)
    assert np.dot(e, n) == pytest.approx(0.0, abs=1e-15)


@pytest.mark.parametrize("cone", CONES, ids=IDS)
def test_homogeneity(cone, rng):
    for r_x, r_y, lam in rng.uniform(0.05, 2.0, size=(50, 3)):
        p = ReducedPoint.from_radii(cone, r_x, r_y)
        q = p.scaled(lam)
        assert dist_to_cone(q) == pytest.approx(lam * dist_to_cone(p), rel=1e-12, abs=1e-15)
        assert p_function(q) == pytest.approx(lam * p_function(p), rel=1e-12, abs=1e-15)
        assert q.region is p.region or p.region is Region.ON_CONE


@pytest.mark.parametrize("cone", CONES, ids=IDS)
def test_second_fundamental_form(cone):
    p = ReducedPoint.on_cone(cone, 2.0)
    assert second_fundamental_norm_sq(p) == pytest.approx((cone.m - 2) / 4.0)
    curvatures = principal_curvatures(cone, 2.0)
    assert sum(mult * kappa for kappa, mult in curvatures) == pytest.approx(0.0, abs=1e-12)
    assert sum(mult * kappa ** 2 for kappa, mult in curvatures) == pytest.approx((cone.m - 2) / 4.0)


def test_second_fundamental_form_errors(cone35):
    with pytest.raises(SingularApexError):
        second_fundamental_norm_sq(ReducedPoint.from_radii(cone35, 0.0, 0.0))
    with pytest.raises(OffConeError):
        second_fundamental_norm_sq(ReducedPoint.from_radii(cone35, 1.0, 0.1))
    with pytest.raises(SingularApexError):
        principal_curvatures(cone35, 0.0)


@pytest.mark.parametrize("cone", CONES, ids=IDS)
def test_cone_angle(cone):
    assert math.tan(cone_angle(cone)) == pytest.approx(math.sqrt((cone.h - 1) / (cone.k - 1)))
    p = ReducedPoint.on_cone(cone, 1.0)
    assert p.u == pytest.approx(p.v)


@pytest.mark.parametrize("cone", CONES, ids=IDS)
def test_link_area_matches_weight_along_the_ray(cone):
    # H^{m-1}(M ∩ B_1) = link_area / (m - 1)
    e, _ = cone_frame(cone)
    nodes, weights = leggauss(8)
    rho = (nodes + 1) / 2
    integral = np.sum(weights / 2 * weight_array(cone, rho * e[0], rho * e[1]))
    assert integral == pytest.approx(link_area(cone) / (cone.m - 1), rel=1e-12)


def test_unit_ball_volume():
    assert unit_ball_volume(1) == pytest.approx(2.0)
    assert unit_ball_volume(2) == pytest.approx(math.pi)
    assert unit_ball_volume(3) == pytest.approx(4 * math.pi / 3)
    with pytest.raises(ValueError):
        unit_ball_volume(0)


def test_worked_examples_for_the_5_3_cone():
    cone = ConeParams(k=5, h=3)
    inside = reduce(AmbientPoint([1, 0, 0, 0, 0], [2, 0, 0]), cone)
    assert (inside.u, inside.v) == (2, 16)
    assert inside.region is Region.IN_K
    on = reduce(AmbientPoint([2.0, 0.0, 0.0, 0.0, 0.0], [math.sqrt(2), 0.0, 0.0]), cone)
    assert on.region is Region.ON_CONE
    assert dist_to_cone(on) == pytest.approx(0.0, abs=1e-7)

    axis = ReducedPoint.from_radii(cone, 0.0, 1.0)
    assert dist_to_cone(axis) == pytest.approx(2 / math.sqrt(6))
    assert p_function(axis) == pytest.approx(1 / math.sqrt(2))
    assert l_constant(cone) == pytest.approx(math.sqrt(1 / 2 + 1 / 4))
