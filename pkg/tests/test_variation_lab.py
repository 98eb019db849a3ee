import dataclasses
import math

import numpy as np
import pytest

from lawson.certification import claimed_constant
from lawson.cone_geometry import ConeParams, all_certified_cones, dist_array, link_area, unit_ball_volume
from lawson.constants_chain import window_monte_carlo
from lawson.errors import (
    ConfigError,
    EmbeddednessError,
    ProfileSupportError,
    QuarterPlaneError,
    UnboundedRegionError,
)
from lawson.spectrum import RadialProfile
from lawson.variation_lab import (
    GraphRegion,
    ProfileCurve,
    RectangleRegion,
    SlabRegion,
    axisym_perimeter,
    axisym_volume,
    competitor_family,
    cone_area_in_window,
    dist_weighted_volume,
    lemma1_identity_check,
    normal_graph,
    perimeter_delta,
    profile_moment,
    theorem1_check,
    variation_sweep,
)

CONES = all_certified_cones()
IDS = [cone.label for cone in CONES]


@pytest.mark.parametrize("cone", CONES, ids=IDS)
def test_rectangle_volume_is_the_window_volume(cone):
    volume = axisym_volume(RectangleRegion(cone, 1.5))
    expected = unit_ball_volume(cone.k) * unit_ball_volume(cone.h) * 1.5 ** cone.m
    assert volume == pytest.approx(expected, rel=1e-12)


@pytest.mark.parametrize("cone", CONES, ids=IDS)
def test_wide_slab_fills_the_window(cone):
    volume = SlabRegion(cone, 1.0, 10.0).volume()
    assert volume == pytest.approx(unit_ball_volume(cone.k) * unit_ball_volume(cone.h), rel=1e-12)
    assert SlabRegion(cone, 1.0, 0.0).volume() == 0.0


def test_unbounded_regions(cone35):
    with pytest.raises(UnboundedRegionError):
        RectangleRegion(cone35, math.inf).volume()
    with pytest.raises(UnboundedRegionError):
        SlabRegion(cone35, 1.0, math.inf).volume()
    curve = normal_graph(RadialProfile.bump(0.3, 0.8, n=65), 0.05, cone35)
    with pytest.raises(UnboundedRegionError):
        axisym_perimeter(curve)


@pytest.mark.parametrize("cone", CONES, ids=IDS)
def test_cone_line_perimeter(cone):
    curve = ProfileCurve.cone_line(cone, 0.7, n=16)
    expected = link_area(cone) * 0.7 ** (cone.m - 1) / (cone.m - 1)
    assert axisym_perimeter(curve) == pytest.approx(expected, rel=1e-12)
    with_tails = dataclasses.replace(curve, tails=True)
    assert axisym_perimeter(with_tails, R=1.0) == pytest.approx(cone_area_in_window(cone, 1.0), rel=1e-12)


@pytest.mark.parametrize("cone", [ConeParams(k=3, h=5), ConeParams(k=2, h=7)], ids=["3-5", "2-7"])
def test_cone_area_against_monte_carlo_tube(cone):
    # |{dist < η} ∩ H_R| / 2η → H^{m-1}(M ∩ H_R) with an O(η^2) bias
    eta = 0.005
    estimate, stderr = window_monte_carlo(cone, 1.0, lambda X, Y: dist_array(cone, X, Y) < eta,
                                          samples=2 * 10 ** 6, seed=7)
    exact = cone_area_in_window(cone, 1.0)
    assert abs(estimate / (2 * eta) - exact) <= 5 * stderr / (2 * eta) + 1e-3 * exact


@pytest.mark.parametrize("cone", CONES, ids=IDS)
def test_perimeter_delta_matches_windowed_difference(cone):
    curve = competitor_family(cone, "sin2", amplitudes=(0.05,), n=512)[0]
    direct = axisym_perimeter(curve, R=1.0) - cone_area_in_window(cone, 1.0)
    assert perimeter_delta(curve, R=1.0) == pytest.approx(direct, rel=1e-8)
    assert perimeter_delta(curve) == pytest.approx(perimeter_delta(curve, R=1.0), rel=1e-12)


@pytest.mark.parametrize("cone", CONES, ids=IDS)
@pytest.mark.parametrize("t", [0.01, 0.02, 0.05])
def test_lemma1_identity(cone, t):
    curve = competitor_family(cone, "sin2", amplitudes=(t,), n=512)[0]
    report = lemma1_identity_check(curve, R=1.0)
    assert report.lhs > 0
    assert report.region_term > 0 and report.boundary_term >= 0
    assert report.within(1e-3)


@pytest.mark.parametrize("cone", [ConeParams(k=5, h=3), ConeParams(k=9, h=2)], ids=["5-3", "9-2"])
def test_lemma1_gap_shrinks_under_mesh_doubling(cone):
    gaps = []
    for n in (32, 64, 128):
        curve = competitor_family(cone, "sin2", amplitudes=(0.05,), n=n)[0]
        gaps.append(lemma1_identity_check(curve, R=1.0, order=2).gap)
    assert gaps[1] <= 0.5 * gaps[0]
    assert gaps[2] <= 0.5 * gaps[1]


@pytest.mark.parametrize("cone", CONES, ids=IDS)
def test_two_sign_competitors(cone):
    curve = competitor_family(cone, "wave", amplitudes=(0.02,), n=512)[0]
    report = lemma1_identity_check(curve, R=1.0)
    assert report.within(1e-3)
    assert report.lhs > 0


@pytest.mark.parametrize("cone", CONES, ids=IDS)
def test_random_perturbations_do_not_decrease_perimeter(cone, rng):
    grid = np.linspace(0.3, 0.8, 513)
    x = np.pi * (grid - 0.3) / 0.5
    for _ in range(3):
        coeffs = rng.uniform(-1.0, 1.0, 3)
        values = sum(c * np.sin((j + 1) * x) for j, c in enumerate(coeffs))
        values[0] = values[-1] = 0.0
        values /= np.max(np.abs(values))
        phi = RadialProfile(grid, values, kind="random")
        curve = normal_graph(phi, float(rng.uniform(0.005, 0.02)), cone)
        report = theorem1_check(curve, R=1.0)
        assert report.delta_p > 0
        assert report.lemma1_gap <= 1e-3
        assert report.dist_chain_holds
        assert all(report.slab_chain.values())


@pytest.mark.parametrize("cone", CONES, ids=IDS)
def test_theorem1_on_a_family(cone):
    for curve in competitor_family(cone, "sin2", n=256):
        report = theorem1_check(curve, R=1.0)
        assert report.passed
        assert report.theorem1_holds
        assert report.ratio <= report.C / 1e10
        assert report.C == pytest.approx(7.056e23)


def test_dist_chain_constant(cone72):
    curve = competitor_family(cone72, "sine", amplitudes=(0.05,), n=512)[0]
    report = theorem1_check(curve, R=1.0)
    assert report.delta_p >= float(claimed_constant(cone72)) * report.dist_volume


def test_cone_itself_has_zero_deficit(cone35):
    report = theorem1_check(ProfileCurve.cone_line(cone35, 0.9, n=64), R=1.0)
    assert report.delta_p == 0.0
    assert report.vol_delta == 0.0
    assert report.alpha == 0.0
    assert report.ratio == 0.0
    assert report.lemma1_gap <= 1e-12
    assert report.theorem1_holds


@pytest.mark.parametrize("cone", [ConeParams(k=3, h=5), ConeParams(k=11, h=2)], ids=["3-5", "11-2"])
def test_alpha_and_delta_are_dilation_invariant(cone):
    curve = competitor_family(cone, "sin2", amplitudes=(0.05,), n=256)[0]
    base = theorem1_check(curve, R=1.0)
    scaled = theorem1_check(curve.scaled(2.0), R=2.0)
    assert scaled.alpha == pytest.approx(base.alpha, rel=1e-9)
    assert scaled.delta == pytest.approx(base.delta, rel=1e-9)


@pytest.mark.parametrize("cone", [ConeParams(k=3, h=5), ConeParams(k=2, h=8)], ids=["3-5", "2-8"])
def test_volume_expansion_of_normal_graphs(cone):
    phi = RadialProfile.bump(0.3, 0.8, n=513)
    N = profile_moment(phi, cone)
    for t in (1e-3, 2e-3):
        volume = dist_weighted_volume(normal_graph(phi, t, cone))
        assert volume == pytest.approx(t ** 2 * N / 2, rel=1e-4)
        region = GraphRegion(normal_graph(phi, t, cone)).volume()
        assert region == pytest.approx(t * profile_moment(phi, cone, power=1), rel=1e-3)


def test_curve_validation(cone35):
    with pytest.raises(QuarterPlaneError):
        ProfileCurve(np.array([[-0.1, 0.2], [0.3, 0.4]]), cone35)
    phi = RadialProfile.bump(0.3, 0.8, n=65, kind="sine")
    with pytest.raises(EmbeddednessError):
        normal_graph(phi, -5.0, cone35)
    folded = ProfileCurve(np.array([[0.3, 0.4], [0.2, 0.3], [0.5, 0.6]]), cone35,
                          rho=np.array([0.5, 0.4, 0.6]), sigma=np.zeros(3))
    with pytest.raises(EmbeddednessError):
        GraphRegion(folded).volume()
    with pytest.raises(ProfileSupportError):
        competitor_family(cone35, window=(0.5, 1.2))
    curve = competitor_family(cone35, amplitudes=(0.01,), n=64)[0]
    with pytest.raises(ProfileSupportError):
        lemma1_identity_check(curve, R=0.5)


def test_variation_sweep_rows(cone72):
    events = []
    frame = variation_sweep(cone72, kinds=("sin2", "wave"), amplitudes=(0.01, 0.05), n=256,
                            callback=lambda kind, data: events.append(kind))
    # 2 profiles x (t = 0, 0.01, 0.05) x 3 slab widths
    assert len(frame) == 18
    assert list(frame["profile"]) == ["sin2"] * 9 + ["wave"] * 9
    assert list(frame["t"][:9]) == [0.0] * 3 + [0.01] * 3 + [0.05] * 3
    assert set(frame["eps"]) == {0.01, 0.05, 0.1}
    assert (frame["R"] == 1.0).all()
    assert frame["theorem1_holds"].all()
    assert frame["slab_chain_holds"].all()
    assert frame["alpha_chain_holds"].all()
    assert (frame[frame["t"] > 0]["delta_p"] > 0).all()
    assert events == ["status"] * 6


def test_variation_sweep_leads_with_the_unperturbed_cone(cone35):
    frame = variation_sweep(cone35, kinds=("sin2",), amplitudes=(0.0, 0.02), n=128, epsilons=(0.1,))
    assert list(frame["t"]) == [0.0, 0.02]
    rest = frame.iloc[0]
    for column in ("delta_p", "vol_delta", "dist_volume", "alpha", "delta", "ratio"):
        assert rest[column] == 0.0
    assert rest["lemma1_gap"] <= 1e-12
    assert rest["theorem1_holds"] and rest["alpha_chain_holds"]


@pytest.mark.parametrize("cone", [ConeParams(k=3, h=5), ConeParams(k=2, h=11)], ids=["3-5", "2-11"])
def test_variation_sweep_scales_with_the_window(cone):
    unit = variation_sweep(cone, kinds=("sin2",), amplitudes=(0.05,), R=1.0, n=256, epsilons=(0.5,))
    wide = variation_sweep(cone, kinds=("sin2",), amplitudes=(0.05,), R=2.0, n=256, epsilons=(0.5,))
    assert (wide["R"] == 2.0).all()
    assert (wide["eps"] == 0.5).all()
    assert list(wide["t"]) == list(unit["t"])
    moving = wide["t"] > 0
    assert wide[moving]["alpha"].iloc[0] == pytest.approx(unit[moving]["alpha"].iloc[0], rel=1e-9)
    assert wide[moving]["delta"].iloc[0] == pytest.approx(unit[moving]["delta"].iloc[0], rel=1e-9)
    assert wide[moving]["vol_delta"].iloc[0] == pytest.approx(2.0 ** cone.m * unit[moving]["vol_delta"].iloc[0],
                                                              rel=1e-9)


def test_alpha_intermediate_chain(cone72):
    curve = competitor_family(cone72, "sin2", amplitudes=(0.05,), n=256)[0]
    report = theorem1_check(curve, R=1.0, epsilons=(0.001, 0.01, 0.1, 2.0))
    assert set(report.alpha_chain) == {0.001, 0.01, 0.1, 2.0}
    assert all(report.alpha_chain.values())
    for eps, bound in report.alpha_chain_bound.items():
        assert bound == pytest.approx(7e10 * (report.delta / eps + 36 * eps))
        assert report.alpha <= bound
    rows = report.to_rows()
    assert [row["eps"] for row in rows] == [0.001, 0.01, 0.1, 2.0]
    assert all(row["alpha_chain_holds"] for row in rows)
    assert report.passed


def test_theorem1_check_needs_a_slab_width(cone35):
    curve = competitor_family(cone35, amplitudes=(0.01,), n=64)[0]
    with pytest.raises(ConfigError):
        theorem1_check(curve, epsilons=())
