from fractions import Fraction

import numpy as np
import pytest

from lawson.cone_geometry import (
    AmbientPoint,
    ConeParams,
    ReducedPoint,
    Region,
    all_certified_cones,
    cone_frame,
    dist_array,
    uv_arrays,
)
from lawson.errors import (
    DegenerateAxisError,
    OracleUnreliableError,
    SingularApexError,
    UncertifiedPairError,
    ZeroGradientError,
)
from lawson.subcalibration import (
    BranchKind,
    branch_exponents,
    branch_for,
    derivative_growth_probe,
    div_g_array,
    div_g_closed,
    div_g_fd,
    div_g_fd_array,
    div_g_specialized,
    div_g_structural,
    div_g_structural_array,
    f_array,
    f_value,
    field_arrays,
    g_field,
    grad_f,
    grad_norm_sq,
    sign_sweep,
)

CONES = all_certified_cones()
IDS = [cone.label for cone in CONES]


def _ambient_points(rng, cone, n, z_range=(2.0, 4.0), theta_margin=0.3):
    """Random points of R^k x R^h with radii in a wedge away from the axes."""
    theta = rng.uniform(theta_margin, np.pi / 2 - theta_margin, n)
    radius = rng.uniform(*z_range, n)
    X = rng.standard_normal((n, cone.k))
    Y = rng.standard_normal((n, cone.h))
    X *= (radius * np.cos(theta) / np.linalg.norm(X, axis=1))[:, None]
    Y *= (radius * np.sin(theta) / np.linalg.norm(Y, axis=1))[:, None]
    return X, Y


def test_branch_exponents_orientation():
    oriented = branch_exponents(ConeParams(k=7, h=2))
    assert (oriented.u_power, oriented.v_power) == (Fraction(3, 2), Fraction(1))
    swapped = branch_exponents(ConeParams(k=2, h=7))
    assert (swapped.u_power, swapped.v_power) == (Fraction(1), Fraction(3, 2))
    both = branch_exponents(ConeParams(k=5, h=3))
    assert both.u_power == both.v_power == Fraction(3, 4)
    with pytest.raises(UncertifiedPairError):
        branch_exponents(ConeParams(k=4, h=4))
    assert BranchKind.U_POWER.other is BranchKind.V_POWER


@pytest.mark.parametrize("cone", CONES, ids=IDS)
def test_specialized_matches_general_formula(cone, rng):
    r_x, r_y = rng.uniform(0.01, 1.0, size=(2, 10_000))
    _, _, closed, _ = field_arrays(cone, r_x, r_y)
    specialized = np.array([div_g_specialized(ReducedPoint.from_radii(cone, x, y))
                            for x, y in zip(r_x, r_y)])
    assert np.allclose(specialized, closed, rtol=1e-12, atol=0.0)


@pytest.mark.parametrize("cone", CONES, ids=IDS)
def test_structural_matches_closed_form(cone, rng):
    r_x, r_y = rng.uniform(0.05, 1.0, size=(2, 2000))
    u, v = uv_arrays(cone, r_x, r_y)
    for kind in BranchKind:
        branch = branch_for(cone, kind)
        closed = div_g_array(branch, u, v)
        structural = div_g_structural_array(branch, u, v)
        assert np.allclose(structural, closed, rtol=1e-9, atol=1e-12)


@pytest.mark.parametrize("cone", CONES, ids=IDS)
def test_finite_difference_oracle(cone, rng):
    X, Y = _ambient_points(rng, cone, 10_000)
    r_x = np.linalg.norm(X, axis=1)
    r_y = np.linalg.norm(Y, axis=1)
    u, v = uv_arrays(cone, r_x, r_y)
    away = dist_array(cone, r_x, r_y) > 0.01
    for kind, mask in ((BranchKind.U_POWER, away & (u > v)), (BranchKind.V_POWER, away & (u < v))):
        if not np.any(mask):
            continue
        branch = branch_for(cone, kind)
        fd = div_g_fd_array(branch, X[mask], Y[mask], step=1e-5)
        closed = div_g_array(branch, u[mask], v[mask])
        assert np.allclose(fd, closed, rtol=1e-6, atol=1e-7)


@pytest.mark.parametrize("cone", CONES, ids=IDS)
def test_f_is_odd_under_swapping_the_factors(cone, rng):
    u, v = rng.uniform(0.01, 3.0, size=(2, 1000))
    swapped = cone.swapped()
    for kind in BranchKind:
        f = f_array(branch_for(cone, kind), u, v)
        mirrored = f_array(branch_for(swapped, kind.other), v, u)
        assert np.allclose(f, -mirrored, rtol=1e-14, atol=0.0)


@pytest.mark.parametrize("cone", CONES, ids=IDS)
def test_finite_difference_error_shrinks_fourfold(cone, rng):
    X, Y = _ambient_points(rng, cone, 2000)
    r_x = np.linalg.norm(X, axis=1)
    r_y = np.linalg.norm(Y, axis=1)
    u, v = uv_arrays(cone, r_x, r_y)
    away = dist_array(cone, r_x, r_y) > 0.3
    for kind, mask in ((BranchKind.U_POWER, away & (u > v)), (BranchKind.V_POWER, away & (u < v))):
        if np.count_nonzero(mask) < 10:
            continue
        branch = branch_for(cone, kind)
        closed = div_g_array(branch, u[mask], v[mask])
        errors = [np.linalg.norm(div_g_fd_array(branch, X[mask], Y[mask], step) - closed)
                  for step in (1e-2, 5e-3, 2.5e-3)]
        assert 3.5 <= errors[0] / errors[1] <= 4.5
        assert 3.5 <= errors[1] / errors[2] <= 4.5



def test_finite_difference_single_point(cone72):
    p = AmbientPoint([0.9, 0.1, 0.0, 0.0, 0.0, 0.0, 0.0], [0.2, 0.0])
    reduced = ReducedPoint.from_radii(cone72, np.hypot(0.9, 0.1), 0.2)
    branch = branch_for(cone72, BranchKind.U_POWER)
    assert div_g_fd(p, branch) == pytest.approx(div_g_closed(reduced, branch), rel=1e-6, abs=1e-7)


def test_oracle_refuses_points_near_the_cone(cone35):
    r = ReducedPoint.on_cone(cone35, 1.0)
    p = AmbientPoint([r.r_x, 0.0, 0.0], [r.r_y, 0.0, 0.0, 0.0, 0.0])
    with pytest.raises(OracleUnreliableError):
        div_g_fd(p, branch_for(cone35, BranchKind.U_POWER))


@pytest.mark.parametrize("cone", CONES, ids=IDS)
def test_sign_sweep(cone):
    report = sign_sweep(cone, n_theta=100_000)
    assert report.passed
    assert report.violations == 0
    assert report.min_div_in_complement > 0
    assert report.max_div_in_k < 0
    assert 0 <= report.swapped_reading_violations <= report.n_theta


@pytest.mark.parametrize("cone", CONES, ids=IDS)
def test_field_is_the_unit_normal_on_the_cone(cone, rng):
    sample = g_field(ReducedPoint.on_cone(cone, 1.7))
    _, n = cone_frame(cone)
    assert np.allclose(sample.g, n, atol=1e-12)

    r_x, r_y = rng.uniform(0.01, 1.0, size=(2, 1000))
    g_x, g_y, _, norm_sq = field_arrays(cone, r_x, r_y)
    assert np.allclose(np.hypot(g_x, g_y), 1.0)
    assert np.all(norm_sq > 0)


@pytest.mark.parametrize("cone", CONES, ids=IDS)
def test_divergence_scales_like_inverse_radius(cone, rng):
    r_x, r_y = rng.uniform(0.05, 1.0, size=(2, 200))
    _, _, div, _ = field_arrays(cone, r_x, r_y)
    _, _, div_scaled, _ = field_arrays(cone, 3 * r_x, 3 * r_y)
    assert np.allclose(div_scaled, div / 3, rtol=1e-10, atol=1e-12)


@pytest.mark.parametrize("cone", CONES, ids=IDS)
def test_derivative_growth_is_inverse_linear(cone):
    report = derivative_growth_probe(cone)
    assert not report.growing
    assert report.spread == pytest.approx(1.0, rel=1e-3)


def test_pointwise_error_paths(cone35, cone72):
    apex = ReducedPoint.from_radii(cone35, 0.0, 0.0)
    with pytest.raises(SingularApexError):
        g_field(apex)
    with pytest.raises(SingularApexError):
        div_g_closed(apex, branch_for(cone35, BranchKind.U_POWER))
    with pytest.raises(SingularApexError):
        field_arrays(cone35, np.array([0.0, 1.0]), np.array([0.0, 1.0]))

    # d = 3/4 < 1: the VPower power variable v vanishes on the x-axis
    on_x_axis = ReducedPoint.from_radii(cone35, 1.0, 0.0)
    with pytest.raises(DegenerateAxisError):
        div_g_closed(on_x_axis, branch_for(cone35, BranchKind.V_POWER))

    # d = 1: ∇f vanishes on the x-axis for VPower
    with pytest.raises(ZeroGradientError):
        div_g_closed(ReducedPoint.from_radii(cone72, 1.0, 0.0), branch_for(cone72, BranchKind.V_POWER))
    with pytest.raises(ZeroGradientError):
        div_g_structural(ReducedPoint.from_radii(cone72, 1.0, 0.0), branch_for(cone72, BranchKind.V_POWER))

    with pytest.raises(UncertifiedPairError):
        div_g_specialized(ReducedPoint.from_radii(ConeParams(k=4, h=4), 1.0, 1.0))


@pytest.mark.parametrize("cone", CONES, ids=IDS)
def test_gradient_matches_differences_of_f(cone, rng):
    h = 1e-6
    for r_x, r_y in rng.uniform(0.3, 1.0, size=(20, 2)):
        p = ReducedPoint.from_radii(cone, r_x, r_y)
        if p.region is Region.ON_CONE:
            continue
        kind = BranchKind.U_POWER if p.u > p.v else BranchKind.V_POWER
        branch = branch_for(cone, kind)
        g_x, g_y = grad_f(p, branch)
        fd_x = (f_value(ReducedPoint.from_radii(cone, r_x + h, r_y), branch)
                - f_value(ReducedPoint.from_radii(cone, r_x - h, r_y), branch)) / (2 * h)
        fd_y = (f_value(ReducedPoint.from_radii(cone, r_x, r_y + h), branch)
                - f_value(ReducedPoint.from_radii(cone, r_x, r_y - h), branch)) / (2 * h)
        assert g_x == pytest.approx(fd_x, rel=1e-6, abs=1e-8)
        assert g_y == pytest.approx(fd_y, rel=1e-6, abs=1e-8)
        assert grad_norm_sq(p, branch) == pytest.approx(g_x ** 2 + g_y ** 2, rel=1e-10)


def test_f_changes_sign_across_the_cone(cone35):
    branch = branch_for(cone35, BranchKind.U_POWER)
    assert f_value(ReducedPoint.from_radii(cone35, 1.0, 0.5), branch) > 0
    assert f_value(ReducedPoint.from_radii(cone35, 0.5, 1.0), branch) < 0
    assert f_value(ReducedPoint.on_cone(cone35, 1.0), branch) == pytest.approx(0.0, abs=1e-15)
