"""
Sub-calibration
===============

Closed forms for the calibration functions

    f = (u - v) u^d / 4     (UPower, used where u > v)
    f = (u - v) v^d / 4     (VPower, used where u < v)

their gradient, the unit field g = ∇f/|∇f| and its divergence, all in reduced
coordinates u = (h-1)|x|^2, v = (k-1)|y|^2.

The divergence is available three ways:
  - div_g_closed:      the general-d polynomial form, exponents pre-combined
  - div_g_structural:  assembled from f_u, f_v, f_uu, f_uv, f_vv
  - div_g_fd:          central differences of the ambient field (test oracle)

The polynomial coefficients are defined once, over exact rationals, and shared
by the float kernels here and the interval sweep in certification.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from lawson.cone_geometry import (
    CERTIFIED_PAIRS,
    AmbientPoint,
    BranchExponents,
    ConeParams,
    ReducedPoint,
    Region,
    dist_array,
    oriented_pair,
    uv_arrays,
)
from lawson.errors import (
    DegenerateAxisError,
    OracleUnreliableError,
    SingularApexError,
    UncertifiedPairError,
    ZeroGradientError,
)


# =============================================================================
# DATA STRUCTURES
# =============================================================================

class BranchKind(Enum):
    U_POWER = "UPower"
    V_POWER = "VPower"

    @property
    def other(self) -> "BranchKind":
        return BranchKind.V_POWER if self is BranchKind.U_POWER else BranchKind.U_POWER


@dataclass(frozen=True)
class CalibrationBranch:
    region: BranchKind
    d: Fraction
    cone: ConeParams

    @property
    def a(self) -> int:
        return self.cone.u_scale

    @property
    def b(self) -> int:
        return self.cone.v_scale

    @property
    def d_float(self) -> float:
        return float(self.d)


@dataclass(frozen=True)
class FieldSample:
    g: Tuple[float, float]
    div_g: float
    grad_norm_sq: float
    branch: CalibrationBranch


@dataclass
class SignSweepReport:
    cone: ConeParams
    n_theta: int
    violations: int
    zeros_off_cone: int
    min_div_in_complement: float
    max_div_in_k: float
    # Violations with each branch used on the other side of the cone.
    swapped_reading_violations: int = 0

    @property
    def passed(self) -> bool:
        return self.violations == 0 and self.zeros_off_cone == 0


@dataclass
class GrowthReport:
    cone: ConeParams
    radii: List[float]
    max_derivative: List[float]
    products: List[float]
    worst_angles: List[float]
    spread: float
    growing: bool


# =============================================================================
# BRANCH SELECTION
# =============================================================================

def branch_exponents(cone: ConeParams) -> BranchExponents:
    """Exponents for the cone, using f ↦ -f under (u, v, h, k) ↦ (v, u, k, h)."""
    oriented = oriented_pair(cone)
    if oriented is None:
        raise UncertifiedPairError(f"{cone} is not a certified pair; pass exponents explicitly")
    exps = CERTIFIED_PAIRS[oriented]
    if oriented == (cone.h, cone.k):
        return exps
    return BranchExponents(u_power=exps.v_power, v_power=exps.u_power,
                           description=f"swapped from {exps.description}")


def branch_for(cone: ConeParams, kind: BranchKind,
               exponents: Optional[BranchExponents] = None) -> CalibrationBranch:
    exps = exponents or branch_exponents(cone)
    d = exps.u_power if kind is BranchKind.U_POWER else exps.v_power
    return CalibrationBranch(kind, Fraction(d), cone)


def branch_at(p: ReducedPoint, exponents: Optional[BranchExponents] = None) -> CalibrationBranch:
    kind = BranchKind.V_POWER if p.region is Region.IN_K else BranchKind.U_POWER
    return branch_for(p.cone, kind, exponents)


# =============================================================================
# SHARED COEFFICIENTS (exact)
# =============================================================================

def numerator_coefficients(kind: BranchKind, d: Fraction, h: int, k: int
                           ) -> Tuple[Fraction, Fraction, Fraction]:
    """Coefficients (uu, uv, vv) of the quadratic Q in |∇f|^3 div g.

    |∇f|^3 div g = (ab/8) (u - v) u^{3d-2} Q   (UPower; v^{3d-2} for VPower)
    """
    d = Fraction(d)
    if kind is BranchKind.U_POWER:
        return (
            (1 + d) ** 2 * (-1 + d * (h - 1)),
            d * (-2 + d * (1 + 2 * d - 2 * (1 + d) * h) + k),
            d ** 3 * (h - 1),
        )
    return (
        d ** 3 * (k - 1),
        d * (-2 + d + 2 * d ** 2 + h - 2 * d * (1 + d) * k),
        (d + 1) ** 2 * (-1 + d * (k - 1)),
    )


def gradient_coefficients(kind: BranchKind, d: Fraction, h: int, k: int
                          ) -> Tuple[Fraction, Fraction, Fraction]:
    """Coefficients (uu, uv, vv) of P with |∇f|^2 = u^{2d-1} P (v^{2d-1} for VPower)."""
    d = Fraction(d)
    a, b = h - 1, k - 1
    if kind is BranchKind.U_POWER:
        return (
            Fraction(a, 4) * (d + 1) ** 2,
            -Fraction(a, 2) * d * (d + 1) + Fraction(b, 4),
            Fraction(a, 4) * d ** 2,
        )
    return (
        Fraction(b, 4) * d ** 2,
        Fraction(a, 4) - Fraction(b, 2) * d * (d + 1),
        Fraction(b, 4) * (d + 1) ** 2,
    )


def _quadratic(coeffs, u, v):
    return coeffs[0] * u * u + coeffs[1] * u * v + coeffs[2] * v * v


def reduced_quotient(s, t, branch: CalibrationBranch, coeffs: Dict[str, tuple],
                     sqrt: Callable, absolute: Callable, z_norm_sq=1):
    """F = |div g| |z|^2 / dist with the (√u - √v) factor cancelled.

    s = √u and t = √v. Works for numpy arrays and for mpmath intervals, given
    the matching sqrt/abs and coefficient types.
    """
    u = s ** 2
    v = t ** 2
    q = _quadratic(coeffs["Q"], u, v)
    p = _quadratic(coeffs["P"], u, v)
    power_root = s if branch.region is BranchKind.U_POWER else t
    return (coeffs["sqrt_m2"] * (s + t) * coeffs["ab8"] * absolute(q) * z_norm_sq
            / (power_root * p * sqrt(p)))


def float_coefficients(branch: CalibrationBranch) -> Dict[str, tuple]:
    cone = branch.cone
    return {
        "Q": tuple(float(c) for c in numerator_coefficients(branch.region, branch.d, cone.h, cone.k)),
        "P": tuple(float(c) for c in gradient_coefficients(branch.region, branch.d, cone.h, cone.k)),
        "ab8": branch.a * branch.b / 8.0,
        "sqrt_m2": math.sqrt(cone.m - 2),
    }


# =============================================================================
# FLOAT KERNELS (arrays in u, v)
# =============================================================================

def f_array(branch: CalibrationBranch, u, v) -> np.ndarray:
    u, v = np.asarray(u, dtype=float), np.asarray(v, dtype=float)
    power = u if branch.region is BranchKind.U_POWER else v
    return (u - v) * power ** branch.d_float / 4.0


def partials_array(branch: CalibrationBranch, u, v):
    """(f_u, f_v, f_uu, f_uv, f_vv) on arrays."""
    u, v = np.asarray(u, dtype=float), np.asarray(v, dtype=float)
    d = branch.d_float
    with np.errstate(divide="ignore", invalid="ignore"):
        if branch.region is BranchKind.U_POWER:
            ud, ud1, ud2 = u ** d, u ** (d - 1), u ** (d - 2)
            f_u = ((d + 1) * ud - d * v * ud1) / 4
            f_v = -ud / 4
            f_uu = ((d + 1) * d * ud1 - d * (d - 1) * v * ud2) / 4
            f_uv = -d * ud1 / 4
            f_vv = np.zeros_like(u + v)
        else:
            vd, vd1, vd2 = v ** d, v ** (d - 1), v ** (d - 2)
            f_u = vd / 4
            f_v = (d * u * vd1 - (d + 1) * vd) / 4
            f_uu = np.zeros_like(u + v)
            f_uv = d * vd1 / 4
            f_vv = (d * (d - 1) * u * vd2 - (d + 1) * d * vd1) / 4
    return f_u, f_v, f_uu, f_uv, f_vv


def grad_norm_sq_array(branch: CalibrationBranch, u, v) -> np.ndarray:
    """|∇f|^2 in the displayed closed form."""
    u, v = np.asarray(u, dtype=float), np.asarray(v, dtype=float)
    d, a, b = branch.d_float, branch.a, branch.b
    # Callers reject a vanishing power variable when d < 1.
    with np.errstate(divide="ignore", invalid="ignore"):
        if branch.region is BranchKind.U_POWER:
            # (a/4) u ((d+1)u^d - d v u^{d-1})^2 + (b/4) v u^{2d}
            inner = (d + 1) * u ** d - d * v * u ** (d - 1)
            return a / 4 * u * inner ** 2 + b / 4 * v * u ** (2 * d)
        inner = d * u * v ** (d - 1) - (d + 1) * v ** d
        return a / 4 * u * v ** (2 * d) + b / 4 * v * inner ** 2


def div_g_array(branch: CalibrationBranch, u, v) -> np.ndarray:
    """div g from the general-d polynomial, exponents pre-combined.

    div g = (ab/8)(u - v) Q / (√w P^{3/2}), w the branch's power variable.
    """
    u, v = np.asarray(u, dtype=float), np.asarray(v, dtype=float)
    cone = branch.cone
    q_c = numerator_coefficients(branch.region, branch.d, cone.h, cone.k)
    p_c = gradient_coefficients(branch.region, branch.d, cone.h, cone.k)
    q = _quadratic([float(c) for c in q_c], u, v)
    p = _quadratic([float(c) for c in p_c], u, v)
    power = u if branch.region is BranchKind.U_POWER else v
    return branch.a * branch.b / 8.0 * (u - v) * q / (np.sqrt(power) * p * np.sqrt(p))


def div_g_structural_array(branch: CalibrationBranch, u, v) -> np.ndarray:
    """div g from the Hessian contraction of f in reduced variables."""
    u, v = np.asarray(u, dtype=float), np.asarray(v, dtype=float)
    a, b = branch.a, branch.b
    k, h = branch.cone.k, branch.cone.h
    f_u, f_v, f_uu, f_uv, f_vv = partials_array(branch, u, v)
    grad_sq = 4 * a * f_u ** 2 * u + 4 * b * f_v ** 2 * v
    laplacian = 2 * a * k * f_u + 4 * a * f_uu * u + 2 * b * h * f_v + 4 * b * f_vv * v
    hess_contraction = (8 * a ** 2 * f_u ** 3 * u + 16 * a ** 2 * f_u ** 2 * f_uu * u ** 2
                        + 8 * b ** 2 * f_v ** 3 * v + 16 * b ** 2 * f_v ** 2 * f_vv * v ** 2
                        + 32 * a * b * f_u * f_v * f_uv * u * v)
    return (grad_sq * laplacian - hess_contraction) / grad_sq ** 1.5


def gradient_array(branch: CalibrationBranch, r_x, r_y) -> Tuple[np.ndarray, np.ndarray]:
    """Radial components (∂f/∂r_x, ∂f/∂r_y) = (2a f_u r_x, 2b f_v r_y)."""
    r_x, r_y = np.asarray(r_x, dtype=float), np.asarray(r_y, dtype=float)
    u, v = uv_arrays(branch.cone, r_x, r_y)
    f_u, f_v, *_ = partials_array(branch, u, v)
    return 2 * branch.a * f_u * r_x, 2 * branch.b * f_v * r_y


def field_arrays(cone: ConeParams, r_x, r_y, exponents: Optional[BranchExponents] = None):
    """Unit field (g_x, g_y), div g and |∇f|^2 with branches chosen by region.

    VPower is used where u < v, UPower elsewhere (the two agree on u = v).
    """
    r_x, r_y = np.broadcast_arrays(np.asarray(r_x, dtype=float), np.asarray(r_y, dtype=float))
    u, v = uv_arrays(cone, r_x, r_y)
    if np.any((u == 0) & (v == 0)):
        raise SingularApexError("g is undefined at the apex")
    in_k = u < v
    g_x = np.empty_like(u)
    g_y = np.empty_like(u)
    div = np.empty_like(u)
    norm_sq = np.empty_like(u)
    for kind, mask in ((BranchKind.V_POWER, in_k), (BranchKind.U_POWER, ~in_k)):
        if not np.any(mask):
            continue
        branch = branch_for(cone, kind, exponents)
        gx, gy = gradient_array(branch, r_x[mask], r_y[mask])
        length = np.hypot(gx, gy)
        g_x[mask] = gx / length
        g_y[mask] = gy / length
        div[mask] = div_g_array(branch, u[mask], v[mask])
        norm_sq[mask] = grad_norm_sq_array(branch, u[mask], v[mask])
    return g_x, g_y, div, norm_sq


# =============================================================================
# POINTWISE OPERATIONS
# =============================================================================

def _check_branch_point(p: ReducedPoint, b: CalibrationBranch) -> ReducedPoint:
    p = p.relabel(b.cone)
    if p.is_apex:
        raise SingularApexError("Calibration functions are not evaluated at the apex")
    power = p.u if b.region is BranchKind.U_POWER else p.v
    if power == 0 and b.d < 1:
        raise DegenerateAxisError(
            f"{b.region.value} power variable vanishes with d = {b.d} < 1"
        )
    return p


def f_value(p: ReducedPoint, b: CalibrationBranch) -> float:
    p = p.relabel(b.cone)
    if p.is_apex:
        raise SingularApexError("Calibration functions are not evaluated at the apex")
    return float(f_array(b, p.u, p.v))


def grad_f(p: ReducedPoint, b: CalibrationBranch) -> Tuple[float, float]:
    p = _check_branch_point(p, b)
    g_x, g_y = gradient_array(b, p.r_x, p.r_y)
    return float(g_x), float(g_y)


def grad_norm_sq(p: ReducedPoint, b: CalibrationBranch) -> float:
    p = _check_branch_point(p, b)
    return float(grad_norm_sq_array(b, p.u, p.v))


def div_g_closed(p: ReducedPoint, b: CalibrationBranch) -> float:
    p = _check_branch_point(p, b)
    power = p.u if b.region is BranchKind.U_POWER else p.v
    if power == 0:
        raise ZeroGradientError(f"∇f vanishes on the axis for {b.region.value}")
    return float(div_g_array(b, p.u, p.v))


def div_g_structural(p: ReducedPoint, b: CalibrationBranch) -> float:
    p = _check_branch_point(p, b)
    if grad_norm_sq(p, b) == 0:
        raise ZeroGradientError("∇f vanishes")
    return float(div_g_structural_array(b, p.u, p.v))


def div_g_specialized(p: ReducedPoint, cone: Optional[ConeParams] = None) -> float:
    """The displayed specializations for the certified pairs.

    Swapped orientations go through div_V(u, v; h, k) = -div_U(v, u; k, h).
    """
    cone = cone or p.cone
    oriented = oriented_pair(cone)
    if oriented is None:
        raise UncertifiedPairError(f"No displayed formula for {cone}")
    p = p.relabel(cone)
    u, v = p.u, p.v
    if oriented == (cone.h, cone.k):
        return _specialized_oriented(oriented, u, v)
    return -_specialized_oriented(oriented, v, u)


def _specialized_oriented(pair: Tuple[int, int], u: float, v: float) -> float:
    h, k = pair
    if h == 2:
        if u >= v:
            num = (k - 1) / 64 * u ** 2.5 * (u - v) * (25 * u ** 2 + 12 * (k - 11) * u * v + 27 * v ** 2)
            den = (u ** 2 / 16 * (25 * u ** 2 + 2 * (2 * k - 17) * u * v + 9 * v ** 2)) ** 1.5
            return num / den
        num = (k - 1) / 8 * v * (u - v) * ((k - 1) * u ** 2 + (3 - 4 * k) * u * v + 4 * (k - 2) * v ** 2)
        den = (v / 4 * ((k - 1) * (u - 2 * v) ** 2 + u * v)) ** 1.5
        return num / den
    # (h, k) = (3, 5), d = 3/4
    if u >= v:
        num = u ** 0.25 * (u - v) * (49 * u ** 2 - 72 * u * v + 27 * v ** 2) / 32
        den = (u ** 0.5 / 32 * (49 * u ** 2 - 10 * u * v + 9 * v ** 2)) ** 1.5
        return num / den
    num = v ** 0.25 * (u - v) * (27 * u ** 2 - 123 * u * v + 98 * v ** 2) / 16
    den = (v ** 0.5 / 16 * (9 * u ** 2 - 34 * u * v + 49 * v ** 2)) ** 1.5
    return num / den


def g_field(p: ReducedPoint, cone: Optional[ConeParams] = None,
            exponents: Optional[BranchExponents] = None) -> FieldSample:
    cone = cone or p.cone
    p = p.relabel(cone)
    if p.is_apex:
        raise SingularApexError("g is undefined at the apex")
    g_x, g_y, div, norm_sq = field_arrays(cone, np.array([p.r_x]), np.array([p.r_y]), exponents)
    return FieldSample((float(g_x[0]), float(g_y[0])), float(div[0]), float(norm_sq[0]),
                       branch_at(p, exponents))


# =============================================================================
# ORACLES AND PROBES
# =============================================================================

def ambient_field(branch: CalibrationBranch, X: np.ndarray, Y: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Ambient unit field g = ∇f/|∇f| at rows of X (n, k) and Y (n, h)."""
    u = branch.a * np.sum(X ** 2, axis=1)
    v = branch.b * np.sum(Y ** 2, axis=1)
    f_u, f_v, *_ = partials_array(branch, u, v)
    grad_x = 2 * branch.a * f_u[:, None] * X
    grad_y = 2 * branch.b * f_v[:, None] * Y
    length = np.sqrt(np.sum(grad_x ** 2, axis=1) + np.sum(grad_y ** 2, axis=1))
    return grad_x / length[:, None], grad_y / length[:, None]


def div_g_fd_array(branch: CalibrationBranch, X: np.ndarray, Y: np.ndarray,
                   step: float) -> np.ndarray:
    """Central-difference divergence of the ambient unit field."""
    X = np.atleast_2d(np.asarray(X, dtype=float))
    Y = np.atleast_2d(np.asarray(Y, dtype=float))
    cone = branch.cone
    r_x = np.linalg.norm(X, axis=1)
    r_y = np.linalg.norm(Y, axis=1)
    dist = dist_array(cone, r_x, r_y)
    if np.any(dist <= 10 * step) or np.any(np.hypot(r_x, r_y) <= 10 * step):
        raise OracleUnreliableError(
            f"Step {step} too large: min distance to cone {dist.min():.3g}"
        )
    total = np.zeros(X.shape[0])
    for block, other, first in ((X, Y, True), (Y, X, False)):
        for i in range(block.shape[1]):
            plus, minus = block.copy(), block.copy()
            plus[:, i] += step
            minus[:, i] -= step
            if first:
                g_plus = ambient_field(branch, plus, other)[0][:, i]
                g_minus = ambient_field(branch, minus, other)[0][:, i]
            else:
                g_plus = ambient_field(branch, other, plus)[1][:, i]
                g_minus = ambient_field(branch, other, minus)[1][:, i]
            total += (g_plus - g_minus) / (2 * step)
    return total


def div_g_fd(p: AmbientPoint, b: CalibrationBranch, step: float = 1e-5) -> float:
    x, y = p.as_arrays()
    return float(div_g_fd_array(b, x[None, :], y[None, :], step)[0])


def sign_sweep(cone: ConeParams, n_theta: int = 100_000,
               exponents: Optional[BranchExponents] = None) -> SignSweepReport:
    """Check div g <= 0 in K and >= 0 outside K along the unit arc."""
    theta = (np.arange(n_theta) + 0.5) * (np.pi / 2) / n_theta
    r_x, r_y = np.cos(theta), np.sin(theta)
    u, v = uv_arrays(cone, r_x, r_y)
    _, _, div, _ = field_arrays(cone, r_x, r_y, exponents)
    in_k = u < v
    outside = u > v
    violations = int(np.sum(in_k & (div > 0)) + np.sum(outside & (div < 0)))
    zeros = int(np.sum((in_k | outside) & (div == 0)))
    exps = exponents or branch_exponents(cone)
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        u_side = div_g_array(branch_for(cone, BranchKind.U_POWER, exps), u[in_k], v[in_k])
        v_side = div_g_array(branch_for(cone, BranchKind.V_POWER, exps), u[outside], v[outside])
    swapped = int(np.sum(~(u_side <= 0)) + np.sum(~(v_side >= 0)))
    return SignSweepReport(
        cone=cone,
        n_theta=n_theta,
        violations=violations,
        zeros_off_cone=zeros,
        min_div_in_complement=float(div[outside].min()) if np.any(outside) else 0.0,
        max_div_in_k=float(div[in_k].max()) if np.any(in_k) else 0.0,
        swapped_reading_violations=swapped,
    )


def _derivative_norm(cone: ConeParams, r_x: np.ndarray, r_y: np.ndarray, step: np.ndarray,
                     exponents: Optional[BranchExponents]) -> np.ndarray:
    """Frobenius norm of the ambient derivative of the axisymmetric field g."""
    gx, gy, _, _ = field_arrays(cone, r_x, r_y, exponents)
    gx_xp, gy_xp, _, _ = field_arrays(cone, r_x + step, r_y, exponents)
    gx_xm, gy_xm, _, _ = field_arrays(cone, r_x - step, r_y, exponents)
    gx_yp, gy_yp, _, _ = field_arrays(cone, r_x, r_y + step, exponents)
    gx_ym, gy_ym, _, _ = field_arrays(cone, r_x, r_y - step, exponents)
    dxx = (gx_xp - gx_xm) / (2 * step)
    dxy = (gx_yp - gx_ym) / (2 * step)
    dyx = (gy_xp - gy_xm) / (2 * step)
    dyy = (gy_yp - gy_ym) / (2 * step)
    # Tangential parts of a radial field: g_x/r_x on k-1 directions, g_y/r_y on h-1.
    return np.sqrt(dxx ** 2 + dxy ** 2 + dyx ** 2 + dyy ** 2
                   + (cone.k - 1) * (gx / r_x) ** 2 + (cone.h - 1) * (gy / r_y) ** 2)


def derivative_growth_probe(cone: ConeParams, radii: Sequence[float] = (1.0, 0.1, 0.01),
                            n_directions: int = 256, step_rel: float = 1e-6,
                            exponents: Optional[BranchExponents] = None) -> GrowthReport:
    """Sample max |Dg| on arcs of the given radii and report max |Dg|·|z|."""
    theta_star = math.atan2(math.sqrt(cone.h - 1), math.sqrt(cone.k - 1))
    theta = (np.arange(n_directions) + 0.5) * (np.pi / 2) / n_directions
    theta = theta[np.abs(theta - theta_star) > 1e-3]
    maxima, products, angles = [], [], []
    for radius in radii:
        r_x, r_y = radius * np.cos(theta), radius * np.sin(theta)
        norms = _derivative_norm(cone, r_x, r_y, np.full_like(r_x, step_rel * radius), exponents)
        worst = int(np.argmax(norms))
        maxima.append(float(norms[worst]))
        products.append(float(norms[worst] * radius))
        angles.append(float(theta[worst]))
    spread = max(products) / min(products)
    return GrowthReport(
        cone=cone,
        radii=list(radii),
        max_derivative=maxima,
        products=products,
        worst_angles=angles,
        spread=spread,
        growing=products[-1] > 2 * products[0],
    )
