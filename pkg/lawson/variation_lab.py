"""
Variation Lab
=============

Axisymmetric competitor sets F for a Lawson cone, handled through their
profile curves in the quarter plane {(r_x, r_y) : r_x, r_y >= 0}.

Every m-dimensional quantity reduces to a 1-D or 2-D Gauss quadrature
against the coarea weight w = k ω_k r_x^{k-1} · h ω_h r_y^{h-1}:

    P(F; H_R)    = ∫ over the profile curve (clipped to [0,R]^2) of w dℓ
    |region|     = ∬ over the region of w dr_x dr_y

Profile curves are polylines. On linear segments the weight is a polynomial
of degree m-2 in the segment parameter, so Gauss rules of order >= m/2 are
exact up to rounding.

Usage:
    from lawson.variation_lab import competitor_family, theorem1_check
    for curve in competitor_family(cone, "sin2"):
        report = theorem1_check(curve, cone, R=1.0)
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from numpy.polynomial.legendre import leggauss

from lawson.cone_geometry import (
    ConeParams,
    cone_angle,
    cone_frame,
    link_area,
    weight_array,
)
from lawson.errors import (
    ConfigError,
    EmbeddednessError,
    ProfileSupportError,
    QuarterPlaneError,
    UnboundedRegionError,
)
from lawson.spectrum import PROFILE_KINDS, RadialProfile
from lawson.subcalibration import field_arrays


# =============================================================================
# CONFIGURATION
# =============================================================================

DEFAULT_ORDER = 8
DEFAULT_MESH = 2 ** 12
DEFAULT_WINDOW = (0.3, 0.8)
DEFAULT_AMPLITUDES = (0.01, 0.02, 0.05, 0.1)
DEFAULT_EPSILONS = (0.01, 0.05, 0.1)
LEMMA1_TOLERANCE = 1e-3

Density = Callable[[np.ndarray, np.ndarray], np.ndarray]


def _gauss(order: int) -> Tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre nodes and weights on [0, 1]."""
    nodes, weights = leggauss(order)
    return (nodes + 1) / 2, weights / 2


# =============================================================================
# DATA STRUCTURES
# =============================================================================

@dataclass
class ProfileCurve:
    """Polyline in the quarter plane, oriented outward from the apex.

    With `tails` set, the boundary continues along the cone line from the apex
    to the first vertex and from the last vertex to infinity. `rho` and `sigma`
    are the exact (e, n) coordinates of the vertices when the curve was built
    as a normal graph.
    """
    points: np.ndarray
    cone: ConeParams
    tails: bool = False
    rho: Optional[np.ndarray] = None
    sigma: Optional[np.ndarray] = None
    t: float = 0.0
    kind: str = "custom"

    def __post_init__(self):
        self.points = np.asarray(self.points, dtype=float).reshape(-1, 2)
        if np.any(self.points < 0):
            raise QuarterPlaneError("Profile curve leaves the quarter plane")

    @property
    def segments(self) -> Tuple[np.ndarray, np.ndarray]:
        return self.points[:-1], self.points[1:]

    def coordinates(self) -> Tuple[np.ndarray, np.ndarray]:
        """(rho, sigma) of the vertices in the cone frame."""
        if self.rho is not None and self.sigma is not None:
            return self.rho, self.sigma
        e, n = cone_frame(self.cone)
        return self.points @ e, self.points @ n

    def scaled(self, lam: float) -> "ProfileCurve":
        rho = None if self.rho is None else self.rho * lam
        sigma = None if self.sigma is None else self.sigma * lam
        return ProfileCurve(self.points * lam, self.cone, self.tails, rho, sigma, self.t * lam, self.kind)

    def inside_window(self, R: float) -> bool:
        return bool(np.all(self.points < R))

    @classmethod
    def cone_line(cls, cone: ConeParams, rho_end: float, n: int = 1) -> "ProfileCurve":
        """The cone's own profile from the apex to distance rho_end."""
        e, _ = cone_frame(cone)
        rho = np.linspace(0.0, rho_end, n + 1)
        return cls(np.outer(rho, e), cone, rho=rho, sigma=np.zeros_like(rho), kind="cone")


@dataclass
class Lemma1Report:
    lhs: float
    region_term: float
    boundary_term: float
    segments: int

    @property
    def rhs(self) -> float:
        return self.region_term + self.boundary_term

    @property
    def gap(self) -> float:
        return abs(self.lhs - self.rhs) / max(abs(self.lhs), 1e-12)

    def within(self, tolerance: float = LEMMA1_TOLERANCE) -> bool:
        return self.gap <= tolerance


@dataclass
class VariationReport:
    cone: ConeParams
    R: float
    t: float
    kind: str
    delta_p: float
    vol_delta: float
    dist_volume: float
    lemma1_lhs: float
    lemma1_rhs: float
    lemma1_gap: float
    alpha: float
    delta: float
    ratio: float
    C: float
    theorem1_holds: bool
    dist_chain_holds: bool
    slab_chain: Dict[float, bool] = field(default_factory=dict)
    # α <= 7·10¹⁰ (Rδ/ε + 36ε/R) per ε; True outright above the ε gate.
    alpha_chain_bound: Dict[float, float] = field(default_factory=dict)
    alpha_chain: Dict[float, bool] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return (self.theorem1_holds and self.dist_chain_holds and all(self.slab_chain.values())
                and all(self.alpha_chain.values())
                and self.delta_p >= 0 and self.lemma1_gap <= LEMMA1_TOLERANCE)

    def to_rows(self) -> List[Dict[str, Any]]:
        """One row per slab width ε."""
        base = {
            "cone": self.cone.label,
            "profile": self.kind,
            "R": self.R,
            "t": self.t,
            "delta_p": self.delta_p,
            "vol_delta": self.vol_delta,
            "dist_volume": self.dist_volume,
            "lemma1_rhs": self.lemma1_rhs,
            "lemma1_gap": self.lemma1_gap,
            "alpha": self.alpha,
            "delta": self.delta,
            "ratio": self.ratio,
            "theorem1_holds": self.theorem1_holds,
            "dist_chain_holds": self.dist_chain_holds,
        }
        return [
            dict(base, eps=eps, slab_chain_holds=self.slab_chain[eps],
                 alpha_chain_bound=self.alpha_chain_bound[eps], alpha_chain_holds=self.alpha_chain[eps])
            for eps in self.slab_chain
        ]


# =============================================================================
# REGIONS
# =============================================================================

@dataclass
class RectangleRegion:
    """The quarter-plane trace [0,R]^2 of the window H_R = B_R^k x B_R^h."""
    cone: ConeParams
    R: float

    def volume(self, density: Optional[Density] = None, order: int = DEFAULT_ORDER) -> float:
        if not math.isfinite(self.R):
            raise UnboundedRegionError("Window radius must be finite")
        nodes, weights = _gauss(order)
        X, Y = np.meshgrid(nodes * self.R, nodes * self.R, indexing="ij")
        integrand = weight_array(self.cone, X, Y)
        if density is not None:
            integrand = integrand * density(X, Y)
        return float(self.R ** 2 * np.einsum("i,j,ij->", weights, weights, integrand))


@dataclass
class SlabRegion:
    """{p < eps} ∩ [0,R]^2, sliced in r_y."""
    cone: ConeParams
    R: float
    eps: float

    def breakpoints(self) -> np.ndarray:
        sa, sb = math.sqrt(self.cone.u_scale), math.sqrt(self.cone.v_scale)
        R, eps = self.R, self.eps
        candidates = [0.0, R, eps * sa, sa * (R / sb - eps), sa * (R / sb + eps)]
        return np.unique(np.clip(candidates, 0.0, R))

    def volume(self, density: Optional[Density] = None, order: int = DEFAULT_ORDER) -> float:
        if not (math.isfinite(self.R) and math.isfinite(self.eps)):
            raise UnboundedRegionError("Slab window must be bounded")
        if self.eps <= 0:
            return 0.0
        sa, sb = math.sqrt(self.cone.u_scale), math.sqrt(self.cone.v_scale)
        nodes, weights = _gauss(order)
        edges = self.breakpoints()
        lo_y, hi_y = edges[:-1], edges[1:]
        # outer nodes in r_y, shape (pieces, order)
        Y = lo_y[:, None] + (hi_y - lo_y)[:, None] * nodes[None, :]
        x_lo = np.clip(sb * (Y / sa - self.eps), 0.0, self.R)
        x_hi = np.clip(sb * (Y / sa + self.eps), 0.0, self.R)
        X = x_lo[..., None] + (x_hi - x_lo)[..., None] * nodes
        Yb = np.broadcast_to(Y[..., None], X.shape)
        integrand = weight_array(self.cone, X, Yb)
        if density is not None:
            integrand = integrand * density(X, Yb)
        inner = (x_hi - x_lo) * np.einsum("k,pjk->pj", weights, integrand)
        return float(np.sum((hi_y - lo_y) * (inner @ weights)))


@dataclass
class GraphRegion:
    """The region K Δ F swept between the cone line and a normal-graph curve."""
    curve: ProfileCurve

    def _pieces(self) -> Tuple[np.ndarray, ...]:
        rho, sigma = self.curve.coordinates()
        if np.any(np.diff(rho) < 0):
            raise EmbeddednessError("Curve is not a graph over the cone line")
        r0, r1, s0, s1 = rho[:-1], rho[1:], sigma[:-1], sigma[1:]
        cross = (s0 * s1) < 0
        if np.any(cross):
            # Split at sign changes so |sigma| is linear on every piece.
            frac = s0[cross] / (s0[cross] - s1[cross])
            rc = r0[cross] + frac * (r1[cross] - r0[cross])
            r0 = np.concatenate([r0[~cross], r0[cross], rc])
            r1 = np.concatenate([r1[~cross], rc, r1[cross]])
            s0 = np.concatenate([s0[~cross], s0[cross], np.zeros_like(rc)])
            s1 = np.concatenate([s1[~cross], np.zeros_like(rc), s1[cross]])
        return r0, r1, s0, s1

    def integrate(self, integrand: Callable[[np.ndarray, np.ndarray, np.ndarray], np.ndarray],
                  order: int = DEFAULT_ORDER) -> float:
        """∬ integrand(r_x, r_y, sigma) · w over the region."""
        r0, r1, s0, s1 = self._pieces()
        keep = (r1 > r0) & ((s0 != 0) | (s1 != 0))
        if not np.any(keep):
            return 0.0
        r0, r1, s0, s1 = r0[keep], r1[keep], s0[keep], s1[keep]
        e, n = cone_frame(self.curve.cone)
        nodes, weights = _gauss(order)
        rho = r0[:, None] + (r1 - r0)[:, None] * nodes
        height = s0[:, None] + (s1 - s0)[:, None] * nodes
        sigma = height[..., None] * nodes
        X = rho[..., None] * e[0] + sigma * n[0]
        Y = rho[..., None] * e[1] + sigma * n[1]
        values = integrand(X, Y, sigma) * weight_array(self.curve.cone, X, Y)
        inner = np.abs(height) * np.einsum("k,pjk->pj", weights, values)
        return float(np.sum((r1 - r0) * (inner @ weights)))

    def volume(self, density: Optional[Density] = None, order: int = DEFAULT_ORDER) -> float:
        if density is None:
            return self.integrate(lambda X, Y, S: np.ones_like(X), order)
        return self.integrate(lambda X, Y, S: density(X, Y), order)


def axisym_volume(region, density: Optional[Density] = None, order: int = DEFAULT_ORDER) -> float:
    """∬ w dr_x dr_y over a rectangle, slab or normal-graph region."""
    return region.volume(density, order)


def dist_weighted_volume(curve: ProfileCurve, order: int = DEFAULT_ORDER) -> float:
    """∫_{K Δ F} dist(z, M) dz; in the cone frame dist is |sigma|."""
    return GraphRegion(curve).integrate(lambda X, Y, S: np.abs(S), order)


# =============================================================================
# PERIMETER
# =============================================================================

def _clip_to_window(P0: np.ndarray, P1: np.ndarray, R: Optional[float]) -> Tuple[np.ndarray, np.ndarray]:
    """Parameter range [s_lo, s_hi] of each segment inside [0,R]^2."""
    s_lo = np.zeros(len(P0))
    s_hi = np.ones(len(P0))
    if R is None:
        return s_lo, s_hi
    d = P1 - P0
    for c in range(2):
        with np.errstate(divide="ignore", invalid="ignore"):
            bound = (R - P0[:, c]) / d[:, c]
        s_hi = np.where(d[:, c] > 0, np.minimum(s_hi, bound), s_hi)
        s_lo = np.where(d[:, c] < 0, np.maximum(s_lo, bound), s_lo)
        outside = (d[:, c] == 0) & (P0[:, c] > R)
        s_hi = np.where(outside, s_lo, s_hi)
    return s_lo, np.maximum(s_hi, s_lo)


def _segment_integrals(P0: np.ndarray, P1: np.ndarray, cone: ConeParams, R: Optional[float],
                       order: int, integrand: Optional[Callable] = None) -> np.ndarray:
    """∫ integrand · w dℓ along each segment, clipped to the window."""
    s_lo, s_hi = _clip_to_window(P0, P1, R)
    nodes, weights = _gauss(order)
    s = s_lo[:, None] + (s_hi - s_lo)[:, None] * nodes
    d = P1 - P0
    X = P0[:, 0:1] + s * d[:, 0:1]
    Y = P0[:, 1:2] + s * d[:, 1:2]
    values = weight_array(cone, X, Y)
    if integrand is not None:
        values = values * integrand(X, Y, d)
    length = np.hypot(d[:, 0], d[:, 1]) * (s_hi - s_lo)
    return length * (values @ weights)


def cone_area_in_window(cone: ConeParams, R: float) -> float:
    """H^{m-1}(M ∩ H_R) in closed form."""
    theta = cone_angle(cone)
    rho_max = R / max(math.cos(theta), math.sin(theta))
    return link_area(cone) * rho_max ** (cone.m - 1) / (cone.m - 1)


def _ray_area(cone: ConeParams, rho_lo: float, rho_hi: float, R: Optional[float]) -> float:
    if R is not None:
        theta = cone_angle(cone)
        rho_max = R / max(math.cos(theta), math.sin(theta))
        rho_lo, rho_hi = min(rho_lo, rho_max), min(rho_hi, rho_max)
    return link_area(cone) * (rho_hi ** (cone.m - 1) - rho_lo ** (cone.m - 1)) / (cone.m - 1)


def axisym_perimeter(curve: ProfileCurve, R: Optional[float] = None, order: int = DEFAULT_ORDER) -> float:
    """Perimeter of the axisymmetric hypersurface traced by the curve, inside H_R."""
    if curve.tails and R is None:
        raise UnboundedRegionError("A curve with tails has infinite perimeter without a window")
    total = 0.0
    if len(curve.points) >= 2:
        P0, P1 = curve.segments
        total = float(np.sum(_segment_integrals(P0, P1, curve.cone, R, order)))
    if curve.tails:
        rho, _ = curve.coordinates()
        total += _ray_area(curve.cone, 0.0, float(rho[0]), R)
        total += _ray_area(curve.cone, float(rho[-1]), math.inf, R)
    return total


def perimeter_delta(curve: ProfileCurve, R: Optional[float] = None, order: int = DEFAULT_ORDER) -> float:
    """P(F; H_R) - P(K; H_R), summed segment by segment against the cone line."""
    if len(curve.points) < 2:
        return 0.0
    rho, _ = curve.coordinates()
    e, _ = cone_frame(curve.cone)
    P0, P1 = curve.segments
    ray = np.outer(rho, e)
    graph = _segment_integrals(P0, P1, curve.cone, R, order)
    line = _segment_integrals(ray[:-1], ray[1:], curve.cone, R, order)
    return float(np.sum(graph - line))


# =============================================================================
# COMPETITORS
# =============================================================================

def normal_graph(phi: RadialProfile, t: float, cone: ConeParams) -> ProfileCurve:
    """Profile of ∂F = {z + t φ(z) ν_K(z)}: vertices ρ e + t φ(ρ) n."""
    e, n = cone_frame(cone)
    rho = phi.grid.copy()
    sigma = t * phi.values
    points = np.outer(rho, e) + np.outer(sigma, n)
    if np.any(points[1:-1] <= 0):
        raise EmbeddednessError(f"Normal graph at t={t} leaves the open quarter plane")
    return ProfileCurve(points, cone, tails=True, rho=rho, sigma=sigma, t=t, kind=phi.kind)


def profile_moment(phi: RadialProfile, cone: ConeParams, power: int = 2, order: int = DEFAULT_ORDER) -> float:
    """∫ φ_lin(ρ)^power w(ρ e) dρ for the piecewise-linear interpolant of φ."""
    e, _ = cone_frame(cone)
    nodes, weights = _gauss(order)
    r0, r1 = phi.grid[:-1], phi.grid[1:]
    f0, f1 = phi.values[:-1], phi.values[1:]
    rho = r0[:, None] + (r1 - r0)[:, None] * nodes
    values = (f0[:, None] + (f1 - f0)[:, None] * nodes) ** power
    w = weight_array(cone, rho * e[0], rho * e[1])
    return float(np.sum((r1 - r0) * ((values * w) @ weights)))


def competitor_family(cone: ConeParams, kind: str = "sin2",
                      window: Tuple[float, float] = DEFAULT_WINDOW,
                      amplitudes: Sequence[float] = DEFAULT_AMPLITUDES,
                      R: float = 1.0, n: int = DEFAULT_MESH) -> List[ProfileCurve]:
    """Normal graphs of one profile kind at each amplitude; window and amplitudes are in units of R."""
    if not 0 < window[0] < window[1] < 1:
        raise ProfileSupportError(f"Support window {window} must lie inside (0, 1)")
    phi = RadialProfile.bump(window[0] * R, window[1] * R, n + 1, kind)
    return [normal_graph(phi, float(t) * R, cone) for t in amplitudes]


# =============================================================================
# IDENTITIES AND INEQUALITIES
# =============================================================================

def lemma1_identity_check(curve: ProfileCurve, cone: Optional[ConeParams] = None,
                          R: float = 1.0, order: int = DEFAULT_ORDER) -> Lemma1Report:
    """P(F) - P(K) against ∫_{KΔF} |div g| + ∫_{∂F} (1 - g·ν_F), both in H_R."""
    cone = cone or curve.cone
    if not curve.inside_window(R):
        raise ProfileSupportError("K Δ F must be compactly contained in the window")
    lhs = perimeter_delta(curve, R, order)

    def abs_div(X, Y, S):
        return np.abs(field_arrays(cone, X, Y)[2])

    region_term = GraphRegion(curve).integrate(abs_div, order) if len(curve.points) >= 2 else 0.0

    def defect(X, Y, d):
        g_x, g_y, _, _ = field_arrays(cone, X, Y)
        length = np.hypot(d[:, 0], d[:, 1])[:, None]
        # Outward normal of F is the clockwise rotation of the tangent.
        return 1.0 - (g_x * d[:, 1:2] - g_y * d[:, 0:1]) / length

    boundary_term = 0.0
    if len(curve.points) >= 2:
        P0, P1 = curve.segments
        moving = np.hypot(*(P1 - P0).T) > 0
        boundary_term = float(np.sum(_segment_integrals(P0[moving], P1[moving], cone, R, order, defect)))
    return Lemma1Report(lhs=lhs, region_term=region_term, boundary_term=boundary_term,
                        segments=len(curve.points) - 1)


def theorem1_check(curve: ProfileCurve, cone: Optional[ConeParams] = None, R: float = 1.0,
                   epsilons: Sequence[float] = DEFAULT_EPSILONS,
                   order: int = DEFAULT_ORDER) -> VariationReport:
    """α, δ and the inequality α² ≤ C δ, plus the dist-weighted and slab chains."""
    from lawson.certification import claimed_constant
    from lawson.constants_chain import GATE, alpha_intermediate_bound, slab_volume, theorem1_constant

    if len(epsilons) == 0:
        raise ConfigError("At least one slab width is required")
    cone = cone or curve.cone
    lemma = lemma1_identity_check(curve, cone, R, order)
    region = GraphRegion(curve)
    delta_p = lemma.lhs
    vol = region.volume(order=order)
    dist_vol = dist_weighted_volume(curve, order)
    alpha = vol / R ** cone.m
    delta = delta_p / R ** (cone.m - 1)
    C = float(theorem1_constant().value)
    c = float(claimed_constant(cone))
    slab_chain = {
        float(eps): vol <= cone.l * R ** 2 / (c * eps) * delta_p + slab_volume(cone, R, eps)
        for eps in epsilons
    }
    alpha_bounds = {float(eps): alpha_intermediate_bound(R, delta, float(eps)) for eps in epsilons}
    alpha_chain = {eps: eps >= GATE * R or alpha <= bound for eps, bound in alpha_bounds.items()}
    return VariationReport(
        cone=cone,
        R=R,
        t=curve.t,
        kind=curve.kind,
        delta_p=delta_p,
        vol_delta=vol,
        dist_volume=dist_vol,
        lemma1_lhs=lemma.lhs,
        lemma1_rhs=lemma.rhs,
        lemma1_gap=lemma.gap if delta_p > 0 else abs(lemma.rhs),
        alpha=alpha,
        delta=delta,
        ratio=alpha ** 2 / delta if delta > 0 else 0.0,
        C=C,
        theorem1_holds=alpha ** 2 <= C * delta,
        dist_chain_holds=delta_p >= c / R ** 2 * dist_vol,
        slab_chain=slab_chain,
        alpha_chain_bound=alpha_bounds,
        alpha_chain=alpha_chain,
    )


def variation_sweep(cone: ConeParams, kinds: Sequence[str] = PROFILE_KINDS,
                    amplitudes: Sequence[float] = DEFAULT_AMPLITUDES, R: float = 1.0,
                    n: int = DEFAULT_MESH, epsilons: Sequence[float] = DEFAULT_EPSILONS,
                    callback: Optional[Callable[[str, Any], None]] = None) -> pd.DataFrame:
    """Rows (R, ε, t, ΔP, volΔ, α, δ, ratio, ...) per competitor and slab width.

    The unperturbed cone (t = 0) always leads each profile's rows.
    """
    amplitudes = (0.0,) + tuple(float(t) for t in amplitudes if t != 0)
    rows = []
    for kind in kinds:
        for curve in competitor_family(cone, kind, amplitudes=amplitudes, R=R, n=n):
            report = theorem1_check(curve, cone, R, epsilons)
            rows.extend(report.to_rows())
            if callback:
                callback("status", f"{cone} {kind} t={curve.t}: ratio={report.ratio:.3e}")
    return pd.DataFrame(rows)
