"""
Spectrum
========

The stability quadratic form of a Lawson cone restricted to radial profiles,
and the first Dirichlet eigenvalue of the radial Jacobi operator

    L φ = -r^{2-m} (r^{m-2} φ')' - (m-2) φ / r^2     on (r_min, R).

With s = ln r and φ = r^{-(m-3)/2} w the operator becomes

    -w_ss + ν^2 w = λ e^{2s} w,     ν^2 = (m-3)^2/4 - (m-2),

which is discretised on a uniform s-grid and solved as a generalized sparse
eigenproblem in shift-invert mode. The continuum answer is j_{ν,1}^2 / R^2.

Usage:
    from lawson.spectrum import lambda_estimate
    report = lambda_estimate(ConeParams(k=5, h=3), R=1.0, n=4096)
    report.lambda_estimate, report.lambda_R2
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
import scipy.sparse as sparse
from scipy.integrate import simpson, trapezoid
from scipy.optimize import brentq
from scipy.sparse.linalg import ArpackNoConvergence, eigsh
from scipy.special import jv

from lawson.cone_geometry import ConeParams, link_area
from lawson.errors import ConfigError, EigensolverError, ProfileSupportError


# =============================================================================
# CONFIGURATION
# =============================================================================

MIN_GRID = 64
DEFAULT_RMIN_RATIO = 1e-6
DEFAULT_T_VALUES = (0.0005, 0.001, 0.002, 0.004)
PROFILE_KINDS = ("sin2", "sine", "wave")


# =============================================================================
# DATA STRUCTURES
# =============================================================================

@dataclass
class RadialProfile:
    """A radial function φ sampled on a grid, vanishing at both ends."""
    grid: np.ndarray
    values: np.ndarray
    derivative: Optional[np.ndarray] = None
    kind: str = "custom"

    def __post_init__(self):
        self.grid = np.asarray(self.grid, dtype=float)
        self.values = np.asarray(self.values, dtype=float)
        if self.derivative is not None:
            self.derivative = np.asarray(self.derivative, dtype=float)
        if self.grid.ndim != 1 or self.grid.shape != self.values.shape or len(self.grid) < 3:
            raise ProfileSupportError("Profile grid and values must be matching 1-D arrays")
        if self.grid[0] <= 0:
            raise ProfileSupportError(f"Profile support touches the apex (r0 = {self.grid[0]})")
        if np.any(np.diff(self.grid) <= 0):
            raise ProfileSupportError("Profile grid must be strictly increasing")
        scale = max(1.0, float(np.max(np.abs(self.values))))
        if abs(self.values[0]) > 1e-12 * scale or abs(self.values[-1]) > 1e-12 * scale:
            raise ProfileSupportError("Profile must vanish at both ends of its support")

    @property
    def support(self) -> Tuple[float, float]:
        return float(self.grid[0]), float(self.grid[-1])

    def slope(self) -> np.ndarray:
        if self.derivative is not None:
            return self.derivative
        return np.gradient(self.values, self.grid, edge_order=2)

    def dilate(self, lam: float) -> "RadialProfile":
        """φ_λ(r) = φ(r/λ)."""
        derivative = None if self.derivative is None else self.derivative / lam
        return RadialProfile(self.grid * lam, self.values.copy(), derivative, self.kind)

    def scaled(self, amplitude: float) -> "RadialProfile":
        derivative = None if self.derivative is None else self.derivative * amplitude
        return RadialProfile(self.grid.copy(), self.values * amplitude, derivative, self.kind)

    @classmethod
    def bump(cls, r0: float, r1: float, n: int = 4097, kind: str = "sin2") -> "RadialProfile":
        """Built-in profiles on [r0, r1]: sin^2 bump, sine arch or two-sign wave."""
        if not 0 < r0 < r1:
            raise ProfileSupportError(f"Support [{r0}, {r1}] must lie in (0, inf)")
        grid = np.linspace(r0, r1, n)
        length = r1 - r0
        x = np.pi * (grid - r0) / length
        if kind == "sin2":
            values = np.sin(x) ** 2
            derivative = np.pi / length * np.sin(2 * x)
        elif kind == "sine":
            values = np.sin(x)
            derivative = np.pi / length * np.cos(x)
        elif kind == "wave":
            values = np.sin(x) * np.sin(2 * x)
            derivative = np.pi / length * (np.cos(x) * np.sin(2 * x) + 2 * np.sin(x) * np.cos(2 * x))
        else:
            raise ConfigError(f"Unknown profile kind {kind!r}; choose from {PROFILE_KINDS}")
        values[0] = values[-1] = 0.0
        return cls(grid, values, derivative, kind)


@dataclass
class SpectrumReport:
    cone: ConeParams
    R: float
    lambda_estimate: float
    lambda_raw: float
    lambda_fine: Optional[float]
    grid_size: int
    extrapolation_order: int
    hardy_floor: float
    r_min_ratio: float
    mode: int = 0

    @property
    def lambda_R2(self) -> float:
        return self.lambda_estimate * self.R ** 2

    def to_mapping(self) -> Dict[str, Any]:
        return {
            "cone": {"k": self.cone.k, "h": self.cone.h, "m": self.cone.m},
            "R": self.R,
            "lambda_estimate": self.lambda_estimate,
            "lambda_raw": self.lambda_raw,
            "lambda_fine": self.lambda_fine if self.lambda_fine is not None else "none",
            "lambda_R2": self.lambda_R2,
            "grid_size": self.grid_size,
            "extrapolation_order": self.extrapolation_order,
            "hardy_floor": self.hardy_floor,
            "r_min_ratio": self.r_min_ratio,
            "mode": self.mode,
        }


@dataclass
class TaylorReport:
    cone: ConeParams
    t_values: List[float]
    delta_p: List[float]
    quotients: List[float]
    Q: float
    limit: float
    limit_rel_error: float
    remainder_slope: float
    dist_volume: List[float]
    N: float
    volume_limit: float
    volume_rel_error: float
    volume_slope: float

    @property
    def passed(self) -> bool:
        return (self.limit_rel_error <= 1e-3 and 2.7 <= self.remainder_slope <= 3.3
                and self.volume_rel_error <= 1e-3 and self.volume_slope >= 2.7)


# =============================================================================
# QUADRATIC FORM
# =============================================================================

def quadratic_form(phi: RadialProfile, cone: ConeParams, order: str = "simpson",
                   include_link_area: bool = True) -> Tuple[float, float]:
    """(Q, N): stability form and L^2 norm of a radial profile on the cone."""
    if phi.grid[0] <= 0:
        raise ProfileSupportError("Profile support touches the apex")
    integrate = {"simpson": simpson, "trapezoid": trapezoid}.get(order)
    if integrate is None:
        raise ConfigError(f"Unknown quadrature order {order!r}")
    r = phi.grid
    m = cone.m
    weight = r ** (m - 2)
    slope = phi.slope()
    Q = integrate((slope ** 2 - (m - 2) * phi.values ** 2 / r ** 2) * weight, x=r)
    N = integrate(phi.values ** 2 * weight, x=r)
    area = link_area(cone) if include_link_area else 1.0
    return float(area * Q), float(area * N)


# =============================================================================
# EIGENVALUES
# =============================================================================

def hardy_floor(cone: ConeParams) -> float:
    m = cone.m
    return (m - 3) ** 2 / 4 - (m - 2)


def link_eigenvalues(cone: ConeParams, count: int = 4) -> List[float]:
    """Lowest distinct Laplace eigenvalues of the link S^{k-1}(cos θ*) x S^{h-1}(sin θ*)."""
    m, k, h = cone.m, cone.k, cone.h
    r1_sq = (k - 1) / (m - 2)
    r2_sq = (h - 1) / (m - 2)
    values = set()
    for l1 in range(count + 1):
        for l2 in range(count + 1):
            values.add(round(l1 * (l1 + k - 2) / r1_sq + l2 * (l2 + h - 2) / r2_sq, 12))
    return sorted(values)[:count]


def richardson(lambda_n: float, lambda_2n: float, order: int = 2) -> float:
    factor = 2 ** order
    return (factor * lambda_2n - lambda_n) / (factor - 1)


def _smallest_eigenvalue(nu_sq: float, R: float, n: int, r_min_ratio: float) -> float:
    # s = ln(r/R) on [ln r_min_ratio, 0]; Dirichlet at both ends.
    ds = -math.log(r_min_ratio) / n
    s = math.log(r_min_ratio) + np.arange(n + 1) * ds
    r = R * np.exp(s[1:-1])
    size = n - 1
    main = np.full(size, 2.0 / ds ** 2 + nu_sq)
    off = np.full(size - 1, -1.0 / ds ** 2)
    A = sparse.diags([off, main, off], [-1, 0, 1], format="csc")
    B = sparse.diags(r ** 2, 0, format="csc")
    try:
        values = eigsh(A, k=1, M=B, sigma=0.0, which="LM", return_eigenvectors=False)
    except ArpackNoConvergence as exc:
        raise EigensolverError(f"Eigensolver did not converge on n={n}: {exc}") from exc
    return float(values[0])


def lambda_estimate(cone: ConeParams, R: float = 1.0, n: int = 4096,
                    r_min_ratio: float = DEFAULT_RMIN_RATIO, extrapolate: bool = True,
                    mode: int = 0) -> SpectrumReport:
    """First Dirichlet eigenvalue of the radial Jacobi operator on (R·r_min_ratio, R)."""
    if n < MIN_GRID:
        raise ConfigError(f"Spectrum grid must be >= {MIN_GRID}, got {n}")
    if R <= 0:
        raise ConfigError(f"R must be positive, got {R}")
    floor = hardy_floor(cone)
    nu_sq = floor + (link_eigenvalues(cone, mode + 1)[mode] if mode else 0.0)
    coarse = _smallest_eigenvalue(nu_sq, R, n, r_min_ratio)
    fine = _smallest_eigenvalue(nu_sq, R, 2 * n, r_min_ratio) if extrapolate else None
    return SpectrumReport(
        cone=cone,
        R=R,
        lambda_estimate=richardson(coarse, fine) if extrapolate else coarse,
        lambda_raw=coarse,
        lambda_fine=fine,
        grid_size=n,
        extrapolation_order=2 if extrapolate else 0,
        hardy_floor=floor,
        r_min_ratio=r_min_ratio,
        mode=mode,
    )


def angular_mode_lambda(cone: ConeParams, R: float = 1.0, n: int = 1024, mode: int = 1) -> SpectrumReport:
    """Eigenvalue of the radial problem for the link eigenmode `mode`."""
    return lambda_estimate(cone, R, n, mode=mode)


def bessel_reference(cone: ConeParams, R: float = 1.0) -> float:
    """Continuum eigenvalue j_{ν,1}^2 / R^2 with ν^2 the Hardy floor."""
    floor = hardy_floor(cone)
    if floor < 0:
        raise ConfigError(f"Cone {cone} has a negative Hardy floor {floor}; no Bessel reference")
    nu = math.sqrt(floor)
    x = nu + 0.05
    while jv(nu, x) > 0:
        x += 0.05
    root = brentq(lambda z: jv(nu, z), x - 0.05, x, xtol=1e-15)
    return root ** 2 / R ** 2


def rmin_sensitivity(cone: ConeParams, n: int = 1024,
                     ratios: Sequence[float] = (1e-5, 1e-6, 1e-7)) -> Dict[float, float]:
    return {ratio: lambda_estimate(cone, 1.0, n, r_min_ratio=ratio).lambda_estimate for ratio in ratios}


# =============================================================================
# SECOND VARIATION
# =============================================================================

def taylor_second_variation_check(cone: ConeParams, phi: RadialProfile,
                                  t_values: Sequence[float] = DEFAULT_T_VALUES,
                                  order: int = 8) -> TaylorReport:
    """Compare ΔP(t) of normal graphs with t^2 Q/2 and fit the remainder order."""
    from lawson.variation_lab import dist_weighted_volume, normal_graph, perimeter_delta, profile_moment

    t = np.asarray(sorted(t_values), dtype=float)
    Q, _ = quadratic_form(phi, cone)
    N = profile_moment(phi, cone, power=2, order=order)
    delta_p, volumes = [], []
    for value in t:
        curve = normal_graph(phi, float(value), cone)
        delta_p.append(perimeter_delta(curve, order=order))
        volumes.append(dist_weighted_volume(curve, order=order))
    delta_p = np.asarray(delta_p)
    volumes = np.asarray(volumes)

    quotients = 2 * delta_p / t ** 2
    limit = float(np.polyfit(t, quotients, 1)[1])
    remainder = np.abs(delta_p - t ** 2 * Q / 2)
    slope = float(np.polyfit(np.log(t), np.log(remainder), 1)[0])

    vol_quotients = 2 * volumes / t ** 2
    vol_limit = float(np.polyfit(t, vol_quotients, 1)[1])
    vol_remainder = np.abs(volumes - t ** 2 * N / 2)
    vol_slope = float(np.polyfit(np.log(t), np.log(vol_remainder), 1)[0])

    return TaylorReport(
        cone=cone,
        t_values=t.tolist(),
        delta_p=delta_p.tolist(),
        quotients=quotients.tolist(),
        Q=Q,
        limit=limit,
        limit_rel_error=abs(limit - Q) / abs(Q),
        remainder_slope=slope,
        dist_volume=volumes.tolist(),
        N=N,
        volume_limit=vol_limit,
        volume_rel_error=abs(vol_limit - N) / abs(N),
        volume_slope=vol_slope,
    )
