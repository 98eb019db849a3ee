"""
Cone Geometry
=============

Reduced coordinates and elementary geometry of the Lawson cones

    M_kh = {(x, y) in R^k x R^h : |x|/sqrt(k-1) = |y|/sqrt(h-1)}

Every quantity used by the calibration and variation code depends only on the
two radii r_x = |x| and r_y = |y|, so ambient points are reduced at the API
boundary and everything downstream works in the quarter plane.

Usage:
    from lawson.cone_geometry import ConeParams, reduce, dist_to_cone
    cone = ConeParams(k=5, h=3)
    p = reduce(AmbientPoint(x=[1, 0, 0, 0, 0], y=[2, 0, 0]), cone)
    p.region          # Region.IN_K
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from numbers import Rational
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from lawson.errors import ConfigError, OffConeError, SingularApexError


# =============================================================================
# CONFIGURATION
# =============================================================================

# Relative tolerance for labelling floating points as OnCone.
REGION_TOLERANCE = 1e-14
_PAIR_PATTERN = re.compile(r"\s*(\d+)\s*[,x]\s*(\d+)\s*")

MIN_AMBIENT_DIM = 4
MAX_AMBIENT_DIM = 16

Real = Union[float, int, Fraction]


@dataclass(frozen=True)
class BranchExponents:
    """Calibration exponents d for one oriented pair (h, k)."""
    u_power: Fraction
    v_power: Fraction
    description: str = ""


# Oriented pairs (h, k) for which the sub-calibration is certified.
CERTIFIED_PAIRS: Dict[Tuple[int, int], BranchExponents] = {
    (3, 5): BranchExponents(Fraction(3, 4), Fraction(3, 4), "d = 3/4 on both sides"),
    (2, 7): BranchExponents(Fraction(3, 2), Fraction(1), "d = 3/2 outside K, d = 1 inside"),
    (2, 8): BranchExponents(Fraction(3, 2), Fraction(1), "d = 3/2 outside K, d = 1 inside"),
    (2, 9): BranchExponents(Fraction(3, 2), Fraction(1), "d = 3/2 outside K, d = 1 inside"),
    (2, 10): BranchExponents(Fraction(3, 2), Fraction(1), "d = 3/2 outside K, d = 1 inside"),
    (2, 11): BranchExponents(Fraction(3, 2), Fraction(1), "d = 3/2 outside K, d = 1 inside"),
}


# =============================================================================
# DATA STRUCTURES
# =============================================================================

class Region(Enum):
    IN_K = "InK"
    ON_CONE = "OnCone"
    IN_K_COMPLEMENT = "InKComplement"


@dataclass(frozen=True)
class ConeParams:
    """The pair of sphere dimensions defining a Lawson cone."""
    k: int
    h: int

    def __post_init__(self):
        if not isinstance(self.k, (int, np.integer)) or not isinstance(self.h, (int, np.integer)):
            raise ConfigError(f"Cone dimensions must be integers, got k={self.k!r}, h={self.h!r}")
        if self.k < 2 or self.h < 2:
            raise ConfigError(f"Cone dimensions must be >= 2, got k={self.k}, h={self.h}")
        if not MIN_AMBIENT_DIM <= self.k + self.h <= MAX_AMBIENT_DIM:
            raise ConfigError(
                f"Ambient dimension m={self.k + self.h} outside "
                f"[{MIN_AMBIENT_DIM}, {MAX_AMBIENT_DIM}]"
            )

    @property
    def m(self) -> int:
        return self.k + self.h

    @property
    def u_scale(self) -> int:
        """h - 1, the factor in u = (h-1)|x|^2."""
        return self.h - 1

    @property
    def v_scale(self) -> int:
        """k - 1, the factor in v = (k-1)|y|^2."""
        return self.k - 1

    @property
    def label(self) -> str:
        return f"{self.k}-{self.h}"

    @property
    def certified(self) -> bool:
        return oriented_pair(self) is not None

    @property
    def l(self) -> float:
        return l_constant(self)

    def swapped(self) -> "ConeParams":
        return ConeParams(k=self.h, h=self.k)

    @classmethod
    def parse(cls, text: str) -> "ConeParams":
        """Parse "k,h" or "kxh" (e.g. "3,5") into a ConeParams."""
        match = _PAIR_PATTERN.fullmatch(text)
        if match is None:
            raise ConfigError(f"Malformed cone pair {text!r}; expected 'k,h'")
        return cls(k=int(match.group(1)), h=int(match.group(2)))

    def __str__(self) -> str:
        return f"C({self.k},{self.h})"


def all_certified_cones() -> List[ConeParams]:
    """Both orderings of every certified pair, in a fixed order."""
    cones = []
    for h, k in CERTIFIED_PAIRS:
        cones.append(ConeParams(k=k, h=h))
        cones.append(ConeParams(k=h, h=k))
    return cones


@dataclass(frozen=True)
class AmbientPoint:
    """A point z = (x, y) in R^k x R^h."""
    x: Tuple[Real, ...]
    y: Tuple[Real, ...]

    def __init__(self, x: Sequence[Real], y: Sequence[Real]):
        object.__setattr__(self, "x", tuple(x))
        object.__setattr__(self, "y", tuple(y))

    def as_arrays(self) -> Tuple[np.ndarray, np.ndarray]:
        return np.asarray(self.x, dtype=float), np.asarray(self.y, dtype=float)


@dataclass(frozen=True)
class ReducedPoint:
    """Radii (r_x, r_y) of a point together with the cone it is read against."""
    r_x: float
    r_y: float
    cone: ConeParams
    region: Optional[Region] = None
    # Exact squared radii when the point came from rational input.
    exact_sq: Optional[Tuple[Fraction, Fraction]] = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if self.r_x < 0 or self.r_y < 0:
            raise ValueError(f"Radii must be nonnegative, got ({self.r_x}, {self.r_y})")
        if self.region is None:
            if self.exact_sq is not None:
                region = _label_exact(self.cone.u_scale * self.exact_sq[0],
                                      self.cone.v_scale * self.exact_sq[1])
            else:
                region = _label_float(self.u, self.v, REGION_TOLERANCE)
            object.__setattr__(self, "region", region)

    @property
    def u(self) -> float:
        if self.exact_sq is not None:
            return float(self.cone.u_scale * self.exact_sq[0])
        return self.cone.u_scale * self.r_x ** 2

    @property
    def v(self) -> float:
        if self.exact_sq is not None:
            return float(self.cone.v_scale * self.exact_sq[1])
        return self.cone.v_scale * self.r_y ** 2

    @property
    def z_norm_sq(self) -> float:
        return self.r_x ** 2 + self.r_y ** 2

    @property
    def z_norm(self) -> float:
        return math.hypot(self.r_x, self.r_y)

    @property
    def is_apex(self) -> bool:
        return self.r_x == 0 and self.r_y == 0

    def scaled(self, lam: float) -> "ReducedPoint":
        return ReducedPoint.from_radii(self.cone, lam * self.r_x, lam * self.r_y)

    def relabel(self, cone: ConeParams) -> "ReducedPoint":
        """The same radii read against another cone."""
        if cone == self.cone:
            return self
        if self.exact_sq is not None:
            return _from_squares(cone, *self.exact_sq)
        return ReducedPoint.from_radii(cone, self.r_x, self.r_y)

    # --------------------------------------------------------------------------
    # Constructors
    # --------------------------------------------------------------------------

    @classmethod
    def from_radii(cls, cone: ConeParams, r_x: Real, r_y: Real,
                   rel_tol: float = REGION_TOLERANCE) -> "ReducedPoint":
        if r_x < 0 or r_y < 0:
            raise ValueError(f"Radii must be nonnegative, got ({r_x}, {r_y})")
        if isinstance(r_x, Rational) and isinstance(r_y, Rational):
            return _from_squares(cone, Fraction(r_x) ** 2, Fraction(r_y) ** 2)
        r_x, r_y = float(r_x), float(r_y)
        u = cone.u_scale * r_x ** 2
        v = cone.v_scale * r_y ** 2
        return cls(r_x, r_y, cone, _label_float(u, v, rel_tol))

    @classmethod
    def from_uv(cls, cone: ConeParams, u: Real, v: Real,
                rel_tol: float = REGION_TOLERANCE) -> "ReducedPoint":
        if u < 0 or v < 0:
            raise ValueError(f"u and v must be nonnegative, got ({u}, {v})")
        if isinstance(u, Rational) and isinstance(v, Rational):
            return _from_squares(cone, Fraction(u) / cone.u_scale, Fraction(v) / cone.v_scale)
        point = cls(math.sqrt(u / cone.u_scale), math.sqrt(v / cone.v_scale), cone,
                    _label_float(float(u), float(v), rel_tol))
        return point

    @classmethod
    def on_cone(cls, cone: ConeParams, radius: float = 1.0) -> "ReducedPoint":
        """The point of M at distance `radius` from the apex."""
        theta = cone_angle(cone)
        return cls(radius * math.cos(theta), radius * math.sin(theta), cone, Region.ON_CONE)


def _label_float(u: float, v: float, rel_tol: float) -> Region:
    if abs(u - v) <= rel_tol * max(u, v):
        return Region.ON_CONE
    return Region.IN_K if u < v else Region.IN_K_COMPLEMENT


def _label_exact(u: Fraction, v: Fraction) -> Region:
    if u == v:
        return Region.ON_CONE
    return Region.IN_K if u < v else Region.IN_K_COMPLEMENT


def _from_squares(cone: ConeParams, rx_sq: Fraction, ry_sq: Fraction) -> ReducedPoint:
    region = _label_exact(cone.u_scale * rx_sq, cone.v_scale * ry_sq)
    return ReducedPoint(math.sqrt(rx_sq), math.sqrt(ry_sq), cone, region, exact_sq=(rx_sq, ry_sq))


# =============================================================================
# OPERATIONS
# =============================================================================

def reduce(p: AmbientPoint, cone: ConeParams, rel_tol: float = REGION_TOLERANCE) -> ReducedPoint:
    """Reduce an ambient point to its radii and label its region."""
    if len(p.x) != cone.k or len(p.y) != cone.h:
        raise ValueError(
            f"Point has dimensions ({len(p.x)}, {len(p.y)}), cone needs ({cone.k}, {cone.h})"
        )
    if all(isinstance(c, Rational) for c in p.x + p.y):
        rx_sq = sum(Fraction(c) ** 2 for c in p.x)
        ry_sq = sum(Fraction(c) ** 2 for c in p.y)
        return _from_squares(cone, rx_sq, ry_sq)
    x, y = p.as_arrays()
    return ReducedPoint.from_radii(cone, float(np.linalg.norm(x)), float(np.linalg.norm(y)), rel_tol)


def dist_to_cone(p: ReducedPoint, cone: Optional[ConeParams] = None) -> float:
    p = p.relabel(cone) if cone is not None else p
    m = p.cone.m
    return abs(math.sqrt(p.u) - math.sqrt(p.v)) / math.sqrt(m - 2)


def p_function(p: ReducedPoint, cone: Optional[ConeParams] = None) -> float:
    cone = cone or p.cone
    return abs(p.r_x / math.sqrt(cone.k - 1) - p.r_y / math.sqrt(cone.h - 1))


def l_constant(cone: ConeParams) -> float:
    return math.sqrt(1.0 / (cone.h - 1) + 1.0 / (cone.k - 1))


def unit_ball_volume(n: int) -> float:
    """Volume of the unit ball in R^n."""
    if n < 1:
        raise ValueError(f"Dimension must be >= 1, got {n}")
    return math.pi ** (n / 2) / math.gamma(n / 2 + 1)


def second_fundamental_norm_sq(p: ReducedPoint, cone: Optional[ConeParams] = None) -> float:
    """|II|^2 = (m-2)/|z|^2 at a point of the cone."""
    p = p.relabel(cone) if cone is not None else p
    if p.is_apex:
        raise SingularApexError("|II|^2 is undefined at the apex")
    if p.region is not Region.ON_CONE:
        raise OffConeError(f"Point ({p.r_x}, {p.r_y}) is not on {p.cone}")
    return (p.cone.m - 2) / p.z_norm_sq


# -----------------------------------------------------------------------------
# Cone line in the quarter plane
# -----------------------------------------------------------------------------

def oriented_pair(cone: ConeParams) -> Optional[Tuple[int, int]]:
    """The ordering (h, k) of the cone's pair that appears in CERTIFIED_PAIRS."""
    if (cone.h, cone.k) in CERTIFIED_PAIRS:
        return (cone.h, cone.k)
    if (cone.k, cone.h) in CERTIFIED_PAIRS:
        return (cone.k, cone.h)
    return None


def is_area_minimizing(k: int, h: int) -> bool:
    """Classical minimizing range of the Lawson cones."""
    return k + h >= 9 or (k, h) in {(3, 5), (4, 4), (5, 3)}


def cone_angle(cone: ConeParams) -> float:
    """Angle theta* of the cone line, tan(theta*) = sqrt((h-1)/(k-1))."""
    return math.atan2(math.sqrt(cone.h - 1), math.sqrt(cone.k - 1))


def cone_frame(cone: ConeParams) -> Tuple[np.ndarray, np.ndarray]:
    """Unit tangent e of the cone line and the outward unit normal n of K."""
    theta = cone_angle(cone)
    c, s = math.cos(theta), math.sin(theta)
    return np.array([c, s]), np.array([s, -c])


def link_area(cone: ConeParams) -> float:
    """Area of the link M ∩ S^{m-1}: |S^{k-1}(cos θ*)| |S^{h-1}(sin θ*)|."""
    theta = cone_angle(cone)
    k, h = cone.k, cone.h
    return (k * unit_ball_volume(k) * math.cos(theta) ** (k - 1)
            * h * unit_ball_volume(h) * math.sin(theta) ** (h - 1))


def principal_curvatures(cone: ConeParams, z_norm: float) -> List[Tuple[float, int]]:
    """Principal curvatures of M at distance z_norm, with multiplicities.

    The radial direction has curvature 0 and is not listed.
    """
    if z_norm <= 0:
        raise SingularApexError("Curvatures are undefined at the apex")
    a, b = cone.u_scale, cone.v_scale
    return [
        (math.sqrt(a / b) / z_norm, cone.k - 1),
        (-math.sqrt(b / a) / z_norm, cone.h - 1),
    ]


# =============================================================================
# VECTORISED KERNELS
# =============================================================================

def uv_arrays(cone: ConeParams, r_x, r_y) -> Tuple[np.ndarray, np.ndarray]:
    r_x = np.asarray(r_x, dtype=float)
    r_y = np.asarray(r_y, dtype=float)
    return cone.u_scale * r_x ** 2, cone.v_scale * r_y ** 2


def dist_array(cone: ConeParams, r_x, r_y) -> np.ndarray:
    u, v = uv_arrays(cone, r_x, r_y)
    return np.abs(np.sqrt(u) - np.sqrt(v)) / math.sqrt(cone.m - 2)


def p_array(cone: ConeParams, r_x, r_y) -> np.ndarray:
    r_x = np.asarray(r_x, dtype=float)
    r_y = np.asarray(r_y, dtype=float)
    return np.abs(r_x / math.sqrt(cone.k - 1) - r_y / math.sqrt(cone.h - 1))


def region_array(cone: ConeParams, r_x, r_y, rel_tol: float = REGION_TOLERANCE) -> np.ndarray:
    """-1 in K, 0 on the cone, +1 in the complement of K."""
    u, v = uv_arrays(cone, r_x, r_y)
    labels = np.sign(u - v).astype(int)
    labels[np.abs(u - v) <= rel_tol * np.maximum(u, v)] = 0
    return labels


def weight_array(cone: ConeParams, r_x, r_y) -> np.ndarray:
    """Coarea weight k ω_k r_x^{k-1} · h ω_h r_y^{h-1} of the 2-D reduction."""
    k, h = cone.k, cone.h
    r_x = np.asarray(r_x, dtype=float)
    r_y = np.asarray(r_y, dtype=float)
    return (k * unit_ball_volume(k) * r_x ** (k - 1)) * (h * unit_ball_volume(h) * r_y ** (h - 1))
