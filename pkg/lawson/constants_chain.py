"""
Constants Chain
===============

The slab-volume estimate for {p < ε} ∩ H_R, its two-part bound, the α-δ-ε
inequality chain and the optimisation that produces the stability constant
C = 7² · 12² · 10²⁰ of the quantitative isoperimetric inequality

    (|K Δ F| / R^m)² ≤ C · (P(F; H_R) - P(K; H_R)) / R^{m-1}.

Usage:
    from lawson.constants_chain import slab_volume, slab_bound_paper
    slab_volume(cone, 1.0, 0.1) <= slab_bound_paper(cone, 1.0, 0.1)
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
import sympy as sp
from numpy.polynomial.legendre import leggauss

from lawson.certification import claimed_constant
from lawson.cone_geometry import ConeParams, is_area_minimizing, p_array, unit_ball_volume
from lawson.errors import ConfigError
from lawson.variation_lab import SlabRegion


# =============================================================================
# CONFIGURATION
# =============================================================================

LARGE_DELTA = 36
PRE_CONSTANT = 7 * 10 ** 10
AM_GM_FACTOR = 12
GATE = 35.0 ** (1.0 / 13.0)
DISPLAY_L_OVER_C = 2 * sp.Integer(11) ** 5 * sp.sqrt(11)
DISPLAY_SLAB_PREFACTOR = sp.Integer(2) ** 11 * 6 ** 2 * sp.Integer(10) ** sp.Rational(11, 2) * sp.Integer(2) ** sp.Rational(3, 2)
DEFAULT_EPSILON_GRID = tuple(10.0 ** e for e in (-3.0, -2.5, -2.0, -1.5, -1.0, -0.5))


# =============================================================================
# DATA STRUCTURES
# =============================================================================

@dataclass
class SlabBound:
    cone: ConeParams
    R: float
    eps: float
    exact_volume: float
    paper_bound: float
    inner_part: float
    outer_part: float

    @property
    def holds(self) -> bool:
        return self.exact_volume <= self.paper_bound

    def to_row(self) -> Dict[str, Any]:
        return {
            "cone": self.cone.label,
            "R": self.R,
            "eps": self.eps,
            "exact_volume": self.exact_volume,
            "paper_bound": self.paper_bound,
            "inner_part": self.inner_part,
            "outer_part": self.outer_part,
            "holds": self.holds,
        }


@dataclass
class AlphaChain:
    """Result of the α-δ-ε optimisation for one δ."""
    R: float
    delta: float
    regime: str
    eps_opt: Optional[float]
    alpha_bound: float
    optimized_bound: float
    gate_ok: bool
    am_gm_sum: Optional[float]
    am_gm_target: float
    omega_product_ok: bool

    @property
    def am_gm_error(self) -> float:
        if self.am_gm_sum is None:
            return 0.0
        return abs(self.am_gm_sum - self.am_gm_target) / max(self.am_gm_target, 1e-300)


@dataclass
class ConstantDerivation:
    value: int
    factors: Tuple[int, int, int]
    steps: List[str] = field(default_factory=list)

    def to_mapping(self) -> Dict[str, Any]:
        return {
            "C": self.value,
            "C_float": float(self.value),
            "factors": "7^2 * 12^2 * 10^20",
            "steps": {f"{i:02d}": step for i, step in enumerate(self.steps, start=1)},
        }


@dataclass
class Display5Check:
    cone: ConeParams
    l_over_c: sp.Expr
    slab_prefactor: float
    slab_coefficient: float
    l_over_c_within_display: bool
    prefactor_within_display: bool
    dominated: bool


@dataclass(frozen=True)
class EarlierConstants:
    """Constants of the older sub-calibration, kept for comparison only."""
    cone: ConeParams
    volume_constant: sp.Expr
    eigen_constant: sp.Expr


# =============================================================================
# SLAB VOLUME
# =============================================================================

def slab_volume(cone: ConeParams, R: float, eps: float, order: int = 8) -> float:
    """|H_R ∩ {p < ε}| by exact 2-D quadrature."""
    if eps <= 0:
        return 0.0
    return SlabRegion(cone, R, eps).volume(order=order)


def _slab_prefactor(cone: ConeParams) -> float:
    k, h = cone.k, cone.h
    return (2 ** k * unit_ball_volume(k) * unit_ball_volume(h)
            * (k - 1) ** (k / 2) * (h - 1) ** (h / 2))


def slab_bound_parts(cone: ConeParams, R: float, eps: float) -> Tuple[float, float]:
    """(inner, outer): the y-ball of radius ε√(h-1) and its complement in B_R^h."""
    k, h, m = cone.k, cone.h, cone.m
    inner = _slab_prefactor(cone) * eps ** m
    outer = _slab_prefactor(cone) * eps * h * R ** (m - 1) / ((h - 1) ** ((m - 1) / 2) * (m - 1))
    return inner, outer


def slab_bound_paper(cone: ConeParams, R: float, eps: float) -> float:
    inner, outer = slab_bound_parts(cone, R, eps)
    return inner + outer


def inner_exact(cone: ConeParams, eps: float, order: int = 8) -> float:
    """Exact slab volume over the y-ball of radius ε√(h-1), x unclipped."""
    k, h = cone.k, cone.h
    top = eps * math.sqrt(h - 1)
    nodes, weights = leggauss(order)
    r = top * (nodes + 1) / 2
    integrand = h * unit_ball_volume(h) * r ** (h - 1) * (r / math.sqrt(h - 1) + eps) ** k
    return float(unit_ball_volume(k) * (k - 1) ** (k / 2) * top / 2 * (integrand @ weights))


def slab_check(cone: ConeParams, R: float, eps: float) -> SlabBound:
    inner, outer = slab_bound_parts(cone, R, eps)
    return SlabBound(cone, R, eps, slab_volume(cone, R, eps), inner + outer, inner, outer)


def slab_table(cones: Sequence[ConeParams], R: float = 1.0,
               epsilons: Sequence[float] = DEFAULT_EPSILON_GRID) -> pd.DataFrame:
    return pd.DataFrame([slab_check(cone, R, eps).to_row() for cone in cones for eps in epsilons])


def elementary_inequality_check(ks: Sequence[int] = range(2, 12), n_t: int = 1000) -> Dict[int, bool]:
    """(1+t)^k - (1-t)^k <= 2^k t on t = j/n_t, in exact arithmetic."""
    result = {}
    for k in ks:
        ok = True
        for j in range(1, n_t):
            t = Fraction(j, n_t)
            if (1 + t) ** k - (1 - t) ** k > 2 ** k * t:
                ok = False
                break
        result[k] = ok
    return result


# =============================================================================
# MONTE CARLO ORACLE
# =============================================================================

def window_monte_carlo(cone: ConeParams, R: float, predicate: Callable[[np.ndarray, np.ndarray], np.ndarray],
                       samples: int = 10 ** 6, seed: int = 0) -> Tuple[float, float]:
    """Estimate |H_R ∩ A| and its standard error by uniform sampling of H_R.

    Only the radii are drawn: |x| = R U^{1/k} and |y| = R U^{1/h} are the radial
    laws of uniform points in B_R^k and B_R^h.
    """
    rng = np.random.default_rng(seed)
    r_x = R * rng.random(samples) ** (1.0 / cone.k)
    r_y = R * rng.random(samples) ** (1.0 / cone.h)
    hits = predicate(r_x, r_y)
    total = unit_ball_volume(cone.k) * unit_ball_volume(cone.h) * R ** cone.m
    fraction = float(np.mean(hits))
    return total * fraction, total * math.sqrt(fraction * (1 - fraction) / samples)


def slab_volume_monte_carlo(cone: ConeParams, R: float, eps: float,
                            samples: int = 10 ** 6, seed: int = 0) -> Tuple[float, float]:
    return window_monte_carlo(cone, R, lambda X, Y: p_array(cone, X, Y) < eps, samples, seed)


# =============================================================================
# α-δ-ε CHAIN
# =============================================================================

def alpha_intermediate_bound(R: float, delta: float, eps: float) -> float:
    """7·10¹⁰ (Rδ/ε + 36ε/R), valid for ε < 35^{1/13} R."""
    if eps <= 0:
        raise ValueError(f"eps must be positive, got {eps}")
    return PRE_CONSTANT * (R * delta / eps + LARGE_DELTA * eps / R)


def alpha_bound_chain(cone: ConeParams, R: float, delta: float) -> AlphaChain:
    """Bound α in terms of δ: 6√δ when δ >= 36, otherwise 7·12·10¹⁰ √δ at ε = R√(δ/36)."""
    if delta < 0:
        raise ValueError(f"delta must be nonnegative, got {delta}")
    omega_ok = unit_ball_volume(cone.k) * unit_ball_volume(cone.h) <= LARGE_DELTA
    optimized = PRE_CONSTANT * AM_GM_FACTOR * math.sqrt(delta)
    if delta == 0:
        return AlphaChain(R, 0.0, "zero", None, 0.0, 0.0, True, None, 0.0, omega_ok)

    eps_opt = R * math.sqrt(delta / LARGE_DELTA)
    am_gm_sum = R * delta / eps_opt + LARGE_DELTA * eps_opt / R
    target = AM_GM_FACTOR * math.sqrt(delta)
    if delta >= LARGE_DELTA:
        # α <= ω_k ω_h <= 6√δ
        return AlphaChain(R, delta, "large", eps_opt, 6 * math.sqrt(delta), optimized,
                          eps_opt < GATE * R, am_gm_sum, target, omega_ok)
    return AlphaChain(R, delta, "optimized", eps_opt, optimized, optimized,
                      eps_opt < GATE * R, am_gm_sum, target, omega_ok)


def theorem1_constant() -> ConstantDerivation:
    steps = [
        "alpha <= (l/c) (R/eps) delta + |H_R cap {p < eps}| / R^m",
        "alpha <= 7*10^10 (R delta/eps + 36 eps/R) for eps < 35^(1/13) R",
        "R delta/eps + 36 eps/R >= 12 sqrt(delta), equality at eps = R sqrt(delta/36)",
        "alpha <= 7*12*10^10 sqrt(delta) for delta < 36",
        "alpha <= omega_k omega_h <= 6 sqrt(delta) for delta >= 36",
        "alpha^2 <= 7^2*12^2*10^20 delta",
    ]
    return ConstantDerivation(value=7 ** 2 * 12 ** 2 * 10 ** 20, factors=(7, 12, 10), steps=steps)


def display5_domination(cone: ConeParams) -> Display5Check:
    """Per-cone l/c and slab coefficient against the uniform constant 7·10¹⁰."""
    k, h, m = cone.k, cone.h, cone.m
    l_exact = sp.sqrt(sp.Rational(1, h - 1) + sp.Rational(1, k - 1))
    l_over_c = sp.simplify(l_exact / claimed_constant(cone))
    prefactor = _slab_prefactor(cone)
    # ε^{m-1} <= 35 R^{m-1} below the gate, since m - 1 <= 13.
    bracket = 35 + h / ((h - 1) ** ((m - 1) / 2) * (m - 1))
    coefficient = prefactor * bracket
    return Display5Check(
        cone=cone,
        l_over_c=l_over_c,
        slab_prefactor=prefactor,
        slab_coefficient=coefficient,
        l_over_c_within_display=bool(sp.N(DISPLAY_L_OVER_C - l_over_c, 50) >= 0),
        prefactor_within_display=prefactor <= float(DISPLAY_SLAB_PREFACTOR),
        dominated=bool(sp.N(PRE_CONSTANT - l_over_c, 50) >= 0) and coefficient / LARGE_DELTA <= PRE_CONSTANT,
    )


def unit_ball_table(dims: Sequence[int] = range(2, 14)) -> pd.DataFrame:
    rows = [{"dim": j, "omega": unit_ball_volume(j), "below_6": unit_ball_volume(j) < 6} for j in dims]
    return pd.DataFrame(rows)


# =============================================================================
# COMPARISON
# =============================================================================

def _omega_exact(n: int) -> sp.Expr:
    return sp.pi ** sp.Rational(n, 2) / sp.gamma(sp.Rational(n, 2) + 1)


def result1_constants(cone: ConeParams) -> EarlierConstants:
    """Volume and eigenvalue constants for area-minimizing cones outside the family.

    Nothing here is certified; the values are the published ones, used only to
    compare against the constants of the exceptional cones.
    """
    if cone.certified:
        raise ConfigError(f"{cone} belongs to the exceptional family; the older constants do not apply")
    if not is_area_minimizing(cone.k, cone.h):
        raise ConfigError(f"{cone} is not area-minimizing")
    if (cone.k, cone.h) == (4, 4):
        return EarlierConstants(cone, 128 * _omega_exact(4), sp.sqrt(2) / 16)
    k, h = sorted((cone.k, cone.h))
    m = k + h
    volume = (2 ** 12 * sp.sqrt(_omega_exact(k) * _omega_exact(h)) / sp.Integer(k - 1) ** sp.Rational(1, 8)
              * sp.sqrt(sp.Rational(h * k, m - 1)) * sp.Rational(h - 1, k - 1) ** sp.Rational(3, 2))
    eigen = (sp.Rational(1, 2 ** 9) * sp.Rational(k - 1, h - 1) ** sp.Rational(9, 4)
             * sp.sqrt(m - 2) / sp.Integer(h - 1) ** sp.Rational(1, 4))
    return EarlierConstants(cone, volume, eigen)
