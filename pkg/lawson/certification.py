"""
Certification
=============

Two independent verifications of the pointwise inequality

    |div g| >= c_{k,h} dist(z, M) / |z|^2

1. Exact inequality chains (sympy): each branch's chain of elementary bounds is
   replayed with exact constants, every scalar step checked, and the stage
   functions checked for descent on a dense arc grid.
2. An interval sweep (mpmath.iv): F = |div g| |z|^2 / dist is enclosed on
   subintervals of the unit arc with outward rounding and adaptive bisection.

Usage:
    from lawson.certification import certify_pointwise
    cert = certify_pointwise(ConeParams(k=5, h=3), subdivisions=2**14)
    cert.passed, cert.margin
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Dict, List, Optional, Tuple

import numpy as np
import sympy as sp
from mpmath import iv

from lawson import reporting
from lawson.cone_geometry import ConeParams, cone_angle, oriented_pair
from lawson.errors import ChainStepViolation, IntervalTooWideError, UncertifiedPairError
from lawson.subcalibration import (
    BranchKind,
    CalibrationBranch,
    branch_for,
    float_coefficients,
    gradient_coefficients,
    numerator_coefficients,
    reduced_quotient,
)


# =============================================================================
# CONFIGURATION
# =============================================================================

HALF_PI = math.pi / 2
# Last grid endpoint: the float just above pi/2, so the arc is fully covered.
THETA_END = math.nextafter(HALF_PI, math.inf)

MIN_SUBDIVISIONS = 16
DEFAULT_MAX_DEPTH = 24
DESCENT_GRID = 4097
DESCENT_SLACK = 1e-12


# =============================================================================
# EXACT POLYNOMIAL MINIMA
# =============================================================================

@dataclass(frozen=True)
class QuadraticOnInterval:
    """a t^2 + b t + c on [lo, hi], exact rationals."""
    a: Fraction
    b: Fraction
    c: Fraction
    lo: Fraction = Fraction(0)
    hi: Fraction = Fraction(1)

    def __post_init__(self):
        for name in ("a", "b", "c", "lo", "hi"):
            object.__setattr__(self, name, Fraction(getattr(self, name)))
        if self.lo > self.hi:
            raise ValueError(f"Empty interval [{self.lo}, {self.hi}]")

    def evaluate(self, t) -> Fraction:
        t = Fraction(t)
        return (self.a * t + self.b) * t + self.c

    def negated(self) -> "QuadraticOnInterval":
        return QuadraticOnInterval(-self.a, -self.b, -self.c, self.lo, self.hi)


def quad_min(q: QuadraticOnInterval) -> Tuple[Fraction, Fraction]:
    """Exact (argmin, min) over the closed interval; ties go to the lower endpoint."""
    candidates = [q.lo, q.hi]
    if q.a > 0:
        vertex = -q.b / (2 * q.a)
        if q.lo < vertex < q.hi:
            return vertex, q.evaluate(vertex)
    best = min(candidates, key=lambda t: (q.evaluate(t), t))
    return best, q.evaluate(best)


def quad_max(q: QuadraticOnInterval) -> Tuple[Fraction, Fraction]:
    arg, value = quad_min(q.negated())
    return arg, -value


def p2() -> QuadraticOnInterval:
    return QuadraticOnInterval(27, -48, 25)


def p3() -> QuadraticOnInterval:
    return QuadraticOnInterval(27, -72, 49)


def q2(k: int) -> QuadraticOnInterval:
    return QuadraticOnInterval(k - 1, 3 - 4 * k, 4 * (k - 2))


def q3() -> QuadraticOnInterval:
    return QuadraticOnInterval(27, -123, 98)


# =============================================================================
# INEQUALITY CHAINS
# =============================================================================

@dataclass(frozen=True)
class ChainStep:
    label: str
    lhs: sp.Expr
    relation: str
    rhs: sp.Expr
    holds: bool
    terminus: bool = False


@dataclass
class ChainTrace:
    """Replay of one branch chain for an oriented pair."""
    pair: Tuple[int, int]
    branch: BranchKind
    steps: List[ChainStep]
    sharpest: sp.Expr
    terminus: sp.Expr
    terminus_verified: bool
    descent_ok: bool
    max_descent_violation: float = 0.0

    @property
    def coefficient(self) -> sp.Expr:
        """The displayed terminus when it verifies, else the sharpest verified value."""
        return self.terminus if self.terminus_verified else self.sharpest

    @property
    def holds(self) -> bool:
        return self.descent_ok and all(s.holds for s in self.steps if not s.terminus)


def _rat(x) -> sp.Rational:
    x = Fraction(x)
    return sp.Rational(x.numerator, x.denominator)


def _sign(expr: sp.Expr) -> int:
    diff = sp.simplify(expr)
    if diff == 0:
        return 0
    value = sp.N(diff, 60)
    if value.is_zero:
        raise ChainStepViolation(f"Cannot decide the sign of {diff}")
    return 1 if value > 0 else -1


def _step(label: str, lhs, relation: str, rhs, terminus: bool = False) -> ChainStep:
    lhs, rhs = sp.sympify(lhs), sp.sympify(rhs)
    sign = _sign(lhs - rhs)
    holds = {
        ">=": sign >= 0,
        ">": sign > 0,
        "<=": sign <= 0,
        "<": sign < 0,
        "==": sign == 0,
    }[relation]
    return ChainStep(label, lhs, relation, rhs, holds, terminus)


def _arc_samples(pair: Tuple[int, int], kind: BranchKind):
    """Unit-arc samples (u, v, r_x^2, r_y^2) strictly inside the branch region."""
    h, k = pair
    cone = ConeParams(k=k, h=h)
    theta_star = cone_angle(cone)
    if kind is BranchKind.U_POWER:
        theta = np.linspace(0.0, theta_star, DESCENT_GRID)[:-1]
    else:
        theta = np.linspace(theta_star, HALF_PI, DESCENT_GRID)[1:]
    rx2, ry2 = np.cos(theta) ** 2, np.sin(theta) ** 2
    u, v = (h - 1) * rx2, (k - 1) * ry2
    keep = (u > v) if kind is BranchKind.U_POWER else (u < v)
    return u[keep], v[keep], rx2[keep], ry2[keep]


def _descent(pair: Tuple[int, int], kind: BranchKind,
             stages: List[Callable]) -> Tuple[bool, float]:
    """Check stage_0 = F/√(m-2) and stage_i >= stage_{i+1} on the arc grid."""
    h, k = pair
    u, v, rx2, ry2 = _arc_samples(pair, kind)
    s, t = np.sqrt(u), np.sqrt(v)
    branch = branch_for(ConeParams(k=k, h=h), kind)
    coeffs = float_coefficients(branch)
    actual = reduced_quotient(s, t, branch, coeffs, np.sqrt, np.abs) / coeffs["sqrt_m2"]
    values = [np.broadcast_to(stage(u, v, rx2, ry2, s, t), u.shape) for stage in stages]
    worst = float(np.max(np.abs(values[0] - actual) / actual))
    ok = worst < 1e-9
    for upper, lower in zip(values, values[1:]):
        gap = float(np.max((lower - upper) / np.abs(upper)))
        worst = max(worst, gap)
        ok = ok and gap <= DESCENT_SLACK
    return ok, worst


def _finish(pair, kind, steps, sharpest, terminus, stages) -> ChainTrace:
    failed = [s for s in steps if not s.holds and not s.terminus]
    if failed:
        raise ChainStepViolation(
            f"{pair} {kind.value}: step '{failed[0].label}' failed: "
            f"{failed[0].lhs} {failed[0].relation} {failed[0].rhs}"
        )
    descent_ok, worst = _descent(pair, kind, stages)
    if not descent_ok:
        raise ChainStepViolation(f"{pair} {kind.value}: stage functions do not descend ({worst:.3g})")
    terminus_steps = [s for s in steps if s.terminus]
    verified = all(s.holds for s in terminus_steps)
    return ChainTrace(pair, kind, steps, sp.simplify(sharpest), sp.simplify(terminus),
                      verified, descent_ok, worst)


def branch_chain_2k(k: int, branch: BranchKind) -> ChainTrace:
    """Chain for the oriented pair (h, k) = (2, k), k in 7..11."""
    if not 7 <= k <= 11:
        raise UncertifiedPairError(f"(2,{k}) is not a certified pair")
    K = sp.Integer(k)
    pair = (2, k)
    if branch is BranchKind.U_POWER:
        _, min_p2 = quad_min(p2())
        _, max_den = quad_max(QuadraticOnInterval(9, 10, 25))
        sharpest = (K - 1) * _rat(min_p2) / 4 / sp.Integer(44) ** sp.Rational(3, 2)
        steps = [
            _step("k >= 7 raises the uv coefficient of the numerator", 12 * (K - 11), ">=", -48),
            _step("k <= 11 bounds the uv coefficient of the denominator", 2 * (2 * K - 17), "<=", 10),
            _step("min p2 on [0,1] at t = 8/9", _rat(min_p2), "==", sp.Rational(11, 3)),
            _step("max of 25 + 10t + 9t^2 on [0,1]", _rat(max_den), "==", 44),
            _step("u > v forces |x|^2 >= |z|^2/2", K - 1, ">=", 1),
            _step("coefficient collapses", sharpest, "==", (K - 1) / (2 ** 5 * 3 * sp.sqrt(11))),
            _step("displayed terminus", sharpest, ">=", sp.sqrt(11) / (2 ** 5 * 3), terminus=True),
        ]
        stages = [
            lambda u, v, rx2, ry2, s, t: (k - 1) * (s + t) / s
            * (25 * u ** 2 + 12 * (k - 11) * u * v + 27 * v ** 2)
            / (25 * u ** 2 + 2 * (2 * k - 17) * u * v + 9 * v ** 2) ** 1.5,
            lambda u, v, rx2, ry2, s, t: (k - 1) * (s + t) / s
            * (25 * u ** 2 - 48 * u * v + 27 * v ** 2)
            / (25 * u ** 2 + 2 * (2 * k - 17) * u * v + 9 * v ** 2) ** 1.5,
            lambda u, v, rx2, ry2, s, t: (k - 1) * (25 * u ** 2 - 48 * u * v + 27 * v ** 2)
            / (25 * u ** 2 + 10 * u * v + 9 * v ** 2) ** 1.5,
            lambda u, v, rx2, ry2, s, t: (k - 1) * (11 / 3) * 0.25 / (44 * u ** 2) ** 1.5,
            lambda u, v, rx2, ry2, s, t: np.full_like(u, float(sharpest)),
        ]
        return _finish(pair, branch, steps, sharpest, sp.sqrt(11) / (2 ** 5 * 3), stages)

    _, min_q2 = quad_min(q2(k))
    _, max_den = quad_max(QuadraticOnInterval(k - 1, 1 - 4 * (k - 1), 4 * (k - 1)))
    sharpest = (K - 6) * (K - 1) ** 3 / (K ** 2 * (4 * (K - 1) ** 3 + (K - 1) ** 2) ** sp.Rational(3, 2))
    displayed_step = sp.Integer(6) ** 3 / (sp.Integer(11) ** 2 * (4 * 10 ** 3 + 10 ** 2) ** sp.Rational(3, 2))
    terminus = sp.Integer(1) / sp.Integer(11) ** 5
    steps = [
        _step("min q2 on [0,1] at t = 1", _rat(min_q2), "==", K - 6),
        _step("q2 minimum is positive", K - 6, ">", 0),
        _step("max of (k-1)(t-2)^2 + t on [0,1]", _rat(max_den), "<=", 4 * (K - 1) + 1),
        _step("worst case over k = 7..11", sharpest, ">=", displayed_step),
        _step("displayed terminus", displayed_step, ">=", terminus, terminus=True),
    ]
    D = 4 * (k - 1) ** 3 + (k - 1) ** 2
    stages = [
        lambda u, v, rx2, ry2, s, t: (k - 1) * (s + t) / t
        * ((k - 1) * u ** 2 + (3 - 4 * k) * u * v + 4 * (k - 2) * v ** 2)
        / ((k - 1) * (u - 2 * v) ** 2 + u * v) ** 1.5,
        lambda u, v, rx2, ry2, s, t: (k - 1) * (k - 6) * v ** 2 / ((4 * (k - 1) + 1) * v ** 2) ** 1.5,
        lambda u, v, rx2, ry2, s, t: np.full_like(u, (k - 6) * (k - 1) ** 3 / (k ** 2 * D ** 1.5)),
    ]
    return _finish(pair, branch, steps, sharpest, terminus, stages)


def branch_chain_35(branch: BranchKind) -> ChainTrace:
    """Chain for the oriented pair (h, k) = (3, 5)."""
    pair = (3, 5)
    if branch is BranchKind.U_POWER:
        _, min_p3 = quad_min(p3())
        prefactor = sp.Rational(1, 32) / sp.Rational(1, 32) ** sp.Rational(3, 2)
        sharpest = prefactor * _rat(min_p3) * 4 * sp.Rational(1, 4) / sp.Integer(14) ** 3
        steps = [
            _step("min p3 on [0,1] at t = 1", _rat(min_p3), "==", 4),
            _step("normalising constants", prefactor, "==", 4 * sp.sqrt(2)),
            _step("144|y|^4 <= 196|y|^4", 144, "<=", 196),
            _step("displayed terminus", sharpest, "==", 2 * sp.sqrt(2) / sp.Integer(7) ** 3, terminus=True),
        ]
        stages = [
            lambda u, v, rx2, ry2, s, t: 4 * math.sqrt(2) * (s + t) / s
            * (49 * u ** 2 - 72 * u * v + 27 * v ** 2) / (49 * u ** 2 - 10 * u * v + 9 * v ** 2) ** 1.5,
            lambda u, v, rx2, ry2, s, t: 4 * math.sqrt(2)
            * (49 * u ** 2 - 72 * u * v + 27 * v ** 2) / (196 * rx2 ** 2 + 144 * ry2 ** 2) ** 1.5,
            lambda u, v, rx2, ry2, s, t: 4 * math.sqrt(2) * 4 * u ** 2 / (196 * (rx2 ** 2 + ry2 ** 2)) ** 1.5,
            lambda u, v, rx2, ry2, s, t: np.full_like(u, 2 * math.sqrt(2) / 343),
        ]
        return _finish(pair, branch, steps, sharpest, 2 * sp.sqrt(2) / sp.Integer(7) ** 3, stages)

    _, min_q3 = quad_min(q3())
    prefactor = sp.Rational(1, 16) / sp.Rational(1, 16) ** sp.Rational(3, 2)
    sharpest = prefactor * _rat(min_q3) * 16 * sp.Rational(1, 9) / sp.Integer(28) ** 3
    steps = [
        _step("min q3 on [0,1] at t = 1 (first display carries a stray factor 2)",
              _rat(min_q3), "==", 2),
        _step("normalising constants", prefactor, "==", 4),
        _step("36|x|^4 <= 784|x|^4", 36, "<=", 784),
        _step("displayed terminus", sharpest, "==", sp.Integer(2) / (3 ** 2 * sp.Integer(7) ** 3), terminus=True),
    ]
    stages = [
        lambda u, v, rx2, ry2, s, t: 4 * (s + t) / t
        * (27 * u ** 2 - 123 * u * v + 98 * v ** 2) / (9 * u ** 2 - 34 * u * v + 49 * v ** 2) ** 1.5,
        lambda u, v, rx2, ry2, s, t: 4 * (27 * u ** 2 - 123 * u * v + 98 * v ** 2)
        / (36 * rx2 ** 2 + 784 * ry2 ** 2) ** 1.5,
        lambda u, v, rx2, ry2, s, t: 4 * 2 * v ** 2 / (784 * (rx2 ** 2 + ry2 ** 2)) ** 1.5,
        lambda u, v, rx2, ry2, s, t: np.full_like(u, 2 / 3087),
    ]
    return _finish(pair, branch, steps, sharpest, sp.Integer(2) / (3 ** 2 * sp.Integer(7) ** 3), stages)


def chains_for(cone: ConeParams) -> Dict[BranchKind, ChainTrace]:
    """Both chains, keyed by the cone's own branch labels."""
    oriented = oriented_pair(cone)
    if oriented is None:
        raise UncertifiedPairError(f"{cone} is not a certified pair")
    h, k = oriented
    traces = {}
    for kind in BranchKind:
        trace = branch_chain_35(kind) if oriented == (3, 5) else branch_chain_2k(k, kind)
        label = kind if oriented == (cone.h, cone.k) else kind.other
        traces[label] = trace
    return traces


# =============================================================================
# CONSTANTS
# =============================================================================

def claimed_constant(cone: ConeParams) -> sp.Expr:
    oriented = oriented_pair(cone)
    if oriented is None:
        raise UncertifiedPairError(f"{cone} is not a certified pair")
    if oriented == (3, 5):
        return sp.sqrt(3) / sp.Integer(21) ** 3
    return sp.sqrt(11) / sp.Integer(11) ** 6


def chain_constant(cone: ConeParams) -> sp.Expr:
    """dist-normalised constant from the chain coefficients: min · √(m-2)."""
    traces = chains_for(cone)
    coefficient = sp.Min(*[trace.coefficient for trace in traces.values()])
    return sp.simplify(coefficient * sp.sqrt(cone.m - 2))


def sharper_constant(cone: ConeParams) -> sp.Expr:
    """Same as chain_constant but using each chain's sharpest verified coefficient."""
    traces = chains_for(cone)
    coefficient = sp.Min(*[trace.sharpest for trace in traces.values()])
    return sp.simplify(coefficient * sp.sqrt(cone.m - 2))


# =============================================================================
# INTERVAL SWEEP
# =============================================================================

@dataclass
class Certificate:
    cone: ConeParams
    claimed_c: sp.Expr
    verified_lower_bound: float
    subdivisions: int
    margin: float
    branch_details: Dict[str, Dict[str, Any]]
    passed: bool
    numerical_min: float
    chain_constant: sp.Expr
    sharper_constant: sp.Expr
    leaves: int
    max_depth: int
    error: Optional[str] = None

    def to_mapping(self) -> Dict[str, Any]:
        mapping = {
            "cone": {"k": self.cone.k, "h": self.cone.h, "m": self.cone.m},
            "claimed_c": self.claimed_c,
            "verified_lower_bound": self.verified_lower_bound,
            "subdivisions": self.subdivisions,
            "margin": self.margin,
            "branch": self.branch_details,
            "passed": self.passed,
            "numerical_min": self.numerical_min,
            "chain_constant": self.chain_constant,
            "sharper_constant": self.sharper_constant,
            "leaves": self.leaves,
            "max_depth": self.max_depth,
        }
        if self.error:
            mapping["error"] = self.error
        return mapping


def _round_down(x) -> float:
    return math.nextafter(float(x), -math.inf)


def _iv_rational(x) -> Any:
    x = Fraction(x)
    return iv.mpf(x.numerator) / iv.mpf(x.denominator)


def _iv_coefficients(branch: CalibrationBranch) -> Dict[str, Any]:
    cone = branch.cone
    return {
        "Q": tuple(_iv_rational(c) for c in numerator_coefficients(branch.region, branch.d, cone.h, cone.k)),
        "P": tuple(_iv_rational(c) for c in gradient_coefficients(branch.region, branch.d, cone.h, cone.k)),
        "ab8": _iv_rational(Fraction(branch.a * branch.b, 8)),
        "sqrt_m2": iv.sqrt(iv.mpf(cone.m - 2)),
    }


def _theta(j: int, denom: int) -> float:
    # Index form keeps bisection endpoints identical to finer uniform grids.
    return THETA_END if j == denom else HALF_PI * j / denom


class _Sweep:
    def __init__(self, cone: ConeParams):
        self.cone = cone
        self.sqrt_a = iv.sqrt(iv.mpf(cone.u_scale))
        self.sqrt_b = iv.sqrt(iv.mpf(cone.v_scale))
        self.branches = {kind: branch_for(cone, kind) for kind in BranchKind}
        self.coeffs = {kind: _iv_coefficients(b) for kind, b in self.branches.items()}

    def enclose(self, lo: float, hi: float) -> Dict[BranchKind, float]:
        """Rigorous lower bounds of F on [lo, hi] for each branch the interval meets."""
        theta = iv.mpf([lo, hi])
        s = self.sqrt_a * iv.cos(theta)
        t = self.sqrt_b * iv.sin(theta)
        diff = s - t
        if float(diff.a) > 0:
            kinds = [BranchKind.U_POWER]
        elif float(diff.b) < 0:
            kinds = [BranchKind.V_POWER]
        else:
            kinds = [BranchKind.U_POWER, BranchKind.V_POWER]
        bounds = {}
        for kind in kinds:
            coeffs = self.coeffs[kind]
            p = coeffs["P"][0] * s ** 2 * s ** 2 + coeffs["P"][1] * s ** 2 * t ** 2 + coeffs["P"][2] * t ** 2 * t ** 2
            root = s if kind is BranchKind.U_POWER else t
            if not (float(p.a) > 0 and float(root.a) > 0):
                bounds[kind] = -math.inf
                continue
            value = reduced_quotient(s, t, self.branches[kind], coeffs, iv.sqrt, abs)
            bounds[kind] = _round_down(value.a)
        return bounds


def certify_pointwise(cone: ConeParams, subdivisions: int = 2 ** 14,
                      max_depth: int = DEFAULT_MAX_DEPTH,
                      callback: Optional[Callable[[str, Any], None]] = None) -> Certificate:
    """Interval-certify F = |div g||z|^2/dist >= c_{k,h} on the unit arc."""
    if subdivisions < MIN_SUBDIVISIONS:
        raise ValueError(f"subdivisions must be >= {MIN_SUBDIVISIONS}, got {subdivisions}")
    claimed = claimed_constant(cone)
    claimed_upper = math.nextafter(float(sp.N(claimed, 30)), math.inf)
    sweep = _Sweep(cone)

    branch_bounds = {kind: math.inf for kind in BranchKind}
    overall = math.inf
    leaves = 0
    deepest = 0
    stuck = 0
    stack: List[Tuple[int, int, int]] = [(j, subdivisions, 0) for j in reversed(range(subdivisions))]
    while stack:
        j, denom, depth = stack.pop()
        bounds = sweep.enclose(_theta(j, denom), _theta(j + 1, denom))
        lower = min(bounds.values())
        if lower <= claimed_upper and depth < max_depth:
            stack.append((2 * j + 1, 2 * denom, depth + 1))
            stack.append((2 * j, 2 * denom, depth + 1))
            continue
        if lower <= claimed_upper:
            stuck += 1
        leaves += 1
        deepest = max(deepest, depth)
        overall = min(overall, lower)
        for kind, value in bounds.items():
            branch_bounds[kind] = min(branch_bounds[kind], value)

    if stuck and overall == -math.inf:
        raise IntervalTooWideError(
            f"{cone}: {stuck} subintervals stayed unbounded at depth {max_depth}; "
            "increase subdivisions"
        )

    traces = chains_for(cone)
    details = {}
    for kind in BranchKind:
        branch = sweep.branches[kind]
        trace = traces[kind]
        details[kind.value] = {
            "d": branch.d,
            "chain_coefficient": trace.coefficient,
            "chain_sharpest": trace.sharpest,
            "chain_terminus_verified": trace.terminus_verified,
            "sweep_lower_bound": branch_bounds[kind],
        }
    passed = stuck == 0 and overall > claimed_upper
    certificate = Certificate(
        cone=cone,
        claimed_c=claimed,
        verified_lower_bound=overall,
        subdivisions=subdivisions,
        margin=overall - float(sp.N(claimed, 30)),
        branch_details=details,
        passed=passed,
        numerical_min=numerical_min(cone, max(8 * subdivisions, 4096)),
        chain_constant=chain_constant(cone),
        sharper_constant=sharper_constant(cone),
        leaves=leaves,
        max_depth=deepest,
        error=None if passed else f"{stuck} subintervals below the claimed constant",
    )
    if callback:
        callback("status", f"{cone}: {leaves} leaves, bound {overall:.6g}")
    return certificate


def F_reduced_array(cone: ConeParams, r_x, r_y) -> np.ndarray:
    """F = |div g| |z|^2 / dist in floating point, branch chosen by region."""
    r_x, r_y = np.broadcast_arrays(np.asarray(r_x, dtype=float), np.asarray(r_y, dtype=float))
    s = math.sqrt(cone.u_scale) * r_x
    t = math.sqrt(cone.v_scale) * r_y
    z2 = r_x ** 2 + r_y ** 2
    out = np.empty_like(s)
    in_k = s < t
    for kind, mask in ((BranchKind.V_POWER, in_k), (BranchKind.U_POWER, ~in_k)):
        if np.any(mask):
            branch = branch_for(cone, kind)
            out[mask] = reduced_quotient(s[mask], t[mask], branch, float_coefficients(branch),
                                         np.sqrt, np.abs, z2[mask])
    return out


def F_reduced(p) -> float:
    return float(F_reduced_array(p.cone, np.array([p.r_x]), np.array([p.r_y]))[0])


def numerical_min(cone: ConeParams, n: int) -> float:
    """Floating minimum of F on an n-point arc grid (informational)."""
    theta = (np.arange(n) + 0.5) * HALF_PI / n
    return float(np.min(F_reduced_array(cone, np.cos(theta), np.sin(theta))))


# =============================================================================
# SERIALIZATION
# =============================================================================

def certificate_to_text(certificate: Certificate) -> str:
    return reporting.render_text(certificate.to_mapping())


def certificate_from_text(text: str) -> Certificate:
    values = reporting.parse_text(text)
    details: Dict[str, Dict[str, Any]] = {}
    for kind in BranchKind:
        prefix = f"branch.{kind.value}."
        details[kind.value] = {
            "d": Fraction(values[prefix + "d"]),
            "chain_coefficient": sp.sympify(values[prefix + "chain_coefficient"]),
            "chain_sharpest": sp.sympify(values[prefix + "chain_sharpest"]),
            "chain_terminus_verified": values[prefix + "chain_terminus_verified"] == "true",
            "sweep_lower_bound": float(values[prefix + "sweep_lower_bound"]),
        }
    return Certificate(
        cone=ConeParams(k=int(values["cone.k"]), h=int(values["cone.h"])),
        claimed_c=sp.sympify(values["claimed_c"]),
        verified_lower_bound=float(values["verified_lower_bound"]),
        subdivisions=int(values["subdivisions"]),
        margin=float(values["margin"]),
        branch_details=details,
        passed=values["passed"] == "true",
        numerical_min=float(values["numerical_min"]),
        chain_constant=sp.sympify(values["chain_constant"]),
        sharper_constant=sp.sympify(values["sharper_constant"]),
        leaves=int(values["leaves"]),
        max_depth=int(values["max_depth"]),
        error=values.get("error"),
    )
