"""
Lawson
======

Sub-calibration certificates and quantitative stability checks for the
exceptional Lawson cones C(k,h) with (h,k) in {(3,5)} ∪ {(2,k) : 7 <= k <= 11}.

Modules:
- cone_geometry: reduced coordinates, regions, distances and weights
- subcalibration: the field g = ∇f/|∇f| and its divergence
- certification: exact branch chains and the interval sweep
- spectrum: radial stability form and first eigenvalue
- variation_lab: axisymmetric competitors and the identity checks
- constants_chain: slab bounds and the constant C
- report_cli: command-line runner
"""

from .certification import Certificate, certify_pointwise, chains_for, claimed_constant
from .cone_geometry import ConeParams, ReducedPoint, Region, all_certified_cones, reduce
from .constants_chain import alpha_bound_chain, slab_bound_paper, slab_volume, theorem1_constant
from .errors import LawsonError
from .spectrum import RadialProfile, SpectrumReport, lambda_estimate, quadratic_form
from .subcalibration import div_g_closed, g_field, sign_sweep
from .variation_lab import ProfileCurve, VariationReport, lemma1_identity_check, normal_graph, theorem1_check

__all__ = [
    "Certificate",
    "certify_pointwise",
    "chains_for",
    "claimed_constant",
    "ConeParams",
    "ReducedPoint",
    "Region",
    "all_certified_cones",
    "reduce",
    "alpha_bound_chain",
    "slab_bound_paper",
    "slab_volume",
    "theorem1_constant",
    "LawsonError",
    "RadialProfile",
    "SpectrumReport",
    "lambda_estimate",
    "quadratic_form",
    "div_g_closed",
    "g_field",
    "sign_sweep",
    "ProfileCurve",
    "VariationReport",
    "lemma1_identity_check",
    "normal_graph",
    "theorem1_check",
]
