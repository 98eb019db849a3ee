"""
Lawson Report CLI
=================

Command-line front end: certificates, spectrum reports, variation sweeps and
constant tables for the exceptional Lawson cones.

Usage:
    python -m lawson certify --cones all-S --subdivisions 16384
    python -m lawson spectrum --cones 3,5 --grid 4096 --R 0.5 1 2
    python -m lawson variations --cones 2,7 --amplitudes 0.01 0.05
    python -m lawson constants --epsilons 0.001 0.01 0.1

Exit codes: 0 everything passed, 1 configuration error, 2 verification failure.
"""

from __future__ import annotations

import argparse
import os
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import pandas as pd
import sympy as sp

from lawson import reporting
from lawson.certification import certify_pointwise, claimed_constant
from lawson.cone_geometry import ConeParams, all_certified_cones
from lawson.constants_chain import (
    DEFAULT_EPSILON_GRID,
    alpha_bound_chain,
    display5_domination,
    elementary_inequality_check,
    slab_table,
    slab_volume,
    slab_volume_monte_carlo,
    theorem1_constant,
    unit_ball_table,
)
from lawson.errors import ConfigError, LawsonError
from lawson.spectrum import (
    DEFAULT_T_VALUES,
    PROFILE_KINDS,
    RadialProfile,
    bessel_reference,
    lambda_estimate,
    taylor_second_variation_check,
)
from lawson.variation_lab import DEFAULT_AMPLITUDES, DEFAULT_MESH, LEMMA1_TOLERANCE, variation_sweep


# =============================================================================
# CONFIGURATION
# =============================================================================

COMMANDS = ("certify", "spectrum", "variations", "constants")
FORMATS = ("text", "csv")
EXIT_OK, EXIT_CONFIG, EXIT_FAILED = 0, 1, 2


@dataclass(frozen=True)
class RunDefaults:
    subdivisions: int = 2 ** 14
    grid: int = 4096
    mesh: int = DEFAULT_MESH
    R_values: Tuple[float, ...] = (0.5, 1.0, 2.0)
    epsilons: Tuple[float, ...] = DEFAULT_EPSILON_GRID
    amplitudes: Tuple[float, ...] = DEFAULT_AMPLITUDES
    t_values: Tuple[float, ...] = DEFAULT_T_VALUES
    seed: int = 0
    out: str = "lawson-out"
    fmt: str = "text"


RUN_DEFAULTS = RunDefaults()
MONTE_CARLO_SAMPLES = 10 ** 6
MONTE_CARLO_EPS = 0.1
TAYLOR_SUPPORT = (0.4, 0.9)


@dataclass
class RunConfig:
    command: str
    cones: List[ConeParams]
    subdivisions: int = RUN_DEFAULTS.subdivisions
    grid: int = RUN_DEFAULTS.grid
    mesh: int = RUN_DEFAULTS.mesh
    R_values: Tuple[float, ...] = RUN_DEFAULTS.R_values
    epsilons: Tuple[float, ...] = RUN_DEFAULTS.epsilons
    amplitudes: Tuple[float, ...] = RUN_DEFAULTS.amplitudes
    t_values: Tuple[float, ...] = RUN_DEFAULTS.t_values
    seed: int = RUN_DEFAULTS.seed
    out: Path = Path(RUN_DEFAULTS.out)
    fmt: str = RUN_DEFAULTS.fmt

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ConfigError(f"Unknown command {self.command!r}")
        if self.fmt not in FORMATS:
            raise ConfigError(f"Unknown format {self.fmt!r}")
        if not self.cones:
            raise ConfigError("No cones selected")
        for cone in self.cones:
            if not cone.certified:
                raise ConfigError(f"{cone} is not in the certified family")
        if any(R <= 0 for R in self.R_values) or any(eps <= 0 for eps in self.epsilons):
            raise ConfigError("Radii and epsilons must be positive")
        self.out = Path(self.out)


@dataclass
class RunTelemetry:
    command: str
    start_time: float = 0.0
    end_time: float = 0.0
    cones: int = 0
    failures: int = 0
    files: List[Path] = field(default_factory=list)

    @property
    def duration_seconds(self) -> float:
        return self.end_time - self.start_time


@dataclass
class CommandResult:
    command: str
    success: bool
    exit_code: int
    files: List[Path] = field(default_factory=list)
    details: Dict[str, Any] = field(default_factory=dict)
    telemetry: Optional[RunTelemetry] = None
    error: Optional[str] = None


def parse_cones(tokens: Sequence[str]) -> List[ConeParams]:
    """'all-S' or one or more 'k,h' pairs."""
    if list(tokens) == ["all-S"]:
        return all_certified_cones()
    try:
        return [ConeParams.parse(token) for token in tokens]
    except (ValueError, TypeError) as exc:
        raise ConfigError(f"Malformed cone selection {' '.join(tokens)!r}: {exc}") from exc


def _write_report(config: RunConfig, stem: str, mapping: Dict[str, Any]) -> Path:
    if config.fmt == "csv":
        frame = pd.DataFrame([reporting.flatten(mapping)])
        return reporting.write_csv(frame, config.out / f"{stem}.csv")
    return reporting.write_text(config.out / f"{stem}.txt", mapping)


def _finish(telemetry: RunTelemetry, failures: int, details: Dict[str, Any]) -> CommandResult:
    telemetry.end_time = time.time()
    telemetry.failures = failures
    success = failures == 0
    return CommandResult(
        command=telemetry.command,
        success=success,
        exit_code=EXIT_OK if success else EXIT_FAILED,
        files=list(telemetry.files),
        details=details,
        telemetry=telemetry,
        error=None if success else f"{failures} verification failure(s)",
    )


# =============================================================================
# COMMANDS
# =============================================================================

def cmd_certify(config: RunConfig, callback: Optional[Callable[[str, Any], None]] = None) -> CommandResult:
    """Interval certificate and branch chains for each selected cone."""
    telemetry = RunTelemetry(command="certify", start_time=time.time())
    failures = 0
    details = {}
    for cone in config.cones:
        if callback:
            callback("cone_start", cone)
        try:
            certificate = certify_pointwise(cone, config.subdivisions, callback=callback)
        except LawsonError as exc:
            failures += 1
            details[cone.label] = {"passed": False, "error": str(exc)}
            if callback:
                callback("cone_complete", (cone, False, str(exc)))
            continue
        telemetry.files.append(_write_report(config, f"certificate-{cone.k}-{cone.h}", certificate.to_mapping()))
        telemetry.cones += 1
        failures += 0 if certificate.passed else 1
        details[cone.label] = {"passed": certificate.passed, "margin": certificate.margin}
        if callback:
            callback("cone_complete", (cone, certificate.passed, f"bound {certificate.verified_lower_bound:.6g}"))
    return _finish(telemetry, failures, details)


def cmd_spectrum(config: RunConfig, callback: Optional[Callable[[str, Any], None]] = None) -> CommandResult:
    """λ(1) against c_{k,h}, with the R-scaling table and the Bessel reference."""
    telemetry = RunTelemetry(command="spectrum", start_time=time.time())
    failures = 0
    details = {}
    for cone in config.cones:
        if callback:
            callback("cone_start", cone)
        try:
            report = lambda_estimate(cone, 1.0, config.grid)
            scaling = {f"R={R!r}": lambda_estimate(cone, R, config.grid).lambda_R2 for R in config.R_values}
            reference = bessel_reference(cone)
        except LawsonError as exc:
            failures += 1
            details[cone.label] = {"passed": False, "error": str(exc)}
            if callback:
                callback("cone_complete", (cone, False, str(exc)))
            continue
        claimed = float(sp.N(claimed_constant(cone), 30))
        spread = max(abs(v - report.lambda_R2) for v in scaling.values()) / report.lambda_R2
        passed = report.lambda_estimate >= claimed
        mapping = report.to_mapping()
        mapping.update({
            "claimed_c": claimed_constant(cone),
            "margin_factor": report.lambda_estimate / claimed,
            "bessel_reference": reference,
            "bessel_rel_error": abs(report.lambda_estimate - reference) / reference,
            "hardy_ratio": report.lambda_estimate / report.hardy_floor,
            "scaling": scaling,
            "scaling_spread": spread,
            "passed": passed,
        })
        telemetry.files.append(_write_report(config, f"spectrum-{cone.k}-{cone.h}", mapping))
        telemetry.cones += 1
        failures += 0 if passed else 1
        details[cone.label] = {"passed": passed, "lambda": report.lambda_estimate}
        if callback:
            callback("cone_complete", (cone, passed, f"lambda(1) = {report.lambda_estimate:.8g}"))
    return _finish(telemetry, failures, details)


def cmd_variations(config: RunConfig, callback: Optional[Callable[[str, Any], None]] = None) -> CommandResult:
    """Competitor sweeps, identity checks and the second-variation Taylor fit."""
    telemetry = RunTelemetry(command="variations", start_time=time.time())
    failures = 0
    details = {}
    for cone in config.cones:
        if callback:
            callback("cone_start", cone)
        try:
            frame = pd.concat(
                [variation_sweep(cone, PROFILE_KINDS, config.amplitudes, R, config.mesh,
                                 config.epsilons, callback=callback) for R in config.R_values],
                ignore_index=True,
            )
            phi = RadialProfile.bump(*TAYLOR_SUPPORT, n=config.mesh + 1)
            taylor = taylor_second_variation_check(cone, phi, config.t_values)
        except LawsonError as exc:
            failures += 1
            details[cone.label] = {"passed": False, "error": str(exc)}
            if callback:
                callback("cone_complete", (cone, False, str(exc)))
            continue
        frame["taylor_slope"] = taylor.remainder_slope
        frame["taylor_limit_rel_error"] = taylor.limit_rel_error
        frame["taylor_volume_slope"] = taylor.volume_slope
        at_rest = frame[frame["t"] == 0.0]
        rest_ok = bool((at_rest[["delta_p", "vol_delta", "dist_volume", "alpha", "delta"]] == 0.0).all().all())
        rows_ok = bool(
            frame["theorem1_holds"].all() and frame["dist_chain_holds"].all()
            and frame["slab_chain_holds"].all() and frame["alpha_chain_holds"].all()
            and (frame["delta_p"] >= 0).all() and (frame["lemma1_gap"] <= LEMMA1_TOLERANCE).all()
        )
        passed = rows_ok and rest_ok and taylor.passed
        stem = f"variations-{cone.k}-{cone.h}"
        telemetry.files.append(reporting.write_csv(frame, config.out / f"{stem}.csv"))
        if config.fmt == "text":
            telemetry.files.append(reporting.write_text(config.out / f"{stem}.txt", {
                "cone": {"k": cone.k, "h": cone.h, "m": cone.m},
                "R_values": list(config.R_values),
                "epsilons": list(config.epsilons),
                "amplitudes": list(config.amplitudes),
                "rows": len(frame),
                "max_ratio": float(frame["ratio"].max()),
                "max_lemma1_gap": float(frame["lemma1_gap"].max()),
                "rest_rows_zero": rest_ok,
                "rows_hold": rows_ok,
                "taylor": {
                    "slope": taylor.remainder_slope,
                    "limit_rel_error": taylor.limit_rel_error,
                    "volume_slope": taylor.volume_slope,
                    "volume_rel_error": taylor.volume_rel_error,
                    "passed": taylor.passed,
                },
                "passed": passed,
            }))
        telemetry.cones += 1
        failures += 0 if passed else 1
        details[cone.label] = {"passed": passed, "max_ratio": float(frame["ratio"].max()),
                               "taylor_slope": taylor.remainder_slope}
        if callback:
            callback("cone_complete", (cone, passed, f"taylor slope {taylor.remainder_slope:.3f}"))
    return _finish(telemetry, failures, details)


def cmd_constants(config: RunConfig, callback: Optional[Callable[[str, Any], None]] = None) -> CommandResult:
    """Slab tables, the α chain, display coefficients and the constant C."""
    telemetry = RunTelemetry(command="constants", start_time=time.time())
    frame = slab_table(config.cones, 1.0, config.epsilons)
    telemetry.files.append(reporting.write_csv(frame, config.out / "constants.csv"))
    telemetry.cones = len(config.cones)

    derivation = theorem1_constant()
    elementary = elementary_inequality_check()
    omegas = unit_ball_table()
    mapping: Dict[str, Any] = {"derivation": derivation.to_mapping()}
    mapping["elementary"] = {f"k={k}": ok for k, ok in elementary.items()}
    mapping["omega"] = {f"{int(row.dim):02d}": float(row.omega) for row in omegas.itertuples()}
    mapping["omega_below_6"] = bool(omegas["below_6"].all())
    for delta in (0.0, 1e-6, 1.0, 36.0, 100.0):
        chain = alpha_bound_chain(config.cones[0], 1.0, delta)
        mapping[f"alpha_chain.delta={delta!r}"] = {
            "regime": chain.regime,
            "alpha_bound": chain.alpha_bound,
            "gate_ok": chain.gate_ok,
            "am_gm_error": chain.am_gm_error,
        }
    dominated = True
    for cone in config.cones:
        check = display5_domination(cone)
        estimate, stderr = slab_volume_monte_carlo(cone, 1.0, MONTE_CARLO_EPS, MONTE_CARLO_SAMPLES, config.seed)
        exact = slab_volume(cone, 1.0, MONTE_CARLO_EPS)
        dominated = dominated and check.dominated
        mapping[f"cone.{cone.label}"] = {
            "l_over_c": check.l_over_c,
            "slab_prefactor": check.slab_prefactor,
            "slab_coefficient": check.slab_coefficient,
            "l_over_c_within_display": check.l_over_c_within_display,
            "prefactor_within_display": check.prefactor_within_display,
            "dominated": check.dominated,
            "monte_carlo_slab": estimate,
            "monte_carlo_stderr": stderr,
            "quadrature_slab": exact,
        }
        if callback:
            callback("status", f"{cone}: l/c = {float(check.l_over_c):.4g}, dominated = {check.dominated}")
    if config.fmt == "text":
        telemetry.files.append(reporting.write_text(config.out / "constants.txt", mapping))

    failures = int((~frame["holds"]).sum()) + (0 if all(elementary.values()) else 1) + (0 if dominated else 1)
    return _finish(telemetry, failures, {"C": derivation.value, "slab_rows": len(frame)})


HANDLERS = {
    "certify": cmd_certify,
    "spectrum": cmd_spectrum,
    "variations": cmd_variations,
    "constants": cmd_constants,
}


# =============================================================================
# OUTPUT
# =============================================================================

def print_callback(event_type: str, data: Any) -> None:
    if event_type == "status":
        print(f"   {data}")
    elif event_type == "cone_start":
        print(f"\n🔍 {data}")
    elif event_type == "cone_complete":
        cone, passed, message = data
        print(f"  {'✅' if passed else '❌'} {cone}: {message}")


def print_telemetry(telemetry: RunTelemetry) -> None:
    print("\n" + "=" * 70)
    print("📊 RUN REPORT")
    print("=" * 70)
    print(f"\n⏱️  Duration: {telemetry.duration_seconds:.1f} seconds")
    print(f"🔢 Cones: {telemetry.cones}")
    print(f"❌ Failures: {telemetry.failures}")
    print(f"📄 Files written: {len(telemetry.files)}")
    for path in telemetry.files:
        print(f"   └─ {path}")
    print("\n" + "=" * 70)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lawson",
        description="Sub-calibration certificates and stability checks for Lawson cones",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  # Certify every cone of the family
  python -m lawson certify --cones all-S --subdivisions 16384

  # Spectrum of one cone on three window radii
  python -m lawson spectrum --cones 3,5 --R 0.5 1 2

  # Write the slab tables as CSV only
  python -m lawson constants --format csv --out results/
""",
    )
    parser.add_argument("command", choices=COMMANDS, help="What to run")
    parser.add_argument("--cones", nargs="+", default=["all-S"],
                        help="'all-S' or one or more k,h pairs (default: all-S)")
    parser.add_argument("--subdivisions", type=int, default=RUN_DEFAULTS.subdivisions,
                        help=f"Initial arc subdivisions for certify (default: {RUN_DEFAULTS.subdivisions})")
    parser.add_argument("--grid", type=int, default=RUN_DEFAULTS.grid,
                        help=f"Spectrum grid size (default: {RUN_DEFAULTS.grid})")
    parser.add_argument("--mesh", type=int, default=RUN_DEFAULTS.mesh,
                        help=f"Segments per competitor curve (default: {RUN_DEFAULTS.mesh})")
    parser.add_argument("--R", nargs="+", type=float, default=list(RUN_DEFAULTS.R_values),
                        help="Window radii for the spectrum scaling table and the variation sweeps")
    parser.add_argument("--epsilons", nargs="+", type=float, default=list(RUN_DEFAULTS.epsilons),
                        help="Slab widths for the constants tables and the variation sweeps")
    parser.add_argument("--amplitudes", nargs="+", type=float, default=list(RUN_DEFAULTS.amplitudes),
                        help="Normal-graph amplitudes for variations")
    parser.add_argument("--seed", type=int, default=RUN_DEFAULTS.seed,
                        help="Seed for Monte Carlo oracles (default: 0)")
    parser.add_argument("--out", type=str, default=os.environ.get("LAWSON_OUT", RUN_DEFAULTS.out),
                        help="Output directory (default: $LAWSON_OUT or lawson-out)")
    parser.add_argument("--format", dest="fmt", choices=FORMATS, default=RUN_DEFAULTS.fmt,
                        help="Report format (default: text)")
    parser.add_argument("--quiet", "-q", action="store_true", help="Suppress progress output")
    parser.add_argument("--no-telemetry", action="store_true", help="Don't print the run report")
    return parser


def build_config(args: argparse.Namespace) -> RunConfig:
    return RunConfig(
        command=args.command,
        cones=parse_cones(args.cones),
        subdivisions=args.subdivisions,
        grid=args.grid,
        mesh=args.mesh,
        R_values=tuple(args.R),
        epsilons=tuple(args.epsilons),
        amplitudes=tuple(args.amplitudes),
        seed=args.seed,
        out=Path(args.out),
        fmt=args.fmt,
    )


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Command-line interface; returns the exit code."""
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = build_config(args)
    except ConfigError as exc:
        print(f"❌ Configuration error: {exc}")
        return EXIT_CONFIG

    if not args.quiet:
        print(f"\n{'=' * 70}")
        print(f"📐 lawson {config.command}")
        print(f"{'=' * 70}")
        print(f"Cones:  {', '.join(str(cone) for cone in config.cones)}")
        print(f"Output: {config.out}")
        print(f"{'=' * 70}")

    try:
        result = HANDLERS[config.command](config, None if args.quiet else print_callback)
    except (ConfigError, ValueError) as exc:
        print(f"❌ Configuration error: {exc}")
        return EXIT_CONFIG

    if not args.no_telemetry and not args.quiet and result.telemetry:
        print_telemetry(result.telemetry)
    if result.success:
        print(f"✅ {config.command}: all checks passed")
    else:
        print(f"❌ {config.command}: {result.error}")
    return result.exit_code


if __name__ == "__main__":
    sys.exit(main())
