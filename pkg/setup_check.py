"""
Lawson — Environment Setup Checker

Run this script to check whether your environment is ready to run the
certification suite.
Usage:  python setup_check.py

It checks:
  - Python version
  - Required Python libraries
  - A short smoke run of the exact polynomial minima
"""

import sys
import importlib
import importlib.util
import time

# ── Colours for terminal output ───────────────────────────────────────────────
GREEN  = "\033[92m"
YELLOW = "\033[93m"
RED    = "\033[91m"
BLUE   = "\033[94m"
BOLD   = "\033[1m"
RESET  = "\033[0m"

def ok(msg):    print(f"  {GREEN}✅ {msg}{RESET}")
def warn(msg):  print(f"  {YELLOW}⚠️  {msg}{RESET}")
def fail(msg):  print(f"  {RED}❌ {msg}{RESET}")
def info(msg):  print(f"  {BLUE}ℹ️  {msg}{RESET}")
def header(msg): print(f"\n{BOLD}{msg}{RESET}")
def divider():   print("─" * 55)


CORE_LIBRARIES = {
    "numpy":  "NumPy (vectorised closed forms, quadrature nodes)",
    "pandas": "Pandas (CSV tables)",
    "scipy":  "SciPy (sparse eigensolver, Bessel zeros)",
    "sympy":  "SymPy (exact branch chains)",
    "mpmath": "mpmath (interval arithmetic for certificates)",
}

DEV_LIBRARIES = {
    "pytest": "pytest (test runner)",
}


def check_python() -> bool:
    header("1. Python Version")
    major, minor = sys.version_info.major, sys.version_info.minor
    version_str = f"Python {major}.{minor}.{sys.version_info.micro}"
    if major == 3 and minor >= 10:
        ok(f"{version_str} — good to go")
        return True
    if major == 3 and minor == 9:
        warn(f"{version_str} — should work, but 3.10 or higher is what the suite is tested on")
        return True
    fail(f"{version_str} — Python 3.10 or higher is required")
    fail("Upgrade: https://www.python.org/downloads/")
    return False


def check_libraries() -> bool:
    header("2. Required Python Libraries")

    print("\n  Core libraries:")
    all_core_ok = True
    for lib, label in CORE_LIBRARIES.items():
        try:
            importlib.import_module(lib)
            ok(label)
        except ImportError:
            fail(f"{label} — not installed")
            all_core_ok = False

    if not all_core_ok:
        info("Fix: run  pip install -r requirements.txt")

    print("\n  Development libraries:")
    for lib, label in DEV_LIBRARIES.items():
        if importlib.util.find_spec(lib) is not None:
            ok(label)
        else:
            warn(f"{label} — not installed (only needed to run the tests)")
            info("Fix: run  pip install -r requirements-dev.txt")
    return all_core_ok


def check_smoke() -> bool:
    header("3. Smoke Run (exact polynomial minima)")
    try:
        from fractions import Fraction
        from lawson.certification import p2, p3, q2, q3, quad_min
    except ImportError as exc:
        fail(f"Could not import lawson — {exc}")
        return False

    start = time.time()
    expected = {
        "p2": (p2(), Fraction(11, 3)),
        "p3": (p3(), Fraction(4)),
        "q3": (q3(), Fraction(2)),
    }
    for k in range(7, 12):
        expected[f"q2(k={k})"] = (q2(k), Fraction(k - 6))

    all_ok = True
    for name, (quadratic, value) in expected.items():
        _, minimum = quad_min(quadratic)
        if minimum == value:
            ok(f"min {name} = {minimum}")
        else:
            fail(f"min {name} = {minimum}, expected {value}")
            all_ok = False
    info(f"Finished in {time.time() - start:.2f} seconds")
    return all_ok


def summary(results: dict):
    header("Summary")
    divider()

    if results.get("libraries") and results.get("smoke"):
        ok("Certification suite — ready to run")
    elif results.get("libraries"):
        fail("Libraries are installed but the smoke run failed")
    else:
        fail("Missing core libraries (run: pip install -r requirements.txt)")

    divider()
    print(f"\n{BOLD}Next step:{RESET}")
    if results.get("libraries"):
        print("  Certify one cone:  python -m lawson certify --cones 3,5")
        print("  Run the tests:     pytest -m 'not slow'\n")
    else:
        print("  Install core libraries first:  pip install -r requirements.txt\n")


def main():
    print(f"\n{BOLD}{'=' * 55}{RESET}")
    print(f"{BOLD}  Lawson — Environment Check{RESET}")
    print(f"{BOLD}{'=' * 55}{RESET}")

    results = {}
    results["python"] = check_python()
    results["libraries"] = check_libraries()
    results["smoke"] = check_smoke() if results["libraries"] else False

    summary(results)
    return 0 if all(results.values()) else 1


if __name__ == "__main__":
    sys.exit(main())
