"""
Report serialization shared by certificates, spectrum reports and traces.

Text reports are `key = value` lines in sorted key order. Nested mappings are
flattened with dotted keys, exact rationals print as p/q, symbolic constants
through sympy.sstr and floats through repr, so a report is a pure function of
its values and parses back without loss.
"""

from __future__ import annotations

from enum import Enum
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, Mapping

import numpy as np
import pandas as pd
import sympy as sp

CSV_FLOAT_FORMAT = "%.17g"


def format_value(value: Any) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, Enum):
        return str(value.value)
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, Fraction):
        return f"{value.numerator}/{value.denominator}" if value.denominator != 1 else str(value.numerator)
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    if isinstance(value, sp.Basic):
        return sp.sstr(value)
    text = str(value)
    if "\n" in text:
        raise ValueError(f"Report values must be single-line, got {text!r}")
    return text


def flatten(mapping: Mapping[str, Any], prefix: str = "") -> Dict[str, str]:
    flat: Dict[str, str] = {}
    for key, value in mapping.items():
        name = f"{prefix}{key}"
        if isinstance(value, Mapping):
            flat.update(flatten(value, prefix=f"{name}."))
        elif isinstance(value, (list, tuple)):
            flat[name] = ", ".join(format_value(v) for v in value)
        else:
            flat[name] = format_value(value)
    return flat


def render_text(mapping: Mapping[str, Any]) -> str:
    flat = flatten(mapping)
    return "".join(f"{key} = {flat[key]}\n" for key in sorted(flat))


def parse_text(text: str) -> Dict[str, str]:
    values: Dict[str, str] = {}
    for line in text.splitlines():
        if not line.strip():
            continue
        key, sep, value = line.partition(" = ")
        if not sep:
            raise ValueError(f"Malformed report line: {line!r}")
        values[key] = value
    return values


def write_text(path: Path, mapping: Mapping[str, Any]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    # Fixed newline so reports are byte-identical across platforms.
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        handle.write(render_text(mapping))
    return path


def write_csv(frame: pd.DataFrame, path: Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(path, index=False, float_format=CSV_FLOAT_FORMAT, lineterminator="\n")
    return path
