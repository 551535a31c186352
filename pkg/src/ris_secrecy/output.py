"""CSV and manifest writers."""

from __future__ import annotations

import json
import math
from pathlib import Path
from typing import Iterable, Sequence

SWEEP_SCHEMA = ("param_value", "mean_rate_bps_hz", "std_error", "lower_bound")
GRID_SCHEMA = ("psi_rad", "dist_m", "rate_bps_hz")
CONTOUR_SCHEMA = ("psi_rad", "dist_m")
BOUND_CHECK_SCHEMA = ("n_ris_elements", "mc_mean_bps_hz", "std_error", "lower_bound_bps_hz", "margin_bps_hz")
ETA_CHECK_SCHEMA = ("n_ris_elements", "mc_estimate", "formula", "relative_error")


def format_value(value) -> str:
    """12 significant digits for floats; empty field for missing values."""
    if value is None:
        return ""
    if isinstance(value, bool):
        return str(int(value))
    if isinstance(value, int):
        return str(value)
    value = float(value)
    if math.isfinite(value) and value == int(value) and abs(value) < 1e15:
        return str(int(value))
    return f"{value:.12g}"


def emit_csv(records: Iterable[Sequence], schema: Sequence[str], path: str | Path) -> Path:
    """Write ``records`` as UTF-8 CSV with a header row and '\\n' line endings."""
    path = Path(path)
    lines = [",".join(schema)]
    for i, row in enumerate(records):
        if len(row) != len(schema):
            raise ValueError(f"{path}: row {i} has {len(row)} fields, schema has {len(schema)}")
        lines.append(",".join(format_value(v) for v in row))
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write("\n".join(lines) + "\n")
    except OSError as exc:
        raise OSError(f"cannot write CSV to {path}: {exc}") from exc
    return path


def write_manifest(path: str | Path, manifest: dict) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return path
