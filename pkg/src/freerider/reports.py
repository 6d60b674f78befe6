"""Deterministic JSON/CSV emission with an embedded metadata block.

Identical run configurations (seed included) must yield byte-identical
output, so no timestamps: reports carry the tool version, a hash of the
resolved configuration, the seed, and the numeric tolerances in force.
"""

from __future__ import annotations

import hashlib
import json
import math
from pathlib import Path

__all__ = ["SCHEMA_VERSION", "jsonable", "write_json", "write_csv", "run_metadata"]

SCHEMA_VERSION = 1


def jsonable(obj):
    """Recursively convert to JSON-safe values; non-finite floats become strings."""
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, (bool, int, str)) or obj is None:
        return obj
    if hasattr(obj, "item") and not hasattr(obj, "__len__"):  # numpy scalar
        return jsonable(obj.item())
    if hasattr(obj, "tolist"):  # numpy array
        return jsonable(obj.tolist())
    if isinstance(obj, float):
        if math.isnan(obj):
            return "NaN"
        if math.isinf(obj):
            return "Infinity" if obj > 0 else "-Infinity"
        return obj
    if isinstance(obj, frozenset):
        return sorted(obj)
    return str(obj)


def json_text(obj) -> str:
    return json.dumps(jsonable(obj), sort_keys=True, indent=2, allow_nan=False) + "\n"


def write_json(path, obj) -> None:
    Path(path).write_text(json_text(obj), encoding="utf-8")


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, float):  # includes numpy floats; normalize the repr
        value = float(value)
        return "" if math.isnan(value) else repr(value)
    if hasattr(value, "item"):
        return _cell(value.item())
    text = str(value)
    if any(ch in text for ch in ',"\n'):
        text = '"' + text.replace('"', '""') + '"'
    return text


def write_csv(path, header, rows) -> None:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_cell(v) for v in row))
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def run_metadata(config: dict, seed=None, tolerances: dict | None = None) -> dict:
    """Metadata block embedded in every report: version, config hash, seed."""
    from . import __version__

    canonical = json.dumps(jsonable(config), sort_keys=True)
    digest = hashlib.sha256(canonical.encode("utf-8")).hexdigest()
    return {
        "schema_version": SCHEMA_VERSION,
        "tool_version": __version__,
        "config_hash": digest,
        "seed": seed,
        "tolerances": tolerances or {},
        "p_value_reference": "t",
    }
