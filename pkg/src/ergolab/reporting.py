"""Deterministic CSV/JSON emission.

Floats are written with repr (shortest round-trip), JSON keys are sorted,
files are written to a temp path and atomically renamed, and nothing
timestamped ever lands in an artifact, so byte-identical reruns are the
norm rather than an accident.
"""

from __future__ import annotations

import json
import math
import os

SCHEMA_VERSION = "1"


def fmt_cell(v) -> str:
    if v is None:
        return ""
    if hasattr(v, "item") and not isinstance(v, (str, bytes)):
        v = v.item()  # numpy scalars repr as np.float64(...) since numpy 2
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    return str(v)


def _atomic_write(path: str, text: str) -> None:
    tmp = f"{path}.tmp.{os.getpid()}.{id(text) & 0xFFFF}"
    with open(tmp, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)
    os.replace(tmp, path)


def write_csv(path: str, header, rows) -> None:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(fmt_cell(v) for v in row))
    _atomic_write(path, "\n".join(lines) + "\n")


def _sanitize(obj):
    if isinstance(obj, dict):
        return {k: _sanitize(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_sanitize(v) for v in obj]
    if isinstance(obj, float) and not math.isfinite(obj):
        return repr(obj)
    if isinstance(obj, complex):
        return {"re": obj.real, "im": obj.imag}
    if hasattr(obj, "item") and not isinstance(obj, (str, bytes)):  # numpy scalar
        return _sanitize(obj.item())
    return obj


def write_json(path: str, obj: dict) -> None:
    payload = {"schema_version": SCHEMA_VERSION}
    payload.update(_sanitize(obj))
    _atomic_write(path, json.dumps(payload, sort_keys=True, indent=2) + "\n")
