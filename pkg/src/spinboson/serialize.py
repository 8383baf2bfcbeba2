"""Byte-deterministic JSON and CSV emission.

The standard json encoder prints floats with shortest round-trip repr, which
is stable but version-sensitive; output here is pinned to 17 significant
digits so identical configurations produce identical bytes everywhere.
"""

from __future__ import annotations

import json
import math

import numpy as np

__all__ = ["format_float", "json_dumps", "csv_lines"]


def format_float(x: float) -> str:
    if not math.isfinite(x):
        raise ValueError("non-finite value in output")
    return format(float(x), ".17g")


def _emit(obj) -> str:
    if obj is None:
        return "null"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return format_float(float(obj))
    if isinstance(obj, (complex, np.complexfloating)):
        return f"[{format_float(obj.real)},{format_float(obj.imag)}]"
    if isinstance(obj, str):
        return json.dumps(obj, ensure_ascii=True)
    if isinstance(obj, dict):
        items = ",".join(f"{json.dumps(str(k))}:{_emit(v)}" for k, v in obj.items())
        return "{" + items + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        seq = obj.tolist() if isinstance(obj, np.ndarray) else obj
        return "[" + ",".join(_emit(v) for v in seq) + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def json_dumps(obj) -> str:
    """Compact JSON with fixed float formatting and insertion-ordered keys."""
    return _emit(obj) + "\n"


def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return format_float(float(v))
    if isinstance(v, (complex, np.complexfloating)):
        return f"{format_float(v.real)}{v.imag:+.17g}j"
    return str(v)


def csv_lines(header: list[str], rows, config: dict | None = None) -> str:
    """CSV text with '#'-prefixed key=value provenance lines, LF newlines."""
    out = []
    if config:
        for k, v in config.items():
            out.append(f"# {k}={_cell(v)}")
    out.append(",".join(header))
    for row in rows:
        out.append(",".join(_cell(v) for v in row))
    return "\n".join(out) + "\n"
