"""Report assembly and emission (json / csv / text).

All exact numbers survive serialization: fractions become "num/den"
strings, sqrt-carrying bounds become explicit expression strings, and JSON
output is key-sorted so identical runs emit identical bytes apart from the
timing field.
"""

from __future__ import annotations

import dataclasses
import json
from fractions import Fraction
from typing import Any

import numpy as np

from .analysis import SqrtExpr
from .code import Codeword
from .errors import BadConfig
from .geometry import PointSet, Subspace

VERSION = "0.1.0"


def jsonable(obj: Any) -> Any:
    """Recursively convert report values into exact JSON-safe forms."""
    if isinstance(obj, Fraction):
        return f"{obj.numerator}/{obj.denominator}"
    if isinstance(obj, SqrtExpr):
        return {
            "rational": jsonable(obj.rational),
            "sqrt_coeff": jsonable(obj.sqrt_coeff),
            "q": obj.q,
            "approx": float(obj),
        }
    if isinstance(obj, Subspace):
        return [list(row) for row in obj.rows]
    if isinstance(obj, Codeword):
        return {"j": obj.j, "weight": obj.weight, "coeffs": {str(k): v for k, v in sorted(obj.coeffs.items())}}
    if isinstance(obj, PointSet):
        return {"size": len(obj), "indices": [int(i) for i in obj.indices]}
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {f.name: jsonable(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, np.ndarray):
        return [jsonable(x) for x in obj]
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(x) for x in obj]
    return obj


def make_report(task: str, inputs: dict, body: dict, elapsed: float | None = None) -> dict:
    return {
        "task": task,
        "inputs": jsonable(inputs),
        "result": jsonable(body),
        "timing_seconds": elapsed,
        "version": VERSION,
    }


def emit(report: dict, fmt: str = "json") -> str:
    if fmt == "json":
        return json.dumps(report, indent=2, sort_keys=True)
    if fmt == "csv":
        flat = _flatten(report)
        header = ",".join(k for k, _ in flat)
        values = ",".join(str(v) for _, v in flat)
        return header + "\n" + values
    if fmt == "text":
        lines = [f"task: {report['task']}"]
        for k, v in report.get("inputs", {}).items():
            lines.append(f"  {k} = {v}")
        lines.append("result:")
        for k, v in report.get("result", {}).items():
            lines.append(f"  {k} = {v}")
        return "\n".join(lines)
    raise BadConfig(f"unknown format {fmt!r}")


def _flatten(obj: Any, prefix: str = "") -> list[tuple[str, Any]]:
    if isinstance(obj, dict):
        out = []
        for k, v in obj.items():
            out.extend(_flatten(v, f"{prefix}{k}." if prefix else f"{k}."))
        return [(k.rstrip("."), v) for k, v in out] if out else []
    if isinstance(obj, list):
        return [(prefix.rstrip("."), ";".join(str(x) for x in obj))]
    return [(prefix.rstrip("."), obj)]
