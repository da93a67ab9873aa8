"""JSON and CSV formats for states, maps, channels, traces and reports.

Floats are written with 17 significant digits so every double round-trips
and identical runs produce byte-identical files.
"""

from __future__ import annotations

import json
import math
from dataclasses import fields, is_dataclass
from pathlib import Path

import numpy as np

from telesep.channels import AffineBlochMap, BellMixture
from telesep.qstate import DensityMatrix
from telesep.teleport import ProtocolTrace


def fmt_float(x: float) -> str:
    x = float(x)
    if not math.isfinite(x):
        raise ValueError(f"cannot serialize non-finite value {x}")
    text = format(x, ".17g")
    if "." not in text and "e" not in text:
        text += ".0"
    return text


def dumps(obj, indent: int | None = 2) -> str:
    """json.dumps with 17-significant-digit floats."""
    return _encode(to_jsonable(obj), indent, 0)


def _encode(obj, indent, level) -> str:
    if isinstance(obj, bool) or obj is None or isinstance(obj, (int, str)):
        return json.dumps(obj)
    if isinstance(obj, float):
        return fmt_float(obj)
    pad = "" if indent is None else "\n" + " " * (indent * (level + 1))
    end = "" if indent is None else "\n" + " " * (indent * level)
    sep = ", " if indent is None else ","
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [pad + json.dumps(str(k)) + ": " + _encode(v, indent, level + 1) for k, v in obj.items()]
        return "{" + sep.join(items) + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        # numeric leaves stay on one line to keep matrices readable
        if all(not isinstance(v, (list, tuple, dict)) for v in obj):
            return "[" + ", ".join(_encode(v, None, 0) for v in obj) + "]"
        items = [pad + _encode(v, indent, level + 1) for v in obj]
        return "[" + sep.join(items) + end + "]"
    raise TypeError(f"cannot encode {type(obj).__name__}")


def to_jsonable(obj):
    if isinstance(obj, DensityMatrix):
        return state_to_json_dict(obj)
    if isinstance(obj, (AffineBlochMap, BellMixture)):
        return obj.to_json_dict()
    if isinstance(obj, ProtocolTrace):
        return trace_to_json_dict(obj)
    if is_dataclass(obj) and not isinstance(obj, type):
        return {f.name: to_jsonable(getattr(obj, f.name)) for f in fields(obj)}
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return to_jsonable(obj.tolist())
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    return obj


# ---------------------------------------------------------------------------
# States
# ---------------------------------------------------------------------------


def state_to_json_dict(rho: DensityMatrix) -> dict:
    return {
        "n_qubits": rho.n_qubits,
        "matrix": [[[float(z.real), float(z.imag)] for z in row] for row in rho.mat],
    }


def state_from_json_dict(d: dict) -> DensityMatrix:
    """Parse and fully validate (Hermitian, unit trace, PSD) a state document."""
    arr = np.array(d["matrix"], dtype=float)
    if arr.ndim != 3 or arr.shape[2] != 2:
        raise ValueError("matrix entries must be [re, im] pairs")
    rho = DensityMatrix(arr[..., 0] + 1j * arr[..., 1])
    if "n_qubits" in d and int(d["n_qubits"]) != rho.n_qubits:
        raise ValueError(f"n_qubits {d['n_qubits']} does not match a {rho.dim}x{rho.dim} matrix")
    return rho


def read_state(path: str | Path) -> DensityMatrix:
    return state_from_json_dict(json.loads(Path(path).read_text()))


def write_state(rho: DensityMatrix, path: str | Path) -> None:
    Path(path).write_text(dumps(rho) + "\n")


def trace_to_json_dict(t: ProtocolTrace) -> dict:
    return {
        "outcome_label": t.outcome_label,
        "probability": float(t.probability),
        "correction": t.correction,
        "post_state": None if t.post_state is None else state_to_json_dict(t.post_state),
    }
