"""JSON matrix documents and canonical serialization.

A matrix file is ``{"rows": r, "cols": c, "data": [[re, im], ...]}`` in
row-major order.  Plain numbers are accepted in ``data`` and read as real.
Floats are written with 17 significant digits so that write-read-write is
byte-identical.
"""

from __future__ import annotations

import json
import math
from numbers import Real

import numpy as np

from ._validation import InputError


def format_float(x: float) -> str:
    x = float(x)
    if not math.isfinite(x):
        raise InputError(f"cannot serialize non-finite number {x!r}")
    if x == 0.0:
        x = 0.0  # drop the sign of -0.0
    return format(x, ".17g")


def dumps(obj, indent: int = 2, _level: int = 0) -> str:
    """Canonical JSON text; dict keys keep insertion order."""
    pad = " " * (indent * (_level + 1))
    end = " " * (indent * _level)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {dumps(v, indent, _level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if all(not isinstance(v, (dict, list, tuple)) for v in obj):
            return "[" + ", ".join(dumps(v, indent, _level + 1) for v in obj) + "]"
        items = [pad + dumps(v, indent, _level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    if obj is None or isinstance(obj, (bool, np.bool_)):
        return json.dumps(None if obj is None else bool(obj))
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (Real, np.floating)):
        return format_float(obj)
    if isinstance(obj, str):
        return json.dumps(obj)
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def matrix_to_doc(M) -> dict:
    M = np.asarray(M, dtype=complex)
    if M.ndim == 1:
        M = M[:, None]
    rows, cols = M.shape
    data = [[float(z.real), float(z.imag)] for z in M.ravel()]
    return {"rows": rows, "cols": cols, "data": data}


def _entry(v) -> complex:
    if isinstance(v, bool):
        raise InputError("boolean is not a matrix entry")
    if isinstance(v, Real):
        z = complex(float(v), 0.0)
    elif isinstance(v, (list, tuple)) and len(v) == 2 and all(
            isinstance(p, Real) and not isinstance(p, bool) for p in v):
        z = complex(float(v[0]), float(v[1]))
    else:
        raise InputError(f"matrix entry must be a number or [re, im] pair, got {v!r}")
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise InputError("matrix entries must be finite")
    return z


def doc_to_matrix(doc) -> np.ndarray:
    if not isinstance(doc, dict) or not {"rows", "cols", "data"} <= set(doc):
        raise InputError("matrix document needs keys 'rows', 'cols', 'data'")
    rows, cols, data = doc["rows"], doc["cols"], doc["data"]
    if not (isinstance(rows, int) and isinstance(cols, int)) or rows < 0 or cols < 0:
        raise InputError("'rows' and 'cols' must be nonnegative integers")
    if not isinstance(data, list) or len(data) != rows * cols:
        raise InputError(f"'data' must hold rows*cols = {rows * cols} entries")
    vals = np.array([_entry(v) for v in data], dtype=complex)
    return vals.reshape(rows, cols)


def read_matrix(path) -> np.ndarray:
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh, parse_constant=_reject_constant)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: malformed JSON ({exc.msg} at line {exc.lineno})") from None
    try:
        return doc_to_matrix(doc)
    except InputError as exc:
        raise InputError(f"{path}: {exc}") from None


def _reject_constant(name):
    raise InputError(f"non-finite constant {name} in matrix file")


def write_matrix(path, M) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(matrix_to_doc(M)) + "\n")
