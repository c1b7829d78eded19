"""Canonical JSON text used for matrix files, witnesses and reports.

Floats are written with 17 significant digits so every double survives a
round trip exactly; keys keep insertion order, which callers fix, so equal
inputs always produce equal bytes.
"""

import json
import math

import numpy as np

FORMAT_MATRIX = "matpersp.matrix/1"


def _float(x):
    x = float(x)
    if not math.isfinite(x):
        raise ValueError(f"non-finite value {x!r} cannot be serialized")
    if x == 0.0:
        return "0.0"
    text = format(x, ".17g")
    if "e" not in text and "." not in text and "n" not in text:
        text += ".0"
    return text


def _scalar(obj):
    if obj is None:
        return "null"
    if obj is True:
        return "true"
    if obj is False:
        return "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _float(obj)
    if isinstance(obj, str):
        return json.dumps(obj, ensure_ascii=False)
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _is_flat(seq):
    return all(not isinstance(x, (list, tuple, dict)) for x in seq)


def _dump(obj, indent, level):
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{_scalar(str(k))}: {_dump(v, indent, level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        # rows of [re, im] pairs stay on one line to keep matrices readable
        if _is_flat(obj) or all(isinstance(x, (list, tuple)) and _is_flat(x) for x in obj):
            return "[" + ", ".join(_dump(x, indent, level + 1) for x in obj) + "]"
        items = [pad + _dump(x, indent, level + 1) for x in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    return _scalar(obj)


def dumps(obj, indent=2):
    """Serialize ``obj`` (dicts, lists, str, int, float, bool, None) canonically."""
    return _dump(obj, indent, 0) + "\n"


def matrix_to_dict(M, kind="general"):
    M = np.asarray(M, dtype=np.complex128)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {M.shape}")
    entries = [[[float(z.real), float(z.imag)] for z in row] for row in M]
    return {"format": FORMAT_MATRIX, "kind": kind, "n": int(M.shape[0]), "entries": entries}


def matrix_from_dict(d):
    """Parse the ``entries`` of a matrix dict; kind validation is up to the caller."""
    try:
        n = int(d["n"])
        entries = d["entries"]
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed matrix object: missing {exc}") from None
    M = np.zeros((n, n), dtype=np.complex128)
    if len(entries) != n or any(len(row) != n for row in entries):
        raise ValueError(f"matrix entries do not form a {n}x{n} array")
    for i, row in enumerate(entries):
        for j, pair in enumerate(row):
            if len(pair) != 2:
                raise ValueError(f"entry ({i},{j}) is not a [re, im] pair")
            M[i, j] = complex(float(pair[0]), float(pair[1]))
    if not np.all(np.isfinite(M)):
        raise ValueError("matrix contains non-finite entries")
    return M
