"""Canonical JSON encoding of matrices and small file helpers.

A matrix is ``{"n": n, "re": [[...]], "im": [[...]]}`` with row-major
``n x n`` arrays of finite doubles.  Floats go through ``json``'s shortest
round-trip repr, so dumping and reloading is exact.
"""
import json
import math
import sys

import numpy as np

from .errors import MatrixFormatError


def matrix_to_json(m) -> dict:
    m = np.asarray(m, dtype=complex)
    return {"n": int(m.shape[0]),
            "re": [[float(x) + 0.0 for x in row] for row in m.real],
            "im": [[float(x) + 0.0 for x in row] for row in m.imag]}


def _rows(obj, key, n):
    rows = obj.get(key)
    if not isinstance(rows, list) or len(rows) != n:
        raise MatrixFormatError(f"'{key}' must be a list of {n} rows")
    out = []
    for row in rows:
        if not isinstance(row, list) or len(row) != n:
            raise MatrixFormatError(f"ragged '{key}' array: expected {n} columns")
        vals = []
        for x in row:
            if isinstance(x, bool) or not isinstance(x, (int, float)):
                raise MatrixFormatError(f"non-numeric entry {x!r} in '{key}'")
            if not math.isfinite(x):
                raise MatrixFormatError(f"non-finite entry in '{key}'")
            vals.append(float(x))
        out.append(vals)
    return np.array(out)


def matrix_from_json(obj) -> np.ndarray:
    if not isinstance(obj, dict):
        raise MatrixFormatError("matrix JSON must be an object")
    n = obj.get("n")
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise MatrixFormatError("'n' must be a positive integer")
    re = _rows(obj, "re", n)
    im = _rows(obj, "im", n) if "im" in obj else np.zeros((n, n))
    return re + 1j * im


def complex_list(values) -> list:
    """Encode a complex vector as ``[[re, im], ...]``."""
    return [[float(np.real(v)), float(np.imag(v))] for v in values]


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, allow_nan=False)


def _reject_constant(token):
    raise MatrixFormatError(f"non-finite JSON constant {token}")


def load(path):
    """Read JSON from *path* (``'-'`` for stdin)."""
    if path == "-":
        return json.load(sys.stdin, parse_constant=_reject_constant)
    with open(path) as fh:
        return json.load(fh, parse_constant=_reject_constant)


def dump(obj, path="-"):
    text = dumps(obj) + "\n"
    if path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)
