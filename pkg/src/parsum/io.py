"""JSON encodings for matrices, algebras and functionals.

Matrix schema: ``{"rows": n, "cols": m, "data": [[re, im], ...]}`` in row-major
order.  Python's float repr is shortest-round-trip, so finite doubles survive
encode/decode bit for bit.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np


class SchemaError(ValueError):
    """A JSON document does not follow the expected schema."""


def _pair(z) -> list[float]:
    z = complex(z)
    return [float(z.real), float(z.imag)]


def _complex(pair) -> complex:
    if isinstance(pair, (int, float)):
        return complex(pair)
    if not (isinstance(pair, (list, tuple)) and len(pair) == 2):
        raise SchemaError(f"expected a [re, im] pair, got {pair!r}")
    try:
        return complex(float(pair[0]), float(pair[1]))
    except (TypeError, ValueError) as exc:
        raise SchemaError(f"non-numeric entry {pair!r}") from exc


def matrix_to_json(M) -> dict:
    M = np.asarray(M, dtype=complex)
    if M.ndim == 1:
        M = M[:, None]
    rows, cols = M.shape
    return {"rows": rows, "cols": cols, "data": [_pair(z) for z in M.ravel()]}


def matrix_from_json(doc: dict) -> np.ndarray:
    try:
        rows, cols, data = int(doc["rows"]), int(doc["cols"]), doc["data"]
    except (KeyError, TypeError, ValueError) as exc:
        raise SchemaError(f"malformed matrix document: {exc}") from exc
    if rows < 0 or cols < 0 or len(data) != rows * cols:
        raise SchemaError(f"{rows}x{cols} matrix needs {rows * cols} entries, got {len(data)}")
    M = np.array([_complex(p) for p in data], dtype=complex).reshape(rows, cols)
    if not np.all(np.isfinite(M)):
        raise SchemaError("matrix entries must be finite")
    return M


def vector_to_json(v) -> list[list[float]]:
    return [_pair(z) for z in np.asarray(v, dtype=complex).ravel()]


def vector_from_json(data) -> np.ndarray:
    if not isinstance(data, list):
        raise SchemaError(f"expected a list of [re, im] pairs, got {type(data).__name__}")
    return np.array([_complex(p) for p in data], dtype=complex)


def load_json(path) -> dict:
    with open(path) as fp:
        return json.load(fp)


def dump_json(doc, path=None) -> str:
    text = json.dumps(doc, indent=2, sort_keys=True)
    if path is not None:
        Path(path).write_text(text + "\n")
    return text


def load_matrix(path) -> np.ndarray:
    return matrix_from_json(load_json(path))


def save_matrix(M, path) -> None:
    dump_json(matrix_to_json(M), path)
