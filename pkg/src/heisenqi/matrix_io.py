"""JSON matrix documents: ``{"dim": d, "entries": [[re, im], ...]}`` in row-major order.

``entries`` may also be given as ``dim`` rows of ``[re, im]`` pairs.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np


class MatrixFormatError(ValueError):
    pass


def matrix_to_doc(m) -> dict:
    m = np.asarray(m, dtype=complex)
    flat = m.reshape(-1)
    return {"dim": int(m.shape[0]), "entries": [[_clean(z.real), _clean(z.imag)] for z in flat]}


def _clean(x: float) -> float:
    # fixed rounding keeps reports byte-stable across platforms
    v = round(float(x), 15)
    return 0.0 if v == 0 else v


def matrix_from_doc(doc) -> np.ndarray:
    try:
        dim = int(doc["dim"])
        entries = doc["entries"]
    except (KeyError, TypeError, ValueError) as exc:
        raise MatrixFormatError(f"matrix document needs 'dim' and 'entries': {exc}") from None
    if dim < 1:
        raise MatrixFormatError("dim must be positive")
    if len(entries) == dim and dim > 1 and all(
        isinstance(r, list) and len(r) == dim and all(isinstance(e, list) for e in r) for r in entries
    ):
        entries = [e for row in entries for e in row]
    if len(entries) != dim * dim:
        raise MatrixFormatError(f"expected {dim * dim} entries, got {len(entries)}")
    try:
        vals = [complex(float(re), float(im)) for re, im in entries]
    except (TypeError, ValueError):
        raise MatrixFormatError("each entry must be a [re, im] pair of numbers") from None
    m = np.array(vals, dtype=complex).reshape(dim, dim)
    if not np.all(np.isfinite(m)):
        raise MatrixFormatError("matrix has non-finite entries")
    return m


def load_matrix(path) -> np.ndarray:
    try:
        doc = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise MatrixFormatError(f"{path}: not valid JSON ({exc})") from None
    return matrix_from_doc(doc)


def save_matrix(path, m) -> None:
    Path(path).write_text(json.dumps(matrix_to_doc(m), indent=1) + "\n")
