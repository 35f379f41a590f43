"""JSON file formats for matrices and states.

Matrix files: ``{"d": N, "rows": [[[re, im], ...], ...]}``.
State files:  ``{"d": N, "amps": [[re, im], ...]}``.

Numbers are written in scientific notation with 17 significant digits, which
round-trips IEEE doubles exactly.  A top-level ``"meta"`` object is permitted
(and produced by the CLI) but ignored on input.
"""

from __future__ import annotations

import json

import numpy as np

from .errors import ParseError


def format_float(x: float) -> str:
    return format(float(x), ".16e")


def _pair(z: complex) -> str:
    return f"[{format_float(z.real)},{format_float(z.imag)}]"


def matrix_document(u: np.ndarray, meta: dict | None = None) -> str:
    d = u.shape[0]
    rows = ",\n    ".join("[" + ",".join(_pair(z) for z in row) + "]" for row in u)
    parts = []
    if meta is not None:
        parts.append(f'"meta": {json.dumps(meta, sort_keys=True)}')
    parts.append(f'"d": {d}')
    parts.append(f'"rows": [\n    {rows}\n  ]')
    return "{" + ", ".join(parts) + "}\n"


def state_document(amps: np.ndarray, meta: dict | None = None) -> str:
    body = ",".join(_pair(z) for z in amps)
    parts = []
    if meta is not None:
        parts.append(f'"meta": {json.dumps(meta, sort_keys=True)}')
    parts.append(f'"d": {len(amps)}')
    parts.append(f'"amps": [{body}]')
    return "{" + ", ".join(parts) + "}\n"


def write_matrix(path, u: np.ndarray, meta: dict | None = None) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(matrix_document(u, meta))


def write_state(path, amps: np.ndarray, meta: dict | None = None) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(state_document(amps, meta))


def _parse_pair(entry, what: str) -> complex:
    if (
        not isinstance(entry, (list, tuple))
        or len(entry) != 2
        or not all(isinstance(v, (int, float)) for v in entry)
    ):
        raise ParseError(f"{what} must be a [re, im] pair, got {entry!r}")
    return complex(entry[0], entry[1])


def _load_json(path) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON in {path}: {exc}") from exc
    if not isinstance(doc, dict):
        raise ParseError(f"{path}: top-level JSON value must be an object")
    return doc


def read_matrix(path) -> tuple[int, np.ndarray]:
    doc = _load_json(path)
    if "d" not in doc or "rows" not in doc:
        raise ParseError(f"{path}: matrix file requires 'd' and 'rows' fields")
    d = doc["d"]
    rows = doc["rows"]
    if not isinstance(d, int) or d < 1:
        raise ParseError(f"{path}: 'd' must be a positive integer")
    if not isinstance(rows, list) or len(rows) != d:
        raise ParseError(f"{path}: expected {d} rows, got {len(rows) if isinstance(rows, list) else type(rows)}")
    u = np.zeros((d, d), dtype=complex)
    for i, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != d:
            raise ParseError(f"{path}: row {i} must have exactly {d} entries")
        for j, entry in enumerate(row):
            u[i, j] = _parse_pair(entry, f"row {i} entry {j}")
    return d, u


def read_state(path) -> tuple[int, np.ndarray]:
    doc = _load_json(path)
    if "d" not in doc or "amps" not in doc:
        raise ParseError(f"{path}: state file requires 'd' and 'amps' fields")
    d = doc["d"]
    amps = doc["amps"]
    if not isinstance(d, int) or d < 1:
        raise ParseError(f"{path}: 'd' must be a positive integer")
    if not isinstance(amps, list) or len(amps) != d:
        raise ParseError(f"{path}: expected {d} amplitudes")
    out = np.zeros(d, dtype=complex)
    for i, entry in enumerate(amps):
        out[i] = _parse_pair(entry, f"amplitude {i}")
    return d, out
