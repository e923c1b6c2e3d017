"""JSON file formats: states, channels, pure-state lists and reports.

Complex numbers are always ``[re, im]`` pairs. Basis indices in reports
are 1-based.
"""

from __future__ import annotations

import hashlib
import json
from functools import lru_cache
from importlib import resources

import jsonschema
import numpy as np

from .errors import DimensionMismatch, ValidationError

__all__ = [
    "FileFormatError",
    "load_schema",
    "encode_matrix",
    "decode_matrix",
    "encode_vector",
    "decode_vector",
    "parse_state_file",
    "parse_channel_file",
    "parse_pure_states_file",
    "state_document",
    "channel_document",
    "pure_states_document",
    "dumps",
    "digest",
]


class FileFormatError(ValidationError):
    kind = "FileFormatError"


@lru_cache(maxsize=None)
def load_schema(name: str) -> dict:
    text = resources.files("cohdistill.schemas").joinpath(f"{name}.schema.json").read_text(encoding="utf-8")
    return json.loads(text)


def _check(doc, name):
    try:
        jsonschema.validate(doc, load_schema(name))
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise FileFormatError(f"{name} file invalid at {where}: {exc.message}") from None


def _loads(text):
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise FileFormatError(f"malformed JSON: {exc}") from None


def encode_matrix(m) -> list:
    m = np.asarray(m, dtype=np.complex128)
    return [[[float(z.real), float(z.imag)] for z in row] for row in m]


def decode_matrix(rows) -> np.ndarray:
    widths = {len(r) for r in rows}
    if len(widths) != 1:
        raise FileFormatError("matrix rows have unequal lengths")
    a = np.array(rows, dtype=np.float64)
    return a[..., 0] + 1j * a[..., 1]


def encode_vector(v) -> list:
    return [[float(z.real), float(z.imag)] for z in np.asarray(v, dtype=np.complex128)]


def decode_vector(entries) -> np.ndarray:
    a = np.array(entries, dtype=np.float64)
    return a[:, 0] + 1j * a[:, 1]


def parse_state_file(text) -> np.ndarray:
    """Raw matrix from a StateFile; validation as a density matrix is left to the caller."""
    doc = _loads(text)
    _check(doc, "state")
    m = decode_matrix(doc["matrix"])
    if m.shape != (doc["dim"], doc["dim"]):
        raise DimensionMismatch(f"declared dim {doc['dim']} but matrix has shape {m.shape}")
    return m


def parse_channel_file(text) -> list:
    doc = _loads(text)
    _check(doc, "channel")
    return [decode_matrix(k) for k in doc["kraus"]]


def parse_pure_states_file(text) -> list:
    doc = _loads(text)
    _check(doc, "pure_states")
    out = [decode_vector(s) for s in doc["states"]]
    for n, v in enumerate(out):
        if v.shape[0] != doc["dim"]:
            raise DimensionMismatch(f"state {n + 1} has {v.shape[0]} amplitudes, declared dim {doc['dim']}")
    return out


def state_document(m) -> dict:
    m = np.asarray(m)
    return {"dim": int(m.shape[0]), "matrix": encode_matrix(m)}


def channel_document(ks) -> dict:
    return {"kraus": [encode_matrix(k) for k in ks]}


def pure_states_document(vectors) -> dict:
    vectors = [np.asarray(v) for v in vectors]
    return {"dim": int(vectors[0].shape[0]), "states": [encode_vector(v) for v in vectors]}


def dumps(doc) -> str:
    """Canonical serialization: sorted keys, shortest round-trip floats, trailing newline."""
    return json.dumps(doc, sort_keys=True, indent=2, allow_nan=False) + "\n"


def digest(data: bytes) -> str:
    return "sha256:" + hashlib.sha256(data).hexdigest()
