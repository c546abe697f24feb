"""On-disk formats: frame files (JSON), coefficient files (CSV), and
sampling scheme files (JSON).

Floats are serialized with Python's shortest round-trip representation,
so parse -> serialize -> parse is the identity on every value and
repeated runs produce byte-identical files.  Indices in files are always
1-based.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path
from typing import Mapping, Optional, Union

import numpy as np

from .frames import Frame
from .sampling import KIND_CUSTOM, KIND_SHANNON, KIND_TRIG, SamplingScheme

__all__ = [
    "SCHEMA_VERSION",
    "write_frame",
    "read_frame",
    "write_coefficients",
    "read_coefficients",
    "write_scheme",
    "read_scheme",
]

SCHEMA_VERSION = 1

PathLike = Union[str, Path]


def _pairs(column: np.ndarray) -> list[list[float]]:
    return [[float(z.real), float(z.imag)] for z in column]


def write_frame(path: PathLike, frame: Frame, *, field: str = "complex",
                role: Optional[str] = None) -> None:
    """Write a frame file.  ``field='real'`` requires (and records) that
    every coordinate has zero imaginary part."""
    if field not in ("real", "complex"):
        raise ValueError(f"field must be 'real' or 'complex', got {field!r}")
    if field == "real" and np.any(frame.coords.imag != 0.0):
        raise ValueError("field='real' but the frame has complex coordinates")
    if role not in (None, "synthesis", "analysis"):
        raise ValueError(f"role must be 'synthesis' or 'analysis', got {role!r}")
    doc = {
        "schema_version": SCHEMA_VERSION,
        "field": field,
        "dim": frame.dim,
        "vectors": [_pairs(frame.coords[:, j]) for j in range(frame.size)],
    }
    if role is not None:
        doc["role"] = role
    Path(path).write_text(json.dumps(doc, indent=2) + "\n")


def read_frame(path: PathLike) -> tuple[Frame, dict]:
    """Read a frame file, returning the frame and its metadata."""
    doc = json.loads(Path(path).read_text())
    for key in ("schema_version", "field", "dim", "vectors"):
        if key not in doc:
            raise ValueError(f"frame file {path} is missing key {key!r}")
    if doc["schema_version"] != SCHEMA_VERSION:
        raise ValueError(
            f"unsupported schema version {doc['schema_version']} in {path}"
        )
    dim = int(doc["dim"])
    vectors = doc["vectors"]
    if not vectors:
        raise ValueError(f"frame file {path} has no vectors")
    cols = []
    for row in vectors:
        if len(row) != dim:
            raise ValueError(
                f"frame file {path}: vector of length {len(row)}, expected {dim}"
            )
        cols.append([complex(re, im) for re, im in row])
    frame = Frame(np.array(cols, dtype=np.complex128).T)
    if doc["field"] == "real" and np.any(frame.coords.imag != 0.0):
        raise ValueError(f"frame file {path} declares real field but has "
                         "nonzero imaginary parts")
    meta = {"field": doc["field"], "role": doc.get("role")}
    return frame, meta


def write_coefficients(path: PathLike, values: Mapping[int, complex]) -> None:
    """Write a coefficient CSV with header index,re,im; one row per known
    coefficient.  Indices absent from ``values`` denote erasures."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["index", "re", "im"])
        for index in sorted(values):
            z = complex(values[index])
            writer.writerow([index, repr(z.real), repr(z.imag)])


def read_coefficients(path: PathLike) -> dict[int, complex]:
    """Read a coefficient CSV into a 1-based index -> value mapping."""
    out: dict[int, complex] = {}
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or \
                [f.strip() for f in reader.fieldnames] != ["index", "re", "im"]:
            raise ValueError(
                f"coefficient file {path} must have header index,re,im"
            )
        for row in reader:
            index = int(row["index"])
            if index < 1:
                raise ValueError(f"coefficient file {path}: index {index} < 1")
            if index in out:
                raise ValueError(f"coefficient file {path}: duplicate index {index}")
            out[index] = complex(float(row["re"]), float(row["im"]))
    return out


def write_scheme(path: PathLike, scheme: SamplingScheme) -> None:
    doc = {
        "schema_version": SCHEMA_VERSION,
        "kind": scheme.kind,
        "space_dim": scheme.space_dim,
        "sample_weight": float(scheme.sample_weight),
        "points": [float(t) for t in scheme.points],
        "value_table": [_pairs(row) for row in scheme.value_table],
    }
    Path(path).write_text(json.dumps(doc, indent=2) + "\n")


def read_scheme(path: PathLike) -> SamplingScheme:
    doc = json.loads(Path(path).read_text())
    for key in ("kind", "points", "value_table"):
        if key not in doc:
            raise ValueError(f"scheme file {path} is missing key {key!r}")
    points = np.array(doc["points"], dtype=np.float64)
    table = np.array(
        [[complex(re, im) for re, im in row] for row in doc["value_table"]],
        dtype=np.complex128,
    )
    kind = doc["kind"]
    if kind not in (KIND_TRIG, KIND_SHANNON, KIND_CUSTOM):
        kind = KIND_CUSTOM
    return SamplingScheme(
        kind=kind,
        points=points,
        value_table=table,
        space_dim=int(doc.get("space_dim", points.size)),
        sample_weight=float(doc.get("sample_weight", 1.0)),
        synthesis_coordinates=None,
    )
