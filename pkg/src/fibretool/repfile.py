"""Text files for representations.

A rep file is a JSON object::

    {
      "format": "fibretool-rep",
      "version": 1,
      "kind": "G",
      "n": 6,
      "matrices": [[a, b, c, d], ...],
      "metadata": {...}
    }

Matrices are sign-canonicalized on save and written with the shortest
round-tripping decimal form, so loading is lossless and saving a loaded
canonical file reproduces it byte for byte. Embedded 3x3 representations use
``"format": "fibretool-embedded"`` and store each matrix as three rows of
``[re, im]`` pairs.
"""

from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np

from .cxhyp import EmbeddedRep
from .geom2 import GeometryError, ProjMatrix
from .groups import Presentation, Representation

REP_FORMAT = "fibretool-rep"
EMBEDDED_FORMAT = "fibretool-embedded"
VERSION = 1


class RepFileError(ValueError):
    pass


def _header(kind: str, n: int, fmt: str) -> dict:
    return {"format": fmt, "version": VERSION, "kind": kind, "n": n}


def rep_to_text(rep: Representation, metadata: dict | None = None) -> str:
    obj = _header(rep.kind, rep.n, REP_FORMAT)
    obj["matrices"] = [list(m.canonical().entries()) for m in rep.images]
    obj["metadata"] = metadata or {}
    return _format(obj)


def _format(obj: dict) -> str:
    """JSON with each matrix on its own line."""
    head = {k: v for k, v in obj.items() if k != "matrices"}
    lines = ["{"]
    for k in ("format", "version", "kind", "n"):
        lines.append(f" {json.dumps(k)}: {json.dumps(head[k])},")
    lines.append(' "matrices": [')
    rows = [json.dumps(m, allow_nan=False) for m in obj["matrices"]]
    lines += [f"  {r}," for r in rows[:-1]] + [f"  {rows[-1]}"]
    lines.append(" ],")
    lines.append(f' "metadata": {json.dumps(head["metadata"], sort_keys=True, allow_nan=False)}')
    lines.append("}")
    return "\n".join(lines) + "\n"


def save_rep(rep: Representation, path, metadata: dict | None = None) -> None:
    Path(path).write_text(rep_to_text(rep, metadata), encoding="utf-8")


def _parse(text: str, fmt: str, where: str) -> dict:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise RepFileError(f"{where}: line {exc.lineno}: {exc.msg}") from exc
    if not isinstance(obj, dict):
        raise RepFileError(f"{where}: top level must be an object")
    if obj.get("format") != fmt:
        raise RepFileError(f"{where}: field 'format' must be {fmt!r}, got {obj.get('format')!r}")
    if obj.get("version") != VERSION:
        raise RepFileError(f"{where}: unsupported version {obj.get('version')!r} (expected {VERSION})")
    missing = [k for k in ("kind", "n", "matrices") if k not in obj]
    if missing:
        raise RepFileError(f"{where}: missing field(s) {', '.join(missing)}")
    try:
        Presentation(obj["kind"], obj["n"])
    except (ValueError, TypeError) as exc:
        raise RepFileError(f"{where}: fields 'kind'/'n': {exc}") from exc
    if not isinstance(obj["matrices"], list):
        raise RepFileError(f"{where}: field 'matrices' must be a list")
    meta = obj.get("metadata", {})
    if not isinstance(meta, dict):
        raise RepFileError(f"{where}: field 'metadata' must be an object")
    return obj


def _real(x, where: str) -> float:
    if isinstance(x, bool) or not isinstance(x, (int, float)) or not math.isfinite(x):
        raise RepFileError(f"{where}: expected a finite number, got {x!r}")
    return float(x)


def rep_from_text(text: str, where: str = "<text>") -> tuple[Representation, dict]:
    obj = _parse(text, REP_FORMAT, where)
    pres = Presentation(obj["kind"], obj["n"])
    mats = []
    for k, row in enumerate(obj["matrices"], 1):
        if not isinstance(row, list) or len(row) != 4:
            raise RepFileError(f"{where}: matrices[{k}] must hold 4 numbers")
        vals = [_real(x, f"{where}: matrices[{k}]") for x in row]
        try:
            mats.append(ProjMatrix.raw(*vals))
        except GeometryError as exc:
            raise RepFileError(f"{where}: matrices[{k}]: {exc}") from exc
    try:
        rep = Representation(pres, mats)
    except ValueError as exc:
        raise RepFileError(f"{where}: {exc}") from exc
    return rep, obj.get("metadata", {})


def load_rep(path) -> tuple[Representation, dict]:
    return rep_from_text(_read(path), str(path))


def _read(path) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise RepFileError(f"{path}: {exc}") from exc


def embedded_to_text(rep3: EmbeddedRep, metadata: dict | None = None) -> str:
    obj = _header(rep3.kind, rep3.n, EMBEDDED_FORMAT)
    obj["matrices"] = [
        [[[float(z.real), float(z.imag)] for z in row] for row in np.asarray(m)] for m in rep3.images
    ]
    obj["metadata"] = metadata or {}
    return _format(obj)


def save_embedded(rep3: EmbeddedRep, path, metadata: dict | None = None) -> None:
    Path(path).write_text(embedded_to_text(rep3, metadata), encoding="utf-8")


def embedded_from_text(text: str, where: str = "<text>") -> tuple[EmbeddedRep, dict]:
    obj = _parse(text, EMBEDDED_FORMAT, where)
    pres = Presentation(obj["kind"], obj["n"])
    if len(obj["matrices"]) != pres.ngens:
        raise RepFileError(f"{where}: expected {pres.ngens} matrices, got {len(obj['matrices'])}")
    mats = []
    for k, m in enumerate(obj["matrices"], 1):
        tag = f"{where}: matrices[{k}]"
        if not (isinstance(m, list) and len(m) == 3 and all(isinstance(r, list) and len(r) == 3 for r in m)):
            raise RepFileError(f"{tag} must be 3 rows of 3 [re, im] pairs")
        arr = np.zeros((3, 3), dtype=complex)
        for i, row in enumerate(m):
            for j, z in enumerate(row):
                if not (isinstance(z, list) and len(z) == 2):
                    raise RepFileError(f"{tag}[{i + 1}][{j + 1}] must be an [re, im] pair")
                arr[i, j] = complex(_real(z[0], tag), _real(z[1], tag))
        if abs(np.linalg.det(arr)) < 1e-12:
            raise RepFileError(f"{tag} is singular")
        mats.append(arr)
    return EmbeddedRep(pres, tuple(mats)), obj.get("metadata", {})


def load_embedded(path) -> tuple[EmbeddedRep, dict]:
    return embedded_from_text(_read(path), str(path))
