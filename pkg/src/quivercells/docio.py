"""Document formats: JSON-syntax files carrying one typed value each.

Field elements travel as strings ("7", "3/4", residues "5" under a prime
field header), so serialize-then-parse is the identity on canonical forms.
Schema violations report the offending path; invariant violations name the
invariant (matrix shapes, morphism equations, primality).
"""

from __future__ import annotations

import hashlib
import json
from typing import Dict, List, Tuple

from .exactfield import ExactMatrix, FieldSpec
from .quivercore import Quiver, cover_window
from .repspace import RElement, Representation
from .cellkit import Cell, Mosaic
from .toruscells import CoverRepresentation

SCHEMA_VERSION = "1"
KINDS = ("quiver", "representation", "relement", "cell", "mosaic", "cover_rep", "report")


class DocumentError(Exception):
    def __init__(self, message: str, path: str = "$"):
        super().__init__(f"{path}: {message}")
        self.path = path


# -- field ------------------------------------------------------------------


def field_payload(field: FieldSpec) -> dict:
    if field.is_prime_field:
        return {"kind": "PrimeField", "p": field.p}
    return {"kind": "Rationals"}


def field_from(payload, path: str) -> FieldSpec:
    if not isinstance(payload, dict) or "kind" not in payload:
        raise DocumentError("field must be an object with a 'kind'", path)
    try:
        if payload["kind"] == "PrimeField":
            return FieldSpec.prime(int(payload["p"]))
        if payload["kind"] == "Rationals":
            return FieldSpec.rationals()
    except (KeyError, ValueError, TypeError) as exc:
        raise DocumentError(str(exc), path)
    raise DocumentError(f"unknown field kind {payload['kind']!r}", path)


def parse_field_flag(text: str) -> FieldSpec:
    """CLI shorthand: 'Q' or 'Fp:<p>'."""
    if text == "Q":
        return FieldSpec.rationals()
    if text.startswith("Fp:"):
        return FieldSpec.prime(int(text[3:]))
    raise DocumentError(f"field flag must be Q or Fp:<p>, got {text!r}")


# -- matrices ---------------------------------------------------------------


def matrix_payload(m: ExactMatrix) -> List[List[str]]:
    return [[m.field.to_str(m.at(i, j)) for j in range(m.cols)] for i in range(m.rows)]


def matrix_from(payload, field: FieldSpec, rows: int, cols: int, path: str) -> ExactMatrix:
    if not isinstance(payload, list) or len(payload) != rows:
        raise DocumentError(f"expected {rows} rows", path)
    out = ExactMatrix.zeros(field, rows, cols)
    for i, row in enumerate(payload):
        if not isinstance(row, list) or len(row) != cols:
            raise DocumentError(f"expected {cols} entries", f"{path}[{i}]")
        for j, x in enumerate(row):
            try:
                out.put(i, j, field.of(x))
            except (ValueError, ZeroDivisionError) as exc:
                raise DocumentError(f"bad field element {x!r}: {exc}", f"{path}[{i}][{j}]")
    return out


# -- quiver -----------------------------------------------------------------


def quiver_payload(q: Quiver) -> dict:
    return {"vertices": list(q.vertices),
            "arrows": [{"id": a, "src": s, "tgt": t} for a, s, t in q.arrows]}


def quiver_from(payload, path: str) -> Quiver:
    try:
        arrows = [(a["id"], a["src"], a["tgt"]) for a in payload["arrows"]]
        return Quiver(payload["vertices"], arrows)
    except (KeyError, TypeError, ValueError) as exc:
        raise DocumentError(f"bad quiver: {exc}", path)


# -- representation -----------------------------------------------------------


def representation_payload(rep: Representation) -> dict:
    return {"quiver": quiver_payload(rep.quiver),
            "field": field_payload(rep.field),
            "dims": dict(rep.dims),
            "matrices": {a: matrix_payload(rep.matrices[a]) for a in rep.quiver.arrow_ids}}


def representation_from(payload, path: str) -> Representation:
    q = quiver_from(payload.get("quiver"), f"{path}.quiver")
    field = field_from(payload.get("field"), f"{path}.field")
    dims = payload.get("dims")
    if not isinstance(dims, dict):
        raise DocumentError("dims must be an object", f"{path}.dims")
    dims = {str(k): int(v) for k, v in dims.items()}
    mats = {}
    for a, s, t in q.arrows:
        mp = payload.get("matrices", {}).get(a)
        if mp is None:
            continue
        mats[a] = matrix_from(mp, field, dims.get(t, 0), dims.get(s, 0),
                              f"{path}.matrices.{a}")
    try:
        return Representation(q, field, dims, mats)
    except ValueError as exc:
        raise DocumentError(str(exc), path)


# -- relement -----------------------------------------------------------------


def relement_payload(el: RElement) -> dict:
    blocks = {}
    for a in el.quiver.arrow_ids:
        if not el.blocks[a].is_zero():
            blocks[a] = matrix_payload(el.blocks[a])
    return {"quiver": quiver_payload(el.quiver),
            "field": field_payload(el.field),
            "source_dims": dict(el.source_dims),
            "target_dims": dict(el.target_dims),
            "blocks": blocks}


def relement_from(payload, path: str) -> RElement:
    q = quiver_from(payload.get("quiver"), f"{path}.quiver")
    field = field_from(payload.get("field"), f"{path}.field")
    sdims = {str(k): int(v) for k, v in payload.get("source_dims", {}).items()}
    tdims = {str(k): int(v) for k, v in payload.get("target_dims", {}).items()}
    blocks = {}
    for a, s, t in q.arrows:
        bp = payload.get("blocks", {}).get(a)
        if bp is None:
            continue
        blocks[a] = matrix_from(bp, field, tdims.get(t, 0), sdims.get(s, 0),
                                f"{path}.blocks.{a}")
    try:
        return RElement(q, field, sdims, tdims, blocks)
    except ValueError as exc:
        raise DocumentError(str(exc), path)


# -- cell / mosaic -------------------------------------------------------------


def cell_payload(cell: Cell) -> dict:
    return {"base": representation_payload(cell.base),
            "params": [relement_payload(p) for p in cell.params],
            "flags": dict(cell.flags),
            "provenance": cell.provenance}


def cell_from(payload, path: str) -> Cell:
    base = representation_from(payload.get("base"), f"{path}.base")
    params = [relement_from(p, f"{path}.params[{i}]")
              for i, p in enumerate(payload.get("params", []))]
    try:
        return Cell(base, params, flags=payload.get("flags"),
                    provenance=payload.get("provenance"))
    except ValueError as exc:
        raise DocumentError(str(exc), path)


def mosaic_payload(mosaic: Mosaic) -> dict:
    return {"dimvector": dict(mosaic.dimvector),
            "cells": [cell_payload(c) for c in mosaic.cells],
            "provenance": mosaic.provenance}


def mosaic_from(payload, path: str) -> Mosaic:
    dimvec = {str(k): int(v) for k, v in payload.get("dimvector", {}).items()}
    cells = [cell_from(c, f"{path}.cells[{i}]")
             for i, c in enumerate(payload.get("cells", []))]
    try:
        return Mosaic(dimvec, cells, provenance=payload.get("provenance"))
    except ValueError as exc:
        raise DocumentError(str(exc), path)


# -- cover representation ------------------------------------------------------


def _chi_payload(chi: Tuple[int, ...], q: Quiver) -> Dict[str, int]:
    return {a: chi[i] for a, i in q.arrow_index.items() if chi[i] != 0}


def _chi_from(payload, q: Quiver, path: str) -> Tuple[int, ...]:
    if not isinstance(payload, dict):
        raise DocumentError("character must map arrows to integers", path)
    chi = [0] * len(q.arrows)
    for a, v in payload.items():
        if a not in q.arrow_index:
            raise DocumentError(f"unknown arrow {a!r} in character", path)
        chi[q.arrow_index[a]] = int(v)
    return tuple(chi)


def cover_rep_payload(cr: CoverRepresentation) -> dict:
    q = cr.window.base
    fibers = [{"vertex": v, "chi": _chi_payload(chi, q), "dim": d}
              for (v, chi), d in sorted(cr.fibers.items(),
                                        key=lambda kv: (q.vertex_index[kv[0][0]], kv[0][1]))]
    mats = [{"arrow": a, "chi": _chi_payload(chi, q),
             "entries": matrix_payload(m)}
            for (a, chi), m in sorted(cr.mats.items(),
                                      key=lambda kv: (q.arrow_index[kv[0][0]], kv[0][1]))]
    return {"base_quiver": quiver_payload(q),
            "field": field_payload(cr.field),
            "gamma": dict(cr.gamma),
            "radius": cr.window.radius,
            "basis_order": cr.basis_order,
            "fibers": fibers,
            "matrices": mats}


def cover_rep_from(payload, path: str) -> CoverRepresentation:
    q = quiver_from(payload.get("base_quiver"), f"{path}.base_quiver")
    field = field_from(payload.get("field"), f"{path}.field")
    gamma = {str(k): int(v) for k, v in payload.get("gamma", {}).items()}
    radius = int(payload.get("radius", 0))
    fibers = {}
    for i, f in enumerate(payload.get("fibers", [])):
        chi = _chi_from(f.get("chi", {}), q, f"{path}.fibers[{i}].chi")
        fibers[(str(f["vertex"]), chi)] = int(f["dim"])
    window_radius = max([radius] + [sum(abs(c) for c in chi) for (_, chi) in fibers])
    window = cover_window(q, window_radius)
    mats = {}
    for i, mp in enumerate(payload.get("matrices", [])):
        a = str(mp["arrow"])
        chi = _chi_from(mp.get("chi", {}), q, f"{path}.matrices[{i}].chi")
        s = (q.src[a], chi)
        from .quivercore import chi_shift
        t = (q.tgt[a], chi_shift(chi, q.arrow_index[a], +1))
        rows = fibers.get(t, 0)
        cols = fibers.get(s, 0)
        mats[(a, chi)] = matrix_from(mp.get("entries"), field, rows, cols,
                                     f"{path}.matrices[{i}].entries")
    try:
        return CoverRepresentation(window, field, fibers, mats, gamma,
                                   basis_order=payload.get("basis_order", "weight_asc"))
    except ValueError as exc:
        raise DocumentError(str(exc), path)


# -- document wrapper ----------------------------------------------------------

_TO_PAYLOAD = {
    Quiver: ("quiver", quiver_payload),
    Representation: ("representation", representation_payload),
    RElement: ("relement", relement_payload),
    Cell: ("cell", cell_payload),
    Mosaic: ("mosaic", mosaic_payload),
    CoverRepresentation: ("cover_rep", cover_rep_payload),
}

_FROM_PAYLOAD = {
    "quiver": quiver_from,
    "representation": representation_from,
    "relement": relement_from,
    "cell": cell_from,
    "mosaic": mosaic_from,
    "cover_rep": cover_rep_from,
}


def dumps(value) -> str:
    if isinstance(value, dict):
        kind, payload = "report", value
    else:
        for klass, (kind, fn) in _TO_PAYLOAD.items():
            if isinstance(value, klass):
                payload = fn(value)
                break
        else:
            raise DocumentError(f"cannot serialize {type(value).__name__}")
    doc = {"schema_version": SCHEMA_VERSION, "kind": kind, "payload": payload}
    return json.dumps(doc, indent=2, sort_keys=True)


def loads(text: str):
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"not valid document syntax: {exc}")
    if not isinstance(doc, dict):
        raise DocumentError("document must be an object")
    if doc.get("schema_version") != SCHEMA_VERSION:
        raise DocumentError(f"unsupported schema version {doc.get('schema_version')!r}")
    kind = doc.get("kind")
    if kind == "report":
        return kind, doc.get("payload")
    if kind not in _FROM_PAYLOAD:
        raise DocumentError(f"unknown document kind {kind!r}")
    return kind, _FROM_PAYLOAD[kind](doc.get("payload"), "$.payload")


def load_path(path: str, expect: str):
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    kind, value = loads(text)
    if kind != expect:
        raise DocumentError(f"expected a {expect} document, found {kind}")
    return value


def content_hash(*texts: str) -> str:
    h = hashlib.sha256()
    for t in texts:
        h.update(t.encode("utf-8"))
        h.update(b"\x00")
    return h.hexdigest()[:16]
