"""Input documents and report serialization.

One ingestion path: a JSON document ``{format_version, p, kind, payload}``
where ``kind`` is ``structure_constants``, ``quiver``, ``catalog`` or
``restricted_lie_fixture``.  Omitted products and brackets are zero.  Reports
are emitted as canonical JSON (sorted keys, no timestamps) so a fixed input
and seed reproduce byte-identical output.
"""

from __future__ import annotations

import json

import numpy as np

from .catalog import (
    elem_abelian,
    full_two_object,
    matrix_over,
    opposite,
    qci,
    truncated_poly,
)
from .errors import HochschildError, InputFormatError
from .fdcat import FDCategory
from .quiver import Arrow, QuiverPresentation, from_quiver
from .restricted import RestrictedLie

FORMAT_VERSION = 1


def _need(payload: dict, field: str, where: str):
    if field not in payload:
        raise InputFormatError(f"{where}.{field}", "missing required field")
    return payload[field]


def parse_document(doc: dict):
    """Parse a document into an FDCategory or a RestrictedLie."""
    if not isinstance(doc, dict):
        raise InputFormatError("$", "document must be a JSON object")
    version = _need(doc, "format_version", "$")
    if version != FORMAT_VERSION:
        raise InputFormatError("format_version", f"unsupported version {version!r}")
    p = _need(doc, "p", "$")
    if not isinstance(p, int):
        raise InputFormatError("p", "modulus must be an integer")
    kind = _need(doc, "kind", "$")
    payload = _need(doc, "payload", "$")
    if kind == "structure_constants":
        return _parse_structure_constants(p, payload)
    if kind == "quiver":
        return _parse_quiver(p, payload)
    if kind == "catalog":
        return _parse_catalog(p, payload)
    if kind == "restricted_lie_fixture":
        return _parse_restricted_lie(p, payload)
    raise InputFormatError("kind", f"unknown kind {kind!r}")


def _parse_structure_constants(p: int, payload: dict) -> FDCategory:
    where = "payload"
    objects = _need(payload, "objects", where)
    homs = _need(payload, "hom_basis", where)
    names, src, tgt = [], [], []
    index = {}
    obj_index = {str(o): i for i, o in enumerate(objects)}
    for k, entry in enumerate(homs):
        s = str(_need(entry, "source", f"{where}.hom_basis[{k}]"))
        t = str(_need(entry, "target", f"{where}.hom_basis[{k}]"))
        if s not in obj_index or t not in obj_index:
            raise InputFormatError(f"{where}.hom_basis[{k}]", "unknown source or target object")
        for nm in _need(entry, "names", f"{where}.hom_basis[{k}]"):
            if nm in index:
                raise InputFormatError(f"{where}.hom_basis[{k}]", f"duplicate basis name {nm!r}")
            index[nm] = len(names)
            names.append(str(nm))
            src.append(obj_index[s])
            tgt.append(obj_index[t])
    d = len(names)
    mult = np.zeros((d, d, d), dtype=np.int64)
    for k, prod in enumerate(payload.get("products", [])):
        f = _need(prod, "left", f"{where}.products[{k}]")
        g = _need(prod, "right", f"{where}.products[{k}]")
        coeffs = _need(prod, "coeffs", f"{where}.products[{k}]")
        if f not in index or g not in index:
            raise InputFormatError(f"{where}.products[{k}]", "unknown basis name")
        if len(coeffs) != d:
            raise InputFormatError(
                f"{where}.products[{k}].coeffs", f"expected {d} coefficients"
            )
        mult[index[f], index[g]] = np.asarray(coeffs, dtype=np.int64) % p
    units = np.zeros((len(objects), d), dtype=np.int64)
    units_doc = _need(payload, "units", where)
    for o, coeffs in units_doc.items():
        if o not in obj_index:
            raise InputFormatError(f"{where}.units.{o}", "unknown object")
        if len(coeffs) != d:
            raise InputFormatError(f"{where}.units.{o}", f"expected {d} coefficients")
        units[obj_index[o]] = np.asarray(coeffs, dtype=np.int64) % p
    name = payload.get("name")
    try:
        return FDCategory(p, [str(o) for o in objects], names, src, tgt, mult, units, name=name)
    except HochschildError:
        raise
    except Exception as exc:  # malformed shapes and the like
        raise InputFormatError("payload", str(exc))


def _parse_quiver(p: int, payload: dict) -> FDCategory:
    where = "payload"
    vertices = [str(v) for v in _need(payload, "vertices", where)]
    arrows = []
    for k, a in enumerate(_need(payload, "arrows", where)):
        arrows.append(
            Arrow(
                str(_need(a, "name", f"{where}.arrows[{k}]")),
                str(_need(a, "source", f"{where}.arrows[{k}]")),
                str(_need(a, "target", f"{where}.arrows[{k}]")),
            )
        )
    relations = []
    for k, rel in enumerate(payload.get("relations", [])):
        terms = []
        for t, term in enumerate(rel):
            coeff = _need(term, "coeff", f"{where}.relations[{k}][{t}]")
            path = _need(term, "path", f"{where}.relations[{k}][{t}]")
            terms.append((int(coeff), tuple(str(x) for x in path)))
        relations.append(terms)
    trunc = _need(payload, "trunc", where)
    pres = QuiverPresentation(
        p, vertices, arrows, relations, trunc=int(trunc), name=payload.get("name")
    )
    return from_quiver(pres)


def _parse_catalog(p: int, payload: dict) -> FDCategory:
    name = _need(payload, "name", "payload")
    if name == "truncated_poly":
        return truncated_poly(p, int(_need(payload, "n", "payload")))
    if name == "elem_abelian":
        return elem_abelian(p, int(_need(payload, "r", "payload")))
    if name == "qci":
        return qci(
            p,
            int(_need(payload, "a", "payload")),
            int(_need(payload, "b", "payload")),
            int(_need(payload, "q", "payload")),
        )
    if name == "matrix_over":
        inner = _parse_catalog(p, _need(payload, "inner", "payload"))
        return matrix_over(inner, int(_need(payload, "n", "payload")))
    if name == "opposite":
        return opposite(_parse_catalog(p, _need(payload, "inner", "payload")))
    if name == "full_two_object":
        return full_two_object(_parse_catalog(p, _need(payload, "inner", "payload")))
    raise InputFormatError("payload.name", f"unknown catalog constructor {name!r}")


def _parse_restricted_lie(p: int, payload: dict) -> RestrictedLie:
    dim = int(_need(payload, "dim", "payload"))
    brack = np.zeros((dim, dim, dim), dtype=np.int64)
    for k, triple in enumerate(payload.get("bracket", [])):
        if len(triple) != 3:
            raise InputFormatError(f"payload.bracket[{k}]", "expected [i, j, coords]")
        i, j, coords = triple
        if not (0 <= int(i) < dim and 0 <= int(j) < dim) or len(coords) != dim:
            raise InputFormatError(f"payload.bracket[{k}]", "index or coords out of range")
        vec = np.asarray(coords, dtype=np.int64) % p
        brack[int(i), int(j)] = vec
        brack[int(j), int(i)] = (-vec) % p
    pmap_doc = payload.get("pmap")
    if pmap_doc is None:
        pmap = np.zeros((dim, dim), dtype=np.int64)
    else:
        if len(pmap_doc) != dim:
            raise InputFormatError("payload.pmap", f"expected {dim} rows")
        pmap = np.asarray(pmap_doc, dtype=np.int64) % p
    return RestrictedLie(p, dim, brack, pmap, name=payload.get("name"))


# -- serialization --------------------------------------------------------------


def serialize_category(cat: FDCategory) -> dict:
    """Structure-constants document reproducing the category exactly."""
    homs = []
    for a in range(len(cat.objects)):
        for b in range(len(cat.objects)):
            idx = cat.hom_indices(a, b)
            if idx.size:
                homs.append(
                    {
                        "source": cat.objects[a],
                        "target": cat.objects[b],
                        "names": [cat.basis_names[i] for i in idx],
                    }
                )
    products = []
    for i in range(cat.dim):
        for j in range(cat.dim):
            if cat.mult[i, j].any():
                products.append(
                    {
                        "left": cat.basis_names[i],
                        "right": cat.basis_names[j],
                        "coeffs": cat.mult[i, j].tolist(),
                    }
                )
    units = {cat.objects[a]: cat.units[a].tolist() for a in range(len(cat.objects))}
    return {
        "format_version": FORMAT_VERSION,
        "p": cat.field.p,
        "kind": "structure_constants",
        "payload": {
            "name": cat.name,
            "objects": list(cat.objects),
            "hom_basis": homs,
            "units": units,
            "products": products,
        },
    }


def serialize_restricted_lie(lie: RestrictedLie) -> dict:
    """Fixture document for a restricted Lie algebra, canonical ordering."""
    brack = []
    for i in range(lie.dim):
        for j in range(i + 1, lie.dim):
            if lie.bracket[i, j].any():
                brack.append([i, j, lie.bracket[i, j].tolist()])
    return {
        "format_version": FORMAT_VERSION,
        "p": lie.field.p,
        "kind": "restricted_lie_fixture",
        "payload": {
            "name": lie.name,
            "dim": lie.dim,
            "bracket": brack,
            "pmap": lie.pmap.tolist(),
        },
    }


def load_input(path: str):
    """Read and parse an input document from a JSON file."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise InputFormatError(path, f"cannot read file: {exc}")
    except json.JSONDecodeError as exc:
        raise InputFormatError(path, f"invalid JSON: {exc}")
    return parse_document(doc)


def report_bytes(report: dict) -> bytes:
    """Canonical JSON bytes: sorted keys, fixed separators, trailing newline."""
    return (json.dumps(report, sort_keys=True, indent=2) + "\n").encode("utf-8")


def write_report(report: dict, path: str | None):
    data = report_bytes(report)
    if path is None:
        import sys

        sys.stdout.buffer.write(data)
        sys.stdout.flush()
    else:
        with open(path, "wb") as fh:
            fh.write(data)
