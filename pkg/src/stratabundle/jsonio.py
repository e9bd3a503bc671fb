"""Canonical JSON interchange for every document kind.

Serialization is canonical: sorted keys, two-space indent, a trailing
newline, UTF-8.  Reading a document and writing it back reproduces the
bytes, which keeps golden files and manifest hashes stable.  Writers are
atomic (write to a sibling temp file, then rename).
"""
from __future__ import annotations

import hashlib
import json
import os
from pathlib import Path

from . import cellbase, fincat, strabundle
from .cellbase import BaseComplex, Cell, SimplicialMap, Stratification
from .fincat import CatFunctor, FibreFunctor, FiniteCategory
from .funcspace import DiagramBundle, FunctionBundle
from .strabundle import FBundleMap, StratBundle, TotalComplex
from .validation import DocumentError


def canon_dumps(doc) -> str:
    return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def write_doc(path, doc) -> None:
    path = Path(path)
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(canon_dumps(doc), encoding="utf-8")
    os.replace(tmp, path)


def read_doc(path) -> dict:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise DocumentError(f"cannot read {path}: {exc}") from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"{path} is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise DocumentError(f"{path}: top level must be an object")
    return doc


def _need(doc: dict, keys, kind: str) -> None:
    missing = [k for k in keys if k not in doc]
    if missing:
        raise DocumentError(f"{kind} document is missing keys {missing}")


def category_to_doc(cat: FiniteCategory, ff: FibreFunctor) -> dict:
    return {
        "objects": sorted(cat.objects),
        "morphisms": [
            {"id": m.id, "src": m.src, "tgt": m.tgt}
            for m in sorted(cat.morphisms.values(), key=lambda m: m.id)
        ],
        "compose": sorted([g, f, gf] for (g, f), gf in cat.compose_table.items()),
        "identities": dict(cat.identities),
        "fibres": {v: list(ff.on_objects[v]) for v in cat.objects},
        "actions": {m: dict(sorted(t.items())) for m, t in ff.on_morphisms.items()},
    }


def category_from_doc(doc: dict) -> tuple[FiniteCategory, FibreFunctor]:
    _need(doc, ["objects", "morphisms", "compose", "identities", "fibres", "actions"], "category")
    try:
        cat = fincat.category(
            doc["objects"],
            [(m["id"], m["src"], m["tgt"]) for m in doc["morphisms"]],
            {(g, f): gf for g, f, gf in doc["compose"]},
            doc["identities"],
        )
        ff = fincat.fibre_functor(doc["fibres"], doc["actions"])
    except (KeyError, TypeError, ValueError) as exc:
        raise DocumentError(f"malformed category document: {exc!r}") from exc
    return cat, ff


def complex_to_doc(b: BaseComplex, s: Stratification) -> dict:
    return {
        "cells": [
            {
                "id": c.id,
                "dim": c.dim,
                "faces": list(c.faces),
                "stratum": s.strata[c.id],
            }
            for c in sorted(b.cells.values(), key=lambda c: c.id)
        ]
    }


def complex_from_doc(doc: dict) -> tuple[BaseComplex, Stratification]:
    _need(doc, ["cells"], "complex")
    try:
        cells = {}
        strata = {}
        for entry in doc["cells"]:
            cells[entry["id"]] = Cell(
                entry["id"], int(entry["dim"]), tuple(sorted(set(entry["faces"])))
            )
            strata[entry["id"]] = int(entry["stratum"])
    except (KeyError, TypeError, ValueError) as exc:
        raise DocumentError(f"malformed complex document: {exc!r}") from exc
    return BaseComplex(cells), Stratification(strata)


def map_to_doc(m: SimplicialMap, src_strat: Stratification | None = None) -> dict:
    doc = {"vertex_map": dict(m.vertex_map)}
    if src_strat is not None:
        doc["source"] = complex_to_doc(m.source, src_strat)
    return doc


def map_from_doc(doc: dict, target: BaseComplex) -> tuple[SimplicialMap, Stratification]:
    _need(doc, ["vertex_map", "source"], "simplicial-map")
    source, strat = complex_from_doc(doc["source"])
    try:
        smap = SimplicialMap.from_vertex_map(source, target, doc["vertex_map"])
    except (KeyError, TypeError) as exc:
        raise DocumentError(f"malformed map document: {exc!r}") from exc
    return smap, strat


def bundle_to_doc(x: StratBundle) -> dict:
    return {
        "base": complex_to_doc(x.base, x.strat),
        "category": category_to_doc(x.cat, x.ff),
        "fibres": dict(sorted(x.fibre_obj.items())),
        "transitions": [
            {"cell": c, "face": f, "mor": m}
            for (f, c), m in sorted(x.transition.items(), key=lambda kv: (kv[0][1], kv[0][0]))
        ],
    }


def bundle_from_doc(doc: dict) -> StratBundle:
    _need(doc, ["base", "category", "fibres", "transitions"], "bundle")
    base, strat = complex_from_doc(doc["base"])
    cat, ff = category_from_doc(doc["category"])
    try:
        transition = {(t["face"], t["cell"]): t["mor"] for t in doc["transitions"]}
        fibres = dict(doc["fibres"])
    except (KeyError, TypeError) as exc:
        raise DocumentError(f"malformed bundle document: {exc!r}") from exc
    return StratBundle(base, strat, cat, ff, fibres, transition)


def diagram_to_doc(d: DiagramBundle) -> dict:
    return {
        "components": {v: bundle_to_doc(comp.bundle) for v, comp in d.components.items()},
        "actions": {
            m: {c: dict(sorted(t.items())) for c, t in per_cell.items()}
            for m, per_cell in d.actions.items()
        },
    }


def diagram_from_doc(doc: dict) -> DiagramBundle:
    _need(doc, ["components", "actions"], "diagram")
    components = {}
    for v, sub in doc["components"].items():
        components[v] = FunctionBundle(bundle_from_doc(sub), v)
    if not components:
        raise DocumentError("diagram document has no components")
    first = next(iter(components.values())).bundle
    actions = {
        m: {c: dict(t) for c, t in per_cell.items()}
        for m, per_cell in doc["actions"].items()
    }
    return DiagramBundle(
        first.cat,
        first.base,
        first.strat,
        dict(first.fibre_obj),
        dict(first.transition),
        components,
        actions,
    )


def functor_to_doc(phi: CatFunctor, gg: FibreFunctor) -> dict:
    return {
        "on_objects": dict(phi.on_objects),
        "on_morphisms": dict(phi.on_morphisms),
        "target": category_to_doc(phi.target, gg),
    }


def functor_from_doc(doc: dict, source: FiniteCategory) -> tuple[CatFunctor, FibreFunctor]:
    _need(doc, ["on_objects", "on_morphisms", "target"], "functor")
    target, gg = category_from_doc(doc["target"])
    phi = CatFunctor(source, target, dict(doc["on_objects"]), dict(doc["on_morphisms"]))
    return phi, gg


def attachment_from_doc(doc: dict, y: StratBundle) -> tuple[StratBundle, frozenset, FBundleMap]:
    """Attachment document: the piece bundle, its attached cells and the map."""
    _need(doc, ["bundle", "attached_cells", "map", "fibre_morphisms"], "attachment")
    m = bundle_from_doc(doc["bundle"])
    a_cells = frozenset(doc["attached_cells"])
    try:
        smap = SimplicialMap.from_vertex_map(
            cellbase.subcomplex(m.base, a_cells), y.base, doc["map"]["vertex_map"]
        )
    except (KeyError, TypeError) as exc:
        raise DocumentError(f"malformed attachment document: {exc!r}") from exc
    h = FBundleMap(strabundle.restrict(m, a_cells), y, smap, dict(doc["fibre_morphisms"]))
    return m, a_cells, h


def strat_from_doc(doc: dict) -> Stratification:
    _need(doc, ["strata"], "stratification")
    try:
        return Stratification({c: int(k) for c, k in doc["strata"].items()})
    except (TypeError, ValueError) as exc:
        raise DocumentError(f"malformed stratification document: {exc!r}") from exc


def total_to_doc(t: TotalComplex) -> dict:
    return {
        "elements": [list(e) for e in t.elements],
        "relations": [[list(a), list(b)] for a, b in t.relations],
    }


def total_to_dot(t: TotalComplex) -> str:
    """Plain-text graph description of a total complex."""
    lines = ["graph total {"]
    for c, v in t.elements:
        lines.append(f'  "{c}:{v}";')
    for (fc, fv), (cc, cv) in t.relations:
        lines.append(f'  "{fc}:{fv}" -- "{cc}:{cv}";')
    lines.append("}")
    return "\n".join(lines) + "\n"


def detect_kind(doc: dict) -> str:
    if {"objects", "morphisms", "compose", "identities"} <= set(doc):
        return "category"
    if {"base", "category", "fibres", "transitions"} <= set(doc):
        return "bundle"
    if {"components", "actions"} <= set(doc):
        return "diagram"
    if "cells" in doc:
        return "complex"
    if "vertex_map" in doc and "fibre_morphisms" not in doc:
        return "map"
    if {"bundle", "attached_cells"} <= set(doc):
        return "attachment"
    if {"on_objects", "on_morphisms", "target"} <= set(doc):
        return "functor"
    if "strata" in doc:
        return "stratification"
    if "kind" in doc:
        return str(doc["kind"])
    if "suite" in doc:
        return "report"
    return "unknown"


def sha256_of(path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def build_manifest(directory) -> dict:
    """Scan a workspace directory for documents, recording kinds and hashes."""
    directory = Path(directory)
    documents = {}
    for path in sorted(directory.glob("*.json")):
        if path.name == "manifest.json":
            continue
        try:
            doc = read_doc(path)
            kind = detect_kind(doc)
        except DocumentError:
            kind = "unreadable"
        documents[path.name] = {"kind": kind, "sha256": sha256_of(path)}
    return {"documents": documents}


def check_manifest(directory) -> list[str]:
    """Mismatches between a stored manifest and the directory contents."""
    directory = Path(directory)
    manifest = read_doc(directory / "manifest.json")
    _need(manifest, ["documents"], "manifest")
    problems = []
    current = build_manifest(directory)["documents"]
    for name, meta in manifest["documents"].items():
        if name not in current:
            problems.append(f"{name}: listed but missing")
        elif current[name]["sha256"] != meta.get("sha256"):
            problems.append(f"{name}: content hash changed")
        elif current[name]["kind"] != meta.get("kind"):
            problems.append(f"{name}: kind changed")
    for name in current:
        if name not in manifest["documents"]:
            problems.append(f"{name}: present but not listed")
    return problems
