"""Instance and report documents.

An instance document is JSON with string vertices, edge pairs, w-edges as
pairs of canonical maximal-simplex keys (sorted vertex labels joined by
"|"), and optional action / link_edges / tuple sections.  Maximal
simplices are addressed by those keys rather than indices so documents
survive vertex reordering.  parse and emit round-trip bit-exactly on
canonical documents.

Reports serialize rationals as "p/q" strings (plain "p" when q = 1) and
infinity as "inf"; key order is stable.
"""

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .complexes import FlagComplex, build_flag_complex
from .errors import (
    DuplicateVertex,
    NotMaximalSimplexKey,
    ParseError,
    UnknownVertex,
)
from .metric import INF
from .spaces import XGraph


@dataclass(frozen=True)
class Instance:
    complex: FlagComplex
    xgraph: XGraph
    action: Optional[tuple] = None        # tuple of label->label dicts
    link_edges: Optional[dict] = None     # class rep key -> tuple of edges
    tuple_coords: Optional[dict] = None   # class rep key -> tuple of labels


def parse_instance(document, vertex_cap: int | None = None) -> Instance:
    """Validate and load an instance document (dict or JSON text)."""
    if isinstance(document, (str, bytes)):
        try:
            document = json.loads(document)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc}")
    if not isinstance(document, dict):
        raise ParseError("instance document must be a JSON object")
    known = {"vertices", "edges", "w_edges", "action", "link_edges", "tuple"}
    unknown = set(document) - known
    if unknown:
        raise ParseError(f"unknown document keys: {sorted(unknown)}")
    verts = document.get("vertices")
    if not isinstance(verts, list) or not all(isinstance(v, str) for v in verts):
        raise ParseError('"vertices" must be a list of strings')
    if len(set(verts)) != len(verts):
        raise DuplicateVertex("duplicate vertex label in document")
    if vertex_cap is not None and len(verts) > vertex_cap:
        raise ParseError(f"{len(verts)} vertices exceeds the cap {vertex_cap}")
    edges = document.get("edges", [])
    if not isinstance(edges, list) or not all(
            isinstance(e, list) and len(e) == 2 for e in edges):
        raise ParseError('"edges" must be a list of 2-element lists')
    cx = build_flag_complex(verts, [tuple(e) for e in edges])

    pairs = []
    for we in document.get("w_edges", []):
        if not isinstance(we, list) or len(we) != 2:
            raise ParseError('"w_edges" entries must be 2-element lists of keys')
        idx = [_resolve_key(cx, k) for k in we]
        if idx[0] == idx[1]:
            raise ParseError(f"w-edge loop at {we[0]!r}")
        pairs.append(tuple(idx))
    xg = XGraph.from_pairs(cx, pairs)

    action = None
    if "action" in document:
        raw = document["action"]
        if not isinstance(raw, list) or not all(isinstance(g, dict) for g in raw):
            raise ParseError('"action" must be a list of label maps')
        action = tuple({str(k): str(v) for k, v in g.items()} for g in raw)
    link_edges = None
    if "link_edges" in document:
        raw = document["link_edges"]
        if not isinstance(raw, dict):
            raise ParseError('"link_edges" must be an object')
        link_edges = {
            str(k): tuple((str(u), str(v)) for u, v in vs)
            for k, vs in raw.items()}
    tuple_coords = None
    if "tuple" in document:
        raw = document["tuple"]
        if not isinstance(raw, dict):
            raise ParseError('"tuple" must be an object')
        tuple_coords = {str(k): tuple(str(v) for v in vs)
                        for k, vs in raw.items()}
    return Instance(cx, xg, action, link_edges, tuple_coords)


def _resolve_key(cx: FlagComplex, key) -> int:
    if not isinstance(key, str):
        raise ParseError(f"w-edge key {key!r} must be a string")
    verts = key.split("|") if key else []
    for v in verts:
        if v not in cx.index:
            raise UnknownVertex(f"w-edge key {key!r} uses unknown vertex {v!r}")
    mask = cx.mask_of(verts)
    if not cx.is_clique(mask):
        raise NotMaximalSimplexKey(f"{key!r} is not a simplex")
    idx = cx.maximal_index.get(mask)
    if idx is None:
        raise NotMaximalSimplexKey(f"{key!r} is not a maximal simplex")
    return idx


def emit_instance(instance: Instance) -> dict:
    """Canonical document for an instance; parse(emit(i)) reproduces i and
    emit(parse(d)) == d on canonical documents."""
    cx = instance.complex
    doc = {
        "vertices": sorted(cx.labels),
        "edges": sorted([list(e) for e in cx.edge_labels()]),
        "w_edges": [list(e) for e in instance.xgraph.edge_keys()],
    }
    if instance.action is not None:
        doc["action"] = [dict(sorted(g.items())) for g in instance.action]
    if instance.link_edges is not None:
        doc["link_edges"] = {
            k: sorted([sorted([u, v]) for u, v in vs])
            for k, vs in sorted(instance.link_edges.items())}
    if instance.tuple_coords is not None:
        doc["tuple"] = {k: sorted(vs)
                        for k, vs in sorted(instance.tuple_coords.items())}
    return doc


# -- report encoding ----------------------------------------------------------


def encode(value):
    """JSON-encodable form of report values: Fractions as 'p/q', INF as
    'inf', dataclasses as objects, tuple keys joined with '->'."""
    if value is INF:
        return "inf"
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, bool) or value is None:
        return value
    if isinstance(value, (int, str)):
        return value
    if isinstance(value, float):
        raise TypeError(f"float {value} in a report; metric results must be exact")
    if dataclasses.is_dataclass(value):
        return {f.name: encode(getattr(value, f.name))
                for f in dataclasses.fields(value)}
    if isinstance(value, dict):
        out = {}
        for k, v in value.items():
            if isinstance(k, tuple):
                k = "->".join(str(p) for p in k)
            elif not isinstance(k, str):
                k = str(k)
            out[k] = encode(v)
        return out
    if isinstance(value, (list, tuple, set, frozenset)):
        items = [encode(v) for v in value]
        if isinstance(value, (set, frozenset)):
            items = sorted(items, key=repr)
        return items
    if isinstance(value, enum_types()):
        return value.value
    return str(value)


def enum_types():
    import enum

    return (enum.Enum,)


def report_document(kind: str, body) -> dict:
    from .verify import CONVENTIONS

    return {
        "header": {
            "tool": "chhs",
            "kind": kind,
            "conventions": dict(CONVENTIONS),
        },
        "report": encode(body),
    }


def to_json(doc) -> str:
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def to_text(doc, indent: int = 0) -> str:
    """Deterministic plain-text rendering of a report document."""
    pad = "  " * indent
    if isinstance(doc, dict):
        lines = []
        for k in sorted(doc):
            v = doc[k]
            if isinstance(v, (dict, list)) and v:
                lines.append(f"{pad}{k}:")
                lines.append(to_text(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {_scalar(v)}")
        return "\n".join(lines)
    if isinstance(doc, list):
        lines = []
        for v in doc:
            if isinstance(v, (dict, list)) and v:
                lines.append(f"{pad}-")
                lines.append(to_text(v, indent + 1))
            else:
                lines.append(f"{pad}- {_scalar(v)}")
        return "\n".join(lines)
    return f"{pad}{_scalar(doc)}"


def _scalar(v):
    if v is None:
        return "null"
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (dict, list)):
        return "{}" if isinstance(v, dict) else "[]"
    return str(v)
