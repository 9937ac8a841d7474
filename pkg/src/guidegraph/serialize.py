"""JSON-LD serialization of the guideline graph, plus neutral CSV export.

The document shape is fixed (see ``docs/schema.md``): node objects carry
``content``, ``page``, ``bbox``, ``label``, ``next``, ``previous``,
``footnoteRefs`` and the enrichment keys when present; footnote objects
carry ``marker``, ``text``, ``page``.  ``next``/``previous`` are both
materialized and cross-validated on load.  Output is canonical: sorted
keys, nodes ordered by id, stable bytes for equal graphs.
"""

from __future__ import annotations

import csv
import io
import json

from .errors import AsymmetricEdge, DanglingReference, SchemaViolation
from .graph import (
    CROSS_PAGE,
    Edge,
    GuidelineGraph,
    INTRA_PAGE,
    Warning,
    canonical_edges,
    node_sort_key,
)
from .layout import Footnote, NodeBlock

DEFAULT_BASE_IRI = "https://guidegraph.example/vocab#"

_TERMS = (
    "Node", "Footnote", "bbox", "concepts", "content", "footnoteRefs",
    "label", "marker", "next", "nodeClass", "page", "previous", "stages",
    "text", "tnm", "unmappedMentions",
)

_ANNOTATION_KEYS = {
    "stages": "stages",
    "tnm": "tnm",
    "concepts": "concepts",
    "node_class": "nodeClass",
    "unmapped_mentions": "unmappedMentions",
}
_ANNOTATION_KEYS_IN = {v: k for k, v in _ANNOTATION_KEYS.items()}


def to_jsonld(graph: GuidelineGraph, base_iri: str = DEFAULT_BASE_IRI) -> str:
    """Serialize a graph to canonical JSON-LD text."""
    next_map: dict[str, list[str]] = {n.id: [] for n in graph.nodes}
    prev_map: dict[str, list[str]] = {n.id: [] for n in graph.nodes}
    for edge in canonical_edges(graph.edges):
        next_map[edge.from_id].append(_frag(edge.to_id))
        prev_map[edge.to_id].append(_frag(edge.from_id))

    items = []
    for node in sorted(graph.nodes, key=lambda n: node_sort_key(n.id)):
        obj = {
            "@id": _frag(node.id),
            "@type": "Node",
            "bbox": list(node.bbox),
            "content": list(node.lines),
            "footnoteRefs": list(node.footnote_markers),
            "label": node.label,
            "next": next_map[node.id],
            "page": node.page_index,
            "previous": prev_map[node.id],
        }
        ann = graph.annotations.get(node.id, {})
        for internal, key in _ANNOTATION_KEYS.items():
            if internal in ann:
                obj[key] = ann[internal]
        items.append(obj)

    for fn in sorted(graph.footnotes, key=lambda f: (f.page_index, f.marker)):
        items.append({
            "@id": f"#p{fn.page_index}-f{fn.marker}",
            "@type": "Footnote",
            "marker": fn.marker,
            "page": fn.page_index,
            "text": fn.text,
        })

    doc = {
        "@context": {term: base_iri + term for term in _TERMS},
        "@graph": items,
        "warnings": [
            {"detail": w.detail, "kind": w.kind, "page": w.page}
            for w in graph.warnings
        ],
    }
    return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=True) + "\n"


def _frag(node_id: str) -> str:
    return "#" + node_id


def _unfrag(ref, path) -> str:
    if not (isinstance(ref, str) and ref.startswith("#") and len(ref) > 1):
        raise SchemaViolation(path, "expected an @id fragment like '#p0-n0'")
    return ref[1:]


def from_jsonld(text: str) -> GuidelineGraph:
    """Parse and validate a serialized graph; the inverse of to_jsonld."""
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaViolation("$", f"not valid JSON: {exc.msg}") from exc
    if not isinstance(raw, dict):
        raise SchemaViolation("$", "expected a JSON object")
    context = raw.get("@context")
    if not isinstance(context, dict):
        raise SchemaViolation("@context", "missing or not an object")
    items = raw.get("@graph")
    if not isinstance(items, list):
        raise SchemaViolation("@graph", "missing or not an array")

    nodes: list[NodeBlock] = []
    annotations: dict[str, dict] = {}
    footnotes: list[Footnote] = []
    next_map: dict[str, list[str]] = {}
    prev_map: dict[str, list[str]] = {}
    node_pages: dict[str, int] = {}

    for i, item in enumerate(items):
        path = f"@graph[{i}]"
        if not isinstance(item, dict):
            raise SchemaViolation(path, "expected an object")
        item_id = item.get("@id")
        if not isinstance(item_id, str):
            raise SchemaViolation(f"{path}.@id", "missing @id")
        item_type = item.get("@type")
        if item_type == "Node":
            node, nxt, prv, ann = _parse_node(item, path)
            if node.id in node_pages:
                raise SchemaViolation(f"{path}.@id", f"duplicate id {node.id}")
            nodes.append(node)
            node_pages[node.id] = node.page_index
            next_map[node.id] = nxt
            prev_map[node.id] = prv
            if ann:
                annotations[node.id] = ann
        elif item_type == "Footnote":
            footnotes.append(_parse_footnote(item, path))
        else:
            raise SchemaViolation(f"{path}.@type", "expected 'Node' or 'Footnote'")

    for from_id, targets in next_map.items():
        for to_id in targets:
            if to_id not in node_pages:
                raise DanglingReference(to_id)
            if from_id not in prev_map.get(to_id, []):
                raise AsymmetricEdge(from_id, to_id)
    for to_id, sources in prev_map.items():
        for from_id in sources:
            if from_id not in node_pages:
                raise DanglingReference(from_id)
            if to_id not in next_map.get(from_id, []):
                raise AsymmetricEdge(from_id, to_id)

    edges = []
    for from_id, targets in next_map.items():
        for to_id in targets:
            kind = (INTRA_PAGE if node_pages[from_id] == node_pages[to_id]
                    else CROSS_PAGE)
            edges.append(Edge(from_id=from_id, to_id=to_id, kind=kind))

    warnings = []
    raw_warnings = raw.get("warnings", [])
    if not isinstance(raw_warnings, list):
        raise SchemaViolation("warnings", "expected an array")
    for i, w in enumerate(raw_warnings):
        if not (isinstance(w, dict) and isinstance(w.get("kind"), str)
                and isinstance(w.get("detail"), str)):
            raise SchemaViolation(f"warnings[{i}]", "expected kind/detail strings")
        page = w.get("page")
        if page is not None and not isinstance(page, int):
            raise SchemaViolation(f"warnings[{i}].page", "expected int or null")
        warnings.append(Warning(page=page, kind=w["kind"], detail=w["detail"]))

    nodes.sort(key=lambda n: node_sort_key(n.id))
    footnotes.sort(key=lambda f: (f.page_index, f.marker))
    graph = GuidelineGraph(nodes=nodes, edges=canonical_edges(edges),
                           footnotes=footnotes, annotations=annotations,
                           warnings=warnings)
    graph.validate()
    return graph


def _parse_node(item, path):
    node_id = _unfrag(item.get("@id"), f"{path}.@id")
    page = item.get("page")
    if not isinstance(page, int) or isinstance(page, bool) or page < 0:
        raise SchemaViolation(f"{path}.page", "expected a non-negative integer")
    bbox = item.get("bbox")
    if not (isinstance(bbox, list) and len(bbox) == 4
            and all(isinstance(v, (int, float)) and not isinstance(v, bool)
                    for v in bbox)):
        raise SchemaViolation(f"{path}.bbox", "expected [x0, y0, x1, y1]")
    content = item.get("content")
    if not (isinstance(content, list) and content
            and all(isinstance(line, str) and line for line in content)):
        raise SchemaViolation(f"{path}.content",
                              "expected a non-empty array of non-empty strings")
    label = item.get("label")
    if label is not None and not isinstance(label, str):
        raise SchemaViolation(f"{path}.label", "expected a string or null")
    refs = item.get("footnoteRefs")
    if not (isinstance(refs, list) and all(
            isinstance(m, str) and len(m) == 1 for m in refs)):
        raise SchemaViolation(f"{path}.footnoteRefs",
                              "expected an array of single-character markers")
    nxt = _ref_list(item.get("next"), f"{path}.next")
    prv = _ref_list(item.get("previous"), f"{path}.previous")

    ann = {}
    for key, internal in _ANNOTATION_KEYS_IN.items():
        if key in item:
            ann[internal] = item[key]
    node = NodeBlock(
        id=node_id,
        page_index=page,
        bbox=tuple(float(v) for v in bbox),
        lines=list(content),
        label=label,
        footnote_markers=list(refs),
    )
    return node, nxt, prv, ann


def _ref_list(value, path):
    if not isinstance(value, list):
        raise SchemaViolation(path, "expected an array of @id references")
    return [_unfrag(ref, f"{path}[{i}]") for i, ref in enumerate(value)]


def _parse_footnote(item, path):
    marker = item.get("marker")
    if not (isinstance(marker, str) and len(marker) == 1):
        raise SchemaViolation(f"{path}.marker", "expected a single character")
    text = item.get("text")
    if not (isinstance(text, str) and text):
        raise SchemaViolation(f"{path}.text", "expected a non-empty string")
    page = item.get("page")
    if not isinstance(page, int) or isinstance(page, bool) or page < 0:
        raise SchemaViolation(f"{path}.page", "expected a non-negative integer")
    return Footnote(marker=marker, text=text, page_index=page)


# -- CSV ----------------------------------------------------------------------


def export_csv(graph: GuidelineGraph) -> tuple[str, str]:
    """Neutral node/edge CSV pair (RFC 4180 quoting, sorted rows)."""
    nodes_out = io.StringIO()
    writer = csv.writer(nodes_out, lineterminator="\r\n")
    writer.writerow(["id", "page", "label", "content", "node_class"])
    for node in sorted(graph.nodes, key=lambda n: node_sort_key(n.id)):
        ann = graph.annotations.get(node.id, {})
        writer.writerow([
            node.id,
            node.page_index,
            node.label or "",
            node.joined_text(),
            ann.get("node_class", ""),
        ])

    edges_out = io.StringIO()
    writer = csv.writer(edges_out, lineterminator="\r\n")
    writer.writerow(["from", "to", "kind"])
    for edge in canonical_edges(graph.edges):
        writer.writerow([edge.from_id, edge.to_id, edge.kind])
    return nodes_out.getvalue(), edges_out.getvalue()
