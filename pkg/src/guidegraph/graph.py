"""Guideline graph assembly from page geometry.

Arrows are recovered by chaining stroked segments into polylines and
associating small filled triangles as heads; arrow endpoints resolve to
node blocks through expanded bounding boxes; link annotations stitch a
page's sink nodes to the target page's source nodes.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .config import Config, DEFAULT_CONFIG
from .errors import GuidegraphError
from .geom import (
    box_area,
    box_intersection_area,
    contains_point,
    dist,
    expand_box,
    interval_overlap,
)
from .layout import (
    Footnote,
    NodeBlock,
    detect_footnotes,
    detect_labels,
    detect_separators,
    footnote_band_lines,
    form_blocks,
    group_lines,
)

INTRA_PAGE = "intra_page"
CROSS_PAGE = "cross_page"


@dataclass(frozen=True)
class Arrow:
    shaft: tuple[tuple[float, float], ...]
    source_pt: tuple[float, float]
    target_pt: tuple[float, float]
    page_index: int


@dataclass(frozen=True, order=True)
class Edge:
    from_id: str
    to_id: str
    kind: str = INTRA_PAGE


@dataclass(frozen=True)
class Warning:
    page: int | None
    kind: str
    detail: str


@dataclass
class GuidelineGraph:
    nodes: list[NodeBlock] = field(default_factory=list)
    edges: list[Edge] = field(default_factory=list)
    footnotes: list[Footnote] = field(default_factory=list)
    annotations: dict[str, dict] = field(default_factory=dict)
    warnings: list[Warning] = field(default_factory=list)

    def node_by_id(self, node_id: str) -> NodeBlock:
        for node in self.nodes:
            if node.id == node_id:
                return node
        raise KeyError(node_id)

    def validate(self):
        ids = [n.id for n in self.nodes]
        id_set = set(ids)
        if len(ids) != len(id_set):
            raise GuidegraphError("duplicate node ids")
        seen = set()
        for edge in self.edges:
            if edge.from_id == edge.to_id:
                raise GuidegraphError(f"self-loop on {edge.from_id}")
            if edge.from_id not in id_set or edge.to_id not in id_set:
                raise GuidegraphError(
                    f"edge endpoint missing: {edge.from_id}->{edge.to_id}")
            key = (edge.from_id, edge.to_id, edge.kind)
            if key in seen:
                raise GuidegraphError(f"duplicate edge {key}")
            seen.add(key)


def node_sort_key(node_id: str):
    """Numeric (page, index) key for ids of the form p{page}-n{index}."""
    try:
        p, n = node_id.split("-", 1)
        return (int(p[1:]), int(n[1:]))
    except (ValueError, IndexError):
        return (1 << 30, 0)


def canonical_edges(edges) -> list[Edge]:
    uniq = {(e.from_id, e.to_id, e.kind): e for e in edges}
    return sorted(
        uniq.values(),
        key=lambda e: (node_sort_key(e.from_id), node_sort_key(e.to_id), e.kind),
    )


# -- arrows -------------------------------------------------------------------


def detect_arrows(page, config: Config | None = None, warnings=None):
    """Chain segments into polylines and attach triangle heads."""
    cfg = (config or DEFAULT_CONFIG).graph
    sink = warnings if warnings is not None else []
    heads = [
        poly for poly in page.polygons
        if poly.is_triangle and _polygon_area(poly.vertices) <= cfg.head_area_max_pt2
    ]
    polylines = _chain_segments(page.segments, cfg.chain_tol_pt)

    arrows = []
    used_endpoints = set()
    for head in heads:
        centroid = _centroid(head.vertices)
        best = None
        for li, line in enumerate(polylines):
            for end_idx in (0, -1):
                endpoint = line[end_idx]
                d = dist(endpoint, centroid)
                if d <= cfg.head_tol_pt:
                    key = (d, li, end_idx)
                    if best is None or key < best:
                        best = key
        if best is None:
            sink.append(Warning(page.page_index, "unmatched_arrowhead",
                                f"no shaft within tolerance of {centroid}"))
            continue
        _, li, end_idx = best
        if (li, end_idx) in used_endpoints:
            sink.append(Warning(page.page_index, "shared_arrowhead",
                                f"endpoint of polyline {li} already has a head"))
            continue
        used_endpoints.add((li, end_idx))
        line = polylines[li]
        shaft = tuple(line) if end_idx == -1 else tuple(reversed(line))
        arrows.append(Arrow(
            shaft=shaft,
            source_pt=shaft[0],
            target_pt=shaft[-1],
            page_index=page.page_index,
        ))
    arrows.sort(key=lambda a: (a.target_pt, a.source_pt))
    return arrows


def _polygon_area(vertices) -> float:
    total = 0.0
    for i, (x0, y0) in enumerate(vertices):
        x1, y1 = vertices[(i + 1) % len(vertices)]
        total += x0 * y1 - x1 * y0
    return abs(total) / 2.0


def _centroid(vertices):
    n = len(vertices)
    return (sum(v[0] for v in vertices) / n, sum(v[1] for v in vertices) / n)


def _chain_segments(segments, tol):
    """Join segments sharing endpoints (within tol) into simple polylines.

    Components that branch or cycle fall back to one polyline per segment.
    """
    if not segments:
        return []
    points: list[tuple[float, float]] = []

    def find_point(p):
        for i, q in enumerate(points):
            if dist(p, q) <= tol:
                return i
        points.append(p)
        return len(points) - 1

    adjacency: dict[int, list[tuple[int, int]]] = {}
    seg_ends = []
    for si, seg in enumerate(segments):
        a = find_point(seg.p0)
        b = find_point(seg.p1)
        seg_ends.append((a, b))
        adjacency.setdefault(a, []).append((b, si))
        adjacency.setdefault(b, []).append((a, si))

    seen_segments = set()
    polylines = []
    # Trace simple paths starting from degree-1 points, in point order.
    for start in sorted(adjacency, key=lambda i: points[i]):
        if len(adjacency[start]) != 1:
            continue
        first_seg = adjacency[start][0][1]
        if first_seg in seen_segments:
            continue
        path = [start]
        current = start
        prev_seg = None
        while True:
            options = [(nxt, si) for nxt, si in adjacency[current]
                       if si != prev_seg and si not in seen_segments]
            if len(options) != 1:
                break
            nxt, si = options[0]
            seen_segments.add(si)
            path.append(nxt)
            prev_seg = si
            current = nxt
        if len(path) >= 2:
            polylines.append([points[i] for i in path])
    # Anything left (cycles, branches) contributes per-segment polylines.
    for si, (a, b) in enumerate(seg_ends):
        if si not in seen_segments:
            polylines.append([points[a], points[b]])
    return polylines


# -- endpoint resolution ------------------------------------------------------


def link_blocks(arrows, blocks, config: Config | None = None, warnings=None):
    """Resolve arrow endpoints to node blocks and emit intra-page edges."""
    cfg = (config or DEFAULT_CONFIG).graph
    sink = warnings if warnings is not None else []
    edges = []
    for arrow in arrows:
        src = _resolve_endpoint(arrow.source_pt, blocks, cfg)
        tgt = _resolve_endpoint(arrow.target_pt, blocks, cfg)
        if src is None or tgt is None:
            which = "source" if src is None else "target"
            sink.append(Warning(arrow.page_index, "unresolved_arrow_end",
                                f"{which} endpoint of arrow at "
                                f"{arrow.target_pt} matches no block"))
            continue
        if src.id == tgt.id:
            sink.append(Warning(arrow.page_index, "self_loop_arrow",
                                f"arrow resolves to {src.id} on both ends"))
            continue
        edges.append(Edge(from_id=src.id, to_id=tgt.id, kind=INTRA_PAGE))
    return edges


def _resolve_endpoint(pt, blocks, cfg):
    candidates = []
    for block in blocks:
        if contains_point(expand_box(block.bbox, cfg.bbox_expand_pt), pt[0], pt[1]):
            cx = (block.bbox[0] + block.bbox[2]) / 2.0
            cy = (block.bbox[1] + block.bbox[3]) / 2.0
            candidates.append((dist(pt, (cx, cy)), block.id, block))
    if not candidates:
        return None
    candidates.sort(key=lambda c: (c[0], node_sort_key(c[1])))
    return candidates[0][2]


# -- cross-page stitching -----------------------------------------------------


def stitch_cross_page(page_blocks, intra_edges, page_links,
                      config: Config | None = None, warnings=None):
    """Connect sink nodes of a linking page to source nodes of its target.

    A link rectangle overlapping one node's box by at least half the
    rectangle's area pins the edges to that node; otherwise all sinks of
    the page are used.  A link to the same page is skipped with a warning
    (edge kind must stay derivable from page indices).
    """
    cfg = (config or DEFAULT_CONFIG).graph
    sink = warnings if warnings is not None else []
    has_out = {e.from_id for e in intra_edges}
    has_in = {e.to_id for e in intra_edges}

    edges = []
    for page_index, links in enumerate(page_links):
        blocks = page_blocks[page_index] if page_index < len(page_blocks) else []
        for link in links:
            target = link.target_page
            if target == page_index:
                sink.append(Warning(page_index, "self_page_link",
                                    "link annotation targets its own page"))
                continue
            if target >= len(page_blocks):
                sink.append(Warning(page_index, "bad_link_target",
                                    f"link targets page {target} beyond document"))
                continue
            pinned = _pinned_node(link, blocks, cfg)
            if pinned is not None:
                lasts = [pinned]
            else:
                lasts = [b for b in blocks if b.id not in has_out]
            firsts = [b for b in page_blocks[target] if b.id not in has_in]
            if not lasts:
                sink.append(Warning(page_index, "no_sink_nodes",
                                    f"link to page {target} but page has no "
                                    "sink nodes"))
                continue
            if not firsts:
                sink.append(Warning(page_index, "no_source_nodes",
                                    f"link to page {target} but target has no "
                                    "source nodes"))
                continue
            for last in lasts:
                for first in firsts:
                    edges.append(Edge(from_id=last.id, to_id=first.id,
                                      kind=CROSS_PAGE))
    return canonical_edges(edges)


def _pinned_node(link, blocks, cfg):
    rect_area = box_area(link.rect)
    if rect_area <= 0:
        return None
    best = None
    for block in blocks:
        overlap = box_intersection_area(link.rect, block.bbox)
        if overlap >= cfg.link_overlap_min * rect_area:
            key = (-overlap, node_sort_key(block.id))
            if best is None or key < best[0]:
                best = (key, block)
    return best[1] if best else None


# -- full pipeline ------------------------------------------------------------


def build_graph(doc, config: Config | None = None) -> GuidelineGraph:
    """Run the per-page layout and arrow stages, then stitch cross-page."""
    config = config or DEFAULT_CONFIG
    lcfg = config.layout

    warnings: list[Warning] = []
    page_blocks: list[list[NodeBlock]] = []
    page_links = []
    footnotes: list[Footnote] = []
    all_edges: list[Edge] = []

    for page in doc.pages:
        lines = group_lines(page, lcfg)
        page_footnotes = detect_footnotes(page, lines, lcfg)
        consumed = {id(l) for l in footnote_band_lines(page, lines, lcfg)}
        body_lines = [l for l in lines if id(l) not in consumed]
        separators = detect_separators(page, lcfg)
        blocks = form_blocks(body_lines, separators, lcfg)
        labels, assignment = detect_labels(page, blocks, lcfg)
        nodes = [b for b in blocks if id(b) in assignment]
        nodes.sort(key=lambda b: (-b.bbox[3], b.bbox[0]))
        for index, node in enumerate(nodes):
            node.id = f"p{page.page_index}-n{index}"
            node.label = assignment[id(node)]
        page_blocks.append(nodes)
        footnotes.extend(page_footnotes)
        page_links.append(list(page.links))

        arrows = detect_arrows(page, config, warnings)
        all_edges.extend(link_blocks(arrows, nodes, config, warnings))

    cross = stitch_cross_page(page_blocks, all_edges, page_links, config, warnings)
    edges = canonical_edges(list(all_edges) + list(cross))

    nodes = [n for blocks in page_blocks for n in blocks]
    graph = GuidelineGraph(nodes=nodes, edges=edges, footnotes=footnotes,
                           annotations={}, warnings=warnings)

    markers_by_page = {}
    for fn in footnotes:
        markers_by_page.setdefault(fn.page_index, set()).add(fn.marker)
    for node in nodes:
        for marker in node.footnote_markers:
            if marker not in markers_by_page.get(node.page_index, set()):
                warnings.append(Warning(node.page_index, "unresolved_footnote_ref",
                                        f"node {node.id} references marker "
                                        f"{marker!r} with no footnote"))
    graph.validate()
    return graph
