"""Synthetic guideline-page generator with exact ground truth.

Pages are laid out on a column grid: underlined labels on top, node blocks
below them, elbow arrows with small filled-triangle heads between columns,
lettered footnotes in the bottom band, and link annotations for cross-page
continuation.  Occasionally a column carries a "tight pair": two blocks
close enough to merge by the gap rule, kept apart by a drawn vertical
separator.

Every visual element derives from the nominal layout, so the ground-truth
graph is exact by construction.  Structure and jitter use independent RNG
streams: the truth is invariant under ``jitter_pt``, and generation is
byte-deterministic per seed.  Text metrics go through
``pdfcore.fonts.line_layout``, which mirrors the interpreter's pen
arithmetic, so truth boxes equal extracted boxes bit-for-bit at jitter 0.
"""

from __future__ import annotations

import zlib
from dataclasses import dataclass, field, replace

from ..classifier.dataset import CLASSES, LabeledDataset
from ..classifier.sgd import make_rng
from ..errors import InputError
from ..geom import quant3
from ..graph import CROSS_PAGE, Edge, GuidelineGraph, INTRA_PAGE, canonical_edges
from ..layout import Footnote, NodeBlock
from ..pdfcore import fonts
from .phrases import FOOTNOTE_POOL, LABEL_POOL, PHRASE_POOLS, QUALIFIER_POOLS

PAGE_W = 792.0
PAGE_H = 612.0
MARGIN = 40.0
GUTTER = 48.0
NODE_FONT = "Helvetica"
LABEL_FONT = "Helvetica-Bold"
FONT_SIZE = 10.0
MARKER_SIZE = 6.5
MARKER_RAISE = 2.8
FOOT_SIZE = 7.0
LEADING = 5.6
TIGHT_GAP = 5.6
LABEL_BASELINE = PAGE_H - 60.0
FIRST_ROW_BASELINE = PAGE_H - 84.0
LAST_ROW_FLOOR = 130.0
TIGHT_PAIR_RATE = 0.3
MAX_FOOTNOTES_PER_PAGE = 12


@dataclass(frozen=True)
class CorpusSpec:
    seed: int = 0
    pages: int = 1
    columns_per_page: int = 3
    nodes_per_column: int = 2
    edge_density: float = 0.9
    footnote_rate: float = 0.3
    cross_page_link_rate: float = 1.0
    jitter_pt: float = 0.0
    vocabulary: dict = field(default_factory=lambda: dict(PHRASE_POOLS))

    def __post_init__(self):
        if self.pages < 1:
            raise InputError("pages must be >= 1")
        if not 2 <= self.columns_per_page <= 5:
            raise InputError("columns_per_page must be in 2..5")
        if not 1 <= self.nodes_per_column <= 6:
            raise InputError("nodes_per_column must be in 1..6")
        for name in ("edge_density", "footnote_rate", "cross_page_link_rate"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise InputError(f"{name} must be in [0, 1]")
        if self.jitter_pt < 0.0:
            raise InputError("jitter_pt must be >= 0")
        missing = [c for c in CLASSES if not self.vocabulary.get(c)]
        if missing:
            raise InputError(f"vocabulary missing phrases for {missing[0]}")


def perturb(spec: CorpusSpec, jitter_pt: float) -> CorpusSpec:
    """Same document structure and truth, different placement noise."""
    if jitter_pt < 0.0:
        raise InputError("jitter_pt must be >= 0")
    return replace(spec, jitter_pt=jitter_pt)


# -- layout plan ---------------------------------------------------------------


@dataclass
class _PlannedNode:
    page: int
    col: int
    row: int
    cls: str
    lines: list[str]  # wrapped text lines
    x: float = 0.0
    top_baseline: float = 0.0
    marker: str | None = None
    footnote_text: str | None = None
    node_id: str = ""
    tight_member: bool = False
    tight_role: str | None = None  # "upper" | "lower"

    @property
    def baselines(self):
        return [self.top_baseline - i * LEADING for i in range(len(self.lines))]

    def nominal_bbox(self):
        x0 = None
        x1 = None
        for text, baseline in zip(self.lines, self.baselines):
            runs, _ = fonts.line_layout(NODE_FONT, text, quant3(self.x), FONT_SIZE)
            lx0 = runs[0][1]
            lx1 = runs[-1][1] + runs[-1][2]
            x0 = lx0 if x0 is None else min(x0, lx0)
            x1 = lx1 if x1 is None else max(x1, lx1)
        top = quant3(self.baselines[0]) + 1.0 * FONT_SIZE
        bottom = quant3(self.baselines[-1]) - 0.25 * FONT_SIZE
        return (x0, bottom, x1, top)

    def center_y(self):
        box = self.nominal_bbox()
        return (box[1] + box[3]) / 2.0

    def right_x(self):
        return self.nominal_bbox()[2]


def _wrapped_width(text: str, max_width: float) -> float:
    return max(fonts.advance_width(NODE_FONT, line, FONT_SIZE)
               for line in _wrap(text, NODE_FONT, FONT_SIZE, max_width))


def _closest_width_phrase(pool, sibling, col_w):
    """Pool phrase whose wrapped width best matches the sibling node's."""
    target = _wrapped_width(" ".join(sibling.lines), col_w)
    best = min(pool, key=lambda p: (abs(_wrapped_width(p, col_w) - target), p))
    return best


def _wrap(text: str, font: str, size: float, max_width: float) -> list[str]:
    words = text.split(" ")
    lines = []
    current: list[str] = []
    for word in words:
        trial = " ".join(current + [word])
        if current and fonts.advance_width(font, trial, size) > max_width:
            lines.append(" ".join(current))
            current = [word]
        else:
            current.append(word)
    if current:
        lines.append(" ".join(current))
    return lines


def generate_document(spec: CorpusSpec):
    """Build (pdf_bytes, truth_graph) for the spec; deterministic per seed."""
    rng_struct = make_rng(spec.seed, 10)
    rng_jitter = make_rng(spec.seed, 11)

    n_cols = spec.columns_per_page
    npc = spec.nodes_per_column
    col_w = (PAGE_W - 2 * MARGIN - (n_cols - 1) * GUTTER) / n_cols
    row_band = (FIRST_ROW_BASELINE - LAST_ROW_FLOOR) / npc

    pages = []
    for page_index in range(spec.pages):
        label_perm = rng_struct.permutation(len(LABEL_POOL))
        labels = [LABEL_POOL[label_perm[c % len(LABEL_POOL)]]
                  for c in range(n_cols)]

        tight = {}
        for c in range(n_cols):
            flag = rng_struct.random() < TIGHT_PAIR_RATE
            row = int(rng_struct.integers(0, max(1, npc - 1)))
            if flag and npc >= 2:
                tight[c] = row

        nodes = []
        for c in range(n_cols):
            col_x = MARGIN + c * (col_w + GUTTER)
            for r in range(npc):
                cls = CLASSES[int(rng_struct.integers(0, len(CLASSES)))]
                pool = spec.vocabulary[cls]
                phrase = pool[int(rng_struct.integers(0, len(pool)))]
                if c in tight and r == tight[c] + 1:
                    phrase = _closest_width_phrase(pool, nodes[-1], col_w)
                stagger = float(rng_struct.integers(0, 4)) * 8.0
                wants_footnote = rng_struct.random() < spec.footnote_rate
                fn_idx = int(rng_struct.integers(0, len(FOOTNOTE_POOL)))
                node = _PlannedNode(
                    page=page_index, col=c, row=r, cls=cls,
                    lines=_wrap(phrase, NODE_FONT, FONT_SIZE, col_w),
                    x=col_x,
                )
                if c in tight and r in (tight[c], tight[c] + 1):
                    node.tight_member = True
                    node.tight_role = "upper" if r == tight[c] else "lower"
                if c in tight and r == tight[c] + 1:
                    # tight pair: sit right below the previous node
                    prev = nodes[-1]
                    node.top_baseline = prev.baselines[-1] - TIGHT_GAP
                else:
                    node.top_baseline = (FIRST_ROW_BASELINE - r * row_band
                                         - stagger)
                # markers on tight members would jitter within line-merge
                # tolerance of the sibling's text, so they stay bare
                if wants_footnote and not node.tight_member:
                    node.footnote_text = FOOTNOTE_POOL[fn_idx]
                nodes.append(node)

        edges_cr = []  # ((src col,row), (tgt col,row))
        for c in range(1, n_cols):
            for j in range(npc):
                if rng_struct.random() < spec.edge_density:
                    edges_cr.append(((c - 1, j % npc), (c, j)))

        link_flag = False
        if page_index < spec.pages - 1:
            link_flag = rng_struct.random() < spec.cross_page_link_rate

        pages.append({
            "labels": labels,
            "tight": tight,
            "nodes": nodes,
            "edges_cr": edges_cr,
            "link": link_flag,
            "col_w": col_w,
        })

    _assign_ids_and_markers(pages)
    truth = _build_truth(spec, pages)
    pdf = _render_pdf(spec, pages, rng_jitter)
    return pdf, truth


def _assign_ids_and_markers(pages):
    for page_index, page in enumerate(pages):
        nodes = page["nodes"]
        order = sorted(nodes, key=lambda n: (-n.nominal_bbox()[3],
                                             n.nominal_bbox()[0]))
        for i, node in enumerate(order):
            node.node_id = f"p{page_index}-n{i}"
        count = 0
        for node in order:
            if node.footnote_text is not None and count < MAX_FOOTNOTES_PER_PAGE:
                node.marker = chr(ord("a") + count)
                count += 1
            else:
                node.footnote_text = None


def _by_cr(page):
    return {(n.col, n.row): n for n in page["nodes"]}


def _build_truth(spec, pages) -> GuidelineGraph:
    nodes = []
    footnotes = []
    edges = []
    annotations = {}

    for page_index, page in enumerate(pages):
        by_cr = _by_cr(page)
        ordered = sorted(page["nodes"], key=lambda n: (-n.nominal_bbox()[3],
                                                       n.nominal_bbox()[0]))
        for node in ordered:
            nodes.append(NodeBlock(
                id=node.node_id,
                page_index=page_index,
                bbox=node.nominal_bbox(),
                lines=list(node.lines),
                label=page["labels"][node.col],
                footnote_markers=[node.marker] if node.marker else [],
            ))
            annotations[node.node_id] = {"node_class": node.cls}
            if node.marker:
                footnotes.append(Footnote(marker=node.marker,
                                          text=node.footnote_text,
                                          page_index=page_index))
        for (sc, sr), (tc, tr) in page["edges_cr"]:
            edges.append(Edge(from_id=by_cr[(sc, sr)].node_id,
                              to_id=by_cr[(tc, tr)].node_id,
                              kind=INTRA_PAGE))

    # cross-page: sinks of the linking page to sources of the next page
    for page_index, page in enumerate(pages):
        if not page["link"]:
            continue
        nxt = pages[page_index + 1]
        has_out = {_by_cr(page)[src].node_id for src, _ in page["edges_cr"]}
        has_in = {_by_cr(nxt)[tgt].node_id for _, tgt in nxt["edges_cr"]}
        sinks = [n.node_id for n in page["nodes"] if n.node_id not in has_out]
        sources = [n.node_id for n in nxt["nodes"] if n.node_id not in has_in]
        for s in sinks:
            for t in sources:
                edges.append(Edge(from_id=s, to_id=t, kind=CROSS_PAGE))

    from ..graph import node_sort_key

    nodes.sort(key=lambda n: node_sort_key(n.id))
    footnotes.sort(key=lambda f: (f.page_index, f.marker))
    return GuidelineGraph(nodes=nodes, edges=canonical_edges(edges),
                          footnotes=footnotes, annotations=annotations,
                          warnings=[])


# -- rendering -----------------------------------------------------------------


def _fmt(x: float) -> str:
    s = f"{quant3(x):.3f}"
    return "0.000" if s == "-0.000" else s


def _escape(text: str) -> str:
    return text.replace("\\", "\\\\").replace("(", "\\(").replace(")", "\\)")


class _Stream:
    def __init__(self):
        self.parts = ["0.8 w"]

    def text(self, font_res, size, x, y, s):
        self.parts.append(
            f"BT {font_res} {_fmt(size)} Tf {_fmt(x)} {_fmt(y)} Td "
            f"({_escape(s)}) Tj ET"
        )

    def segment(self, x0, y0, x1, y1):
        self.parts.append(
            f"{_fmt(x0)} {_fmt(y0)} m {_fmt(x1)} {_fmt(y1)} l S"
        )

    def triangle(self, pts):
        (x0, y0), (x1, y1), (x2, y2) = pts
        self.parts.append(
            f"{_fmt(x0)} {_fmt(y0)} m {_fmt(x1)} {_fmt(y1)} l "
            f"{_fmt(x2)} {_fmt(y2)} l f"
        )

    def data(self) -> bytes:
        return "\n".join(self.parts).encode("latin-1")


def _render_pdf(spec, pages, rng_jitter) -> bytes:
    def offsets():
        if spec.jitter_pt == 0.0:
            # still consume the stream so truth/structure stay aligned
            rng_jitter.random(2)
            return 0.0, 0.0
        dx, dy = rng_jitter.random(2)
        return (spec.jitter_pt * (2.0 * dx - 1.0),
                spec.jitter_pt * (2.0 * dy - 1.0))

    streams = []
    links = []
    for page in pages:
        st = _Stream()
        col_w = page["col_w"]

        # labels (element: text lines + underline)
        for c, label in enumerate(page["labels"]):
            dx, dy = offsets()
            col_x = MARGIN + c * (col_w + GUTTER)
            lines = _wrap(label, LABEL_FONT, FONT_SIZE, col_w)
            width = max(fonts.advance_width(LABEL_FONT, l, FONT_SIZE)
                        for l in lines)
            last_baseline = LABEL_BASELINE - (len(lines) - 1) * LEADING
            for i, line in enumerate(lines):
                st.text("/F2", FONT_SIZE, col_x + dx,
                        LABEL_BASELINE - i * LEADING + dy, line)
            uy = last_baseline - 4.0 + dy
            st.segment(col_x + dx, uy, col_x + width + dx, uy)

        # tight-pair separators (element each)
        by_cr = _by_cr(page)
        for c, row in sorted(page["tight"].items()):
            upper = by_cr[(c, row)]
            lower = by_cr[(c, row + 1)]
            dx, dy = offsets()
            w_upper = upper.nominal_bbox()[2] - upper.nominal_bbox()[0]
            w_lower = lower.nominal_bbox()[2] - lower.nominal_bbox()[0]
            sep_x = upper.x + 0.22 * min(w_upper, w_lower)
            y_top = upper.baselines[-1] + 2.5
            y_bot = lower.baselines[0] - 2.5
            st.segment(sep_x + dx, y_bot + dy, sep_x + dx, y_top + dy)

        # nodes (element: text lines + footnote marker)
        for node in page["nodes"]:
            dx, dy = offsets()
            for text, baseline in zip(node.lines, node.baselines):
                st.text("/F1", FONT_SIZE, node.x + dx, baseline + dy, text)
            if node.marker:
                runs, _ = fonts.line_layout(NODE_FONT, node.lines[0],
                                            quant3(node.x), FONT_SIZE)
                end_x = runs[-1][1] + runs[-1][2]
                st.text("/F1", MARKER_SIZE, end_x + 1.0 + dx,
                        node.baselines[0] + MARKER_RAISE + dy, node.marker)

        # arrows (element: shaft + head); endpoints sit just off each
        # block's center so endpoint resolution is unambiguous even for
        # tight pairs, and an incoming and outgoing arrow at one node
        # never share a chaining endpoint
        for (sc, sr), (tc, tr) in page["edges_cr"]:
            src = by_cr[(sc, sr)]
            tgt = by_cr[(tc, tr)]
            dx, dy = offsets()
            sbox = src.nominal_bbox()
            tbox = tgt.nominal_bbox()
            sx = (sbox[0] + sbox[2]) / 2.0 + 3.0 + dx
            sy = src.center_y() + dy
            tx = (tbox[0] + tbox[2]) / 2.0 - 3.0 + dx
            ty = tgt.center_y() + dy
            gutter_x0 = MARGIN + tc * (col_w + GUTTER) - GUTTER
            mx = gutter_x0 + 10.0 + 4.0 * tr + dx
            if abs(sy - ty) < 1e-9:
                st.segment(sx, sy, tx, ty)
            else:
                st.segment(sx, sy, mx, sy)
                st.segment(mx, sy, mx, ty)
                st.segment(mx, ty, tx, ty)
            st.triangle([(tx, ty - 2.0), (tx, ty + 2.0), (tx + 3.5, ty)])

        # footnote lines (element each), two columns, row-major
        marked = [n for n in sorted(page["nodes"], key=lambda n: n.marker or "")
                  if n.marker]
        for k, node in enumerate(marked):
            dx, dy = offsets()
            fx = MARGIN if k % 2 == 0 else PAGE_W / 2.0 + 10.0
            fy = 86.0 - (k // 2) * 8.0
            st.text("/F1", FOOT_SIZE, fx + dx, fy + dy,
                    f"{node.marker} {node.footnote_text}")

        # link annotation (element)
        page_links = []
        if page["link"]:
            dx, dy = offsets()
            page_links.append((PAGE_W - 38.0 + dx, 290.0 + dy,
                               PAGE_W - 22.0 + dx, 306.0 + dy))
        links.append(page_links)
        streams.append(st.data())

    return _write_pdf(streams, links)


def _write_pdf(streams: list[bytes], links) -> bytes:
    n_pages = len(streams)
    # object numbers: 1 catalog, 2 pages, 3 F1, 4 F2, then page+content pairs
    page_obj = [5 + 2 * i for i in range(n_pages)]
    content_obj = [6 + 2 * i for i in range(n_pages)]

    objects: dict[int, bytes] = {}
    kids = " ".join(f"{num} 0 R" for num in page_obj)
    objects[1] = b"<< /Type /Catalog /Pages 2 0 R >>"
    objects[2] = (f"<< /Type /Pages /Kids [{kids}] /Count {n_pages} >>"
                  ).encode("latin-1")
    objects[3] = b"<< /Type /Font /Subtype /Type1 /BaseFont /Helvetica >>"
    objects[4] = (b"<< /Type /Font /Subtype /Type1 "
                  b"/BaseFont /Helvetica-Bold >>")

    for i in range(n_pages):
        annots = ""
        page_annots = []
        for rect in links[i]:
            target = page_obj[i + 1]
            page_annots.append(
                "<< /Type /Annot /Subtype /Link /Border [0 0 0] "
                f"/Rect [{_fmt(rect[0])} {_fmt(rect[1])} {_fmt(rect[2])} "
                f"{_fmt(rect[3])}] /Dest [{target} 0 R /Fit] >>"
            )
        if page_annots:
            annots = f" /Annots [{' '.join(page_annots)}]"
        objects[page_obj[i]] = (
            "<< /Type /Page /Parent 2 0 R /MediaBox [0 0 "
            f"{PAGE_W:.0f} {PAGE_H:.0f}] /Resources << /Font "
            "<< /F1 3 0 R /F2 4 0 R >> >> "
            f"/Contents {content_obj[i]} 0 R{annots} >>"
        ).encode("latin-1")

    out = bytearray()
    out += b"%PDF-1.4\n%\xe2\xe3\xcf\xd3\n"
    offsets = {}
    max_obj = 4 + 2 * n_pages
    for num in range(1, max_obj + 1):
        offsets[num] = len(out)
        if num in objects:
            out += f"{num} 0 obj\n".encode("latin-1")
            out += objects[num]
            out += b"\nendobj\n"
        else:
            i = content_obj.index(num)
            compressed = zlib.compress(streams[i], 6)
            out += f"{num} 0 obj\n".encode("latin-1")
            out += (f"<< /Length {len(compressed)} /Filter /FlateDecode >>"
                    ).encode("latin-1")
            out += b"\nstream\n"
            out += compressed
            out += b"\nendstream\nendobj\n"

    xref_pos = len(out)
    count = max_obj + 1
    out += f"xref\n0 {count}\n".encode("latin-1")
    out += b"0000000000 65535 f \n"
    for num in range(1, count):
        out += f"{offsets[num]:010d} 00000 n \n".encode("latin-1")
    out += (f"trailer\n<< /Size {count} /Root 1 0 R >>\n"
            f"startxref\n{xref_pos}\n%%EOF\n").encode("latin-1")
    return bytes(out)


# -- classification fixture ------------------------------------------------------


def make_classification_dataset(seed: int, n_docs: int = 500,
                                vocabulary=None) -> LabeledDataset:
    """Synthetic five-class dataset drawn from the class phrase pools."""
    vocabulary = vocabulary or PHRASE_POOLS
    rng = make_rng(seed, 12)
    rows = []
    for i in range(n_docs):
        cls = CLASSES[i % len(CLASSES)]
        pool = vocabulary[cls]
        text = pool[int(rng.integers(0, len(pool)))]
        if rng.random() < 0.8:
            quals = QUALIFIER_POOLS[cls]
            text = text + " " + quals[int(rng.integers(0, len(quals)))]
        rows.append((text, cls))
    return LabeledDataset(rows=rows)
