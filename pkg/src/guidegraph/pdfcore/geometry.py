"""Page geometry model and its canonical interchange serialization.

The interchange format lets externally extracted geometry feed the
pipeline: a JSON document with sorted keys and all coordinates printed
with exactly three decimals, so two exports of the same document are
byte-identical and import/export round-trips are the identity on
documents whose coordinates are 3-decimal quantized (which
``parse_document`` guarantees).
"""

from __future__ import annotations

import hashlib
import io
import json
from dataclasses import dataclass, field

from ..errors import SchemaViolation
from ..geom import quant3


@dataclass(frozen=True)
class GlyphRun:
    text: str
    origin: tuple[float, float]
    width: float
    font_size: float
    baseline_y: float
    page_index: int


@dataclass(frozen=True)
class Segment:
    p0: tuple[float, float]
    p1: tuple[float, float]
    stroke_width: float = 1.0


@dataclass(frozen=True)
class FilledPolygon:
    vertices: tuple[tuple[float, float], ...]
    is_triangle: bool


@dataclass(frozen=True)
class LinkAnnotation:
    rect: tuple[float, float, float, float]
    target_page: int


@dataclass
class PageGeometry:
    page_index: int
    media_box: tuple[float, float, float, float]
    glyph_runs: list[GlyphRun] = field(default_factory=list)
    segments: list[Segment] = field(default_factory=list)
    polygons: list[FilledPolygon] = field(default_factory=list)
    links: list[LinkAnnotation] = field(default_factory=list)


@dataclass
class DocumentGeometry:
    pages: list[PageGeometry]
    source_digest: str = ""


def digest_bytes(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


# --- export ---------------------------------------------------------------

def _n(x: float) -> str:
    s = f"{x:.3f}"
    return "0.000" if s == "-0.000" else s


def _pt(p) -> str:
    return f"[{_n(p[0])}, {_n(p[1])}]"


def _box(b) -> str:
    return f"[{_n(b[0])}, {_n(b[1])}, {_n(b[2])}, {_n(b[3])}]"


def export_geometry(doc: DocumentGeometry) -> str:
    """Serialize to the canonical interchange text (stable across runs)."""
    out = io.StringIO()
    out.write("{\n")
    out.write('  "pages": [\n')
    for pi, page in enumerate(doc.pages):
        out.write("    {\n")
        out.write(f'      "glyph_runs": [\n')
        for gi, g in enumerate(page.glyph_runs):
            out.write(
                "        {"
                f'"baseline_y": {_n(g.baseline_y)}, '
                f'"font_size": {_n(g.font_size)}, '
                f'"origin": {_pt(g.origin)}, '
                f'"text": {json.dumps(g.text)}, '
                f'"width": {_n(g.width)}'
                "}" + ("," if gi + 1 < len(page.glyph_runs) else "") + "\n"
            )
        out.write("      ],\n")
        out.write(f'      "links": [\n')
        for li, l in enumerate(page.links):
            out.write(
                "        {"
                f'"rect": {_box(l.rect)}, "target_page": {l.target_page}'
                "}" + ("," if li + 1 < len(page.links) else "") + "\n"
            )
        out.write("      ],\n")
        out.write(f'      "media_box": {_box(page.media_box)},\n')
        out.write(f'      "page_index": {page.page_index},\n')
        out.write(f'      "polygons": [\n')
        for qi, p in enumerate(page.polygons):
            verts = ", ".join(_pt(v) for v in p.vertices)
            out.write(
                "        {"
                f'"is_triangle": {json.dumps(p.is_triangle)}, '
                f'"vertices": [{verts}]'
                "}" + ("," if qi + 1 < len(page.polygons) else "") + "\n"
            )
        out.write("      ],\n")
        out.write(f'      "segments": [\n')
        for si, s in enumerate(page.segments):
            out.write(
                "        {"
                f'"p0": {_pt(s.p0)}, "p1": {_pt(s.p1)}, '
                f'"stroke_width": {_n(s.stroke_width)}'
                "}" + ("," if si + 1 < len(page.segments) else "") + "\n"
            )
        out.write("      ]\n")
        out.write("    }" + ("," if pi + 1 < len(doc.pages) else "") + "\n")
    out.write("  ],\n")
    out.write(f'  "source_digest": {json.dumps(doc.source_digest)}\n')
    out.write("}\n")
    return out.getvalue()


# --- import ---------------------------------------------------------------

def _expect(cond, path, message):
    if not cond:
        raise SchemaViolation(path, message)


def _coord(value, path) -> float:
    _expect(isinstance(value, (int, float)) and not isinstance(value, bool), path,
            "expected a number")
    return quant3(value)


def _point(value, path):
    _expect(isinstance(value, list) and len(value) == 2, path, "expected [x, y]")
    return (_coord(value[0], f"{path}[0]"), _coord(value[1], f"{path}[1]"))


def _bbox(value, path):
    _expect(isinstance(value, list) and len(value) == 4, path,
            "expected [x0, y0, x1, y1]")
    return tuple(_coord(value[i], f"{path}[{i}]") for i in range(4))


def _get(obj, key, path):
    _expect(isinstance(obj, dict), path, "expected an object")
    _expect(key in obj, f"{path}.{key}", "missing key")
    return obj[key]


def import_geometry(text: str) -> DocumentGeometry:
    """Parse interchange text back into a DocumentGeometry."""
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaViolation("$", f"not valid JSON: {exc.msg}") from exc
    digest = _get(raw, "source_digest", "$")
    _expect(isinstance(digest, str), "source_digest", "expected a string")
    raw_pages = _get(raw, "pages", "$")
    _expect(isinstance(raw_pages, list), "pages", "expected an array")

    pages = []
    for i, rp in enumerate(raw_pages):
        path = f"pages[{i}]"
        page_index = _get(rp, "page_index", path)
        _expect(isinstance(page_index, int) and not isinstance(page_index, bool),
                f"{path}.page_index", "expected an integer")
        _expect(page_index == i, f"{path}.page_index",
                f"expected contiguous page index {i}")
        media_box = _bbox(_get(rp, "media_box", path), f"{path}.media_box")

        runs = []
        raw_runs = _get(rp, "glyph_runs", path)
        _expect(isinstance(raw_runs, list), f"{path}.glyph_runs", "expected an array")
        for j, rr in enumerate(raw_runs):
            rpath = f"{path}.glyph_runs[{j}]"
            text_value = _get(rr, "text", rpath)
            _expect(isinstance(text_value, str) and text_value, f"{rpath}.text",
                    "expected a non-empty string")
            width = _coord(_get(rr, "width", rpath), f"{rpath}.width")
            _expect(width >= 0.0, f"{rpath}.width", "expected a non-negative number")
            font_size = _coord(_get(rr, "font_size", rpath), f"{rpath}.font_size")
            _expect(font_size > 0.0, f"{rpath}.font_size", "expected a positive number")
            runs.append(GlyphRun(
                text=text_value,
                origin=_point(_get(rr, "origin", rpath), f"{rpath}.origin"),
                width=width,
                font_size=font_size,
                baseline_y=_coord(_get(rr, "baseline_y", rpath), f"{rpath}.baseline_y"),
                page_index=i,
            ))

        segments = []
        raw_segs = _get(rp, "segments", path)
        _expect(isinstance(raw_segs, list), f"{path}.segments", "expected an array")
        for j, rs in enumerate(raw_segs):
            spath = f"{path}.segments[{j}]"
            p0 = _point(_get(rs, "p0", spath), f"{spath}.p0")
            p1 = _point(_get(rs, "p1", spath), f"{spath}.p1")
            _expect(p0 != p1, f"{spath}.p1", "degenerate segment")
            segments.append(Segment(
                p0=p0, p1=p1,
                stroke_width=_coord(_get(rs, "stroke_width", spath),
                                    f"{spath}.stroke_width"),
            ))

        polygons = []
        raw_polys = _get(rp, "polygons", path)
        _expect(isinstance(raw_polys, list), f"{path}.polygons", "expected an array")
        for j, rq in enumerate(raw_polys):
            qpath = f"{path}.polygons[{j}]"
            raw_verts = _get(rq, "vertices", qpath)
            _expect(isinstance(raw_verts, list) and len(raw_verts) >= 3,
                    f"{qpath}.vertices", "expected at least 3 vertices")
            verts = tuple(_point(v, f"{qpath}.vertices[{vi}]")
                          for vi, v in enumerate(raw_verts))
            is_triangle = _get(rq, "is_triangle", qpath)
            _expect(isinstance(is_triangle, bool), f"{qpath}.is_triangle",
                    "expected a boolean")
            _expect(is_triangle == (len(verts) == 3), f"{qpath}.is_triangle",
                    "inconsistent with vertex count")
            polygons.append(FilledPolygon(vertices=verts, is_triangle=is_triangle))

        links = []
        raw_links = _get(rp, "links", path)
        _expect(isinstance(raw_links, list), f"{path}.links", "expected an array")
        for j, rl in enumerate(raw_links):
            lpath = f"{path}.links[{j}]"
            target = _get(rl, "target_page", lpath)
            _expect(isinstance(target, int) and not isinstance(target, bool),
                    f"{lpath}.target_page", "expected an integer")
            _expect(0 <= target < len(raw_pages), f"{lpath}.target_page",
                    "target page out of range")
            links.append(LinkAnnotation(
                rect=_bbox(_get(rl, "rect", lpath), f"{lpath}.rect"),
                target_page=target,
            ))

        pages.append(PageGeometry(
            page_index=i, media_box=media_box, glyph_runs=runs,
            segments=segments, polygons=polygons, links=links,
        ))

    return DocumentGeometry(pages=pages, source_digest=digest)
