"""Whole-document parsing: page tree walk, fonts, contents, annotations."""

from __future__ import annotations

from ..config import PdfConfig
from ..errors import BrokenXref
from ..geom import quant3
from . import fonts
from .content import interpret_content_stream
from .geometry import DocumentGeometry, LinkAnnotation, PageGeometry, digest_bytes
from .syntax import IndirectRef, PdfFile, StreamObject


def parse_document(data: bytes, config: PdfConfig | None = None,
                   warning_sink: list | None = None) -> DocumentGeometry:
    """Parse PDF bytes into per-page geometry.

    Deterministic: identical bytes produce an identical DocumentGeometry
    (including the source digest).  ``warning_sink`` collects skipped
    constructs from the content interpreter.
    """
    pdf = PdfFile(data)
    catalog = pdf.resolve(pdf.trailer["Root"])
    if not isinstance(catalog, dict) or "Pages" not in catalog:
        raise BrokenXref("document catalog has no /Pages")

    page_items = _collect_pages(pdf, catalog["Pages"])
    ref_to_index = {ref: i for i, (ref, _, _) in enumerate(page_items)}

    pages = []
    for index, (ref, node, inherited) in enumerate(page_items):
        media_box = _resolve_media_box(pdf, node, inherited)
        resources = _resolve_fonts(pdf, node, inherited)
        stream = _page_content(pdf, node)
        warnings = warning_sink if warning_sink is not None else []
        page = interpret_content_stream(stream, resources, media_box, index,
                                        config=config, warnings=warnings)
        page.links = _page_links(pdf, node, ref_to_index)
        pages.append(page)

    return DocumentGeometry(pages=pages, source_digest=digest_bytes(data))


def _collect_pages(pdf: PdfFile, root_ref):
    """Depth-first walk of the page tree, carrying inherited attributes."""
    items = []

    def walk(ref, inherited):
        node = pdf.resolve(ref)
        if not isinstance(node, dict):
            raise BrokenXref("page tree node is not a dictionary")
        own = dict(inherited)
        for key in ("MediaBox", "Resources"):
            if key in node:
                own[key] = node[key]
        node_type = node.get("Type")
        if node_type == "Pages" or (node_type is None and "Kids" in node):
            for kid in pdf.resolve(node.get("Kids", [])):
                walk(kid, own)
        else:
            items.append((ref if isinstance(ref, IndirectRef) else None, node, own))

    walk(root_ref, {})
    if not items:
        raise BrokenXref("document has no pages")
    return items


def _resolve_media_box(pdf, node, inherited):
    raw = pdf.resolve(node.get("MediaBox", inherited.get("MediaBox")))
    if not (isinstance(raw, list) and len(raw) == 4):
        raise BrokenXref("page has no usable /MediaBox")
    x0, y0, x1, y1 = (quant3(pdf.resolve(v)) for v in raw)
    return (min(x0, x1), min(y0, y1), max(x0, x1), max(y0, y1))


def _resolve_fonts(pdf, node, inherited):
    """Map font resource names to standard-14 font names."""
    resources = pdf.resolve(node.get("Resources", inherited.get("Resources"))) or {}
    font_dict = pdf.resolve(resources.get("Font")) or {}
    out = {}
    for res_name, font_ref in font_dict.items():
        font = pdf.resolve(font_ref)
        if not isinstance(font, dict):
            continue
        base = font.get("BaseFont")
        if base is None:
            continue
        out[str(res_name)] = fonts.resolve_font(str(base))
    return out


def _page_content(pdf, node) -> bytes:
    contents = pdf.resolve(node.get("Contents"))
    if contents is None:
        return b""
    if isinstance(contents, StreamObject):
        return pdf.decode_stream(contents)
    if isinstance(contents, list):
        parts = []
        for ref in contents:
            obj = pdf.resolve(ref)
            if isinstance(obj, StreamObject):
                parts.append(pdf.decode_stream(obj))
        return b"\n".join(parts)
    return b""


def _page_links(pdf, node, ref_to_index):
    links = []
    for annot_ref in pdf.resolve(node.get("Annots")) or []:
        annot = pdf.resolve(annot_ref)
        if not isinstance(annot, dict) or annot.get("Subtype") != "Link":
            continue
        rect = pdf.resolve(annot.get("Rect"))
        if not (isinstance(rect, list) and len(rect) == 4):
            continue
        x0, y0, x1, y1 = (quant3(pdf.resolve(v)) for v in rect)
        rect = (min(x0, x1), min(y0, y1), max(x0, x1), max(y0, y1))
        target = _link_target(pdf, annot, ref_to_index)
        if target is not None:
            links.append(LinkAnnotation(rect=rect, target_page=target))
    return links


def _link_target(pdf, annot, ref_to_index):
    dest = annot.get("Dest")
    if dest is None:
        action = pdf.resolve(annot.get("A"))
        if isinstance(action, dict) and action.get("S") == "GoTo":
            dest = action.get("D")
    dest = pdf.resolve(dest)
    if not (isinstance(dest, list) and dest):
        return None
    page = dest[0]
    if isinstance(page, IndirectRef):
        return ref_to_index.get(page)
    if isinstance(page, (int, float)) and not isinstance(page, bool):
        idx = int(page)
        return idx if 0 <= idx < len(ref_to_index) else None
    return None
