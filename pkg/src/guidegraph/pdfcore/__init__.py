"""PDF subset parsing and the neutral geometry interchange format."""

from .content import interpret_content_stream
from .document import parse_document
from .geometry import (
    DocumentGeometry,
    FilledPolygon,
    GlyphRun,
    LinkAnnotation,
    PageGeometry,
    Segment,
    export_geometry,
    import_geometry,
)

__all__ = [
    "DocumentGeometry",
    "FilledPolygon",
    "GlyphRun",
    "LinkAnnotation",
    "PageGeometry",
    "Segment",
    "export_geometry",
    "import_geometry",
    "interpret_content_stream",
    "parse_document",
]
