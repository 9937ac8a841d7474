"""Small geometry helpers shared by the parser, layout pass, and generator.

Coordinates stay in PDF user space (y grows upward) everywhere.  Bounding
boxes are ``(x0, y0, x1, y1)`` tuples with ``x0 <= x1`` and ``y0 <= y1``.

The text-box conventions (``ASCENT_EM``/``DESCENT_EM``) are shared between
the extractor and the synthetic generator so that ground-truth boxes and
extracted boxes agree bit-for-bit on unperturbed documents.
"""

from __future__ import annotations

# Vertical extent of a glyph run relative to its baseline, in em units.
ASCENT_EM = 1.0
DESCENT_EM = 0.25


def quant3(x: float) -> float:
    """Quantize a coordinate to 3 decimals, normalizing negative zero."""
    return round(float(x), 3) + 0.0


def run_box(origin_x: float, width: float, baseline_y: float, font_size: float):
    """Bounding box of a glyph run under the shared ascent/descent convention."""
    return (
        origin_x,
        baseline_y - DESCENT_EM * font_size,
        origin_x + width,
        baseline_y + ASCENT_EM * font_size,
    )


def box_union(a, b):
    return (min(a[0], b[0]), min(a[1], b[1]), max(a[2], b[2]), max(a[3], b[3]))


def union_all(boxes):
    it = iter(boxes)
    out = next(it)
    for b in it:
        out = box_union(out, b)
    return out


def box_area(b) -> float:
    return max(0.0, b[2] - b[0]) * max(0.0, b[3] - b[1])


def box_intersection_area(a, b) -> float:
    w = min(a[2], b[2]) - max(a[0], b[0])
    h = min(a[3], b[3]) - max(a[1], b[1])
    if w <= 0.0 or h <= 0.0:
        return 0.0
    return w * h


def box_iou(a, b) -> float:
    inter = box_intersection_area(a, b)
    if inter == 0.0:
        return 0.0
    return inter / (box_area(a) + box_area(b) - inter)


def expand_box(b, margin: float):
    return (b[0] - margin, b[1] - margin, b[2] + margin, b[3] + margin)


def contains_point(b, x: float, y: float) -> bool:
    return b[0] <= x <= b[2] and b[1] <= y <= b[3]


def interval_overlap(a0: float, a1: float, b0: float, b1: float) -> float:
    """Length of the overlap of intervals [a0,a1] and [b0,b1]."""
    return max(0.0, min(a1, b1) - max(a0, b0))


def dist(p, q) -> float:
    return ((p[0] - q[0]) ** 2 + (p[1] - q[1]) ** 2) ** 0.5
