"""Width tables for the fourteen standard PDF fonts.

Widths are in 1/1000 em for character codes 32..126 (the range the
supported document subset uses).  The text faces carry per-glyph metrics;
Symbol and ZapfDingbats get a uniform placeholder width since they never
carry guideline text.  Codes outside the table fall back to the face's
default width.

``advance_width`` and ``line_layout`` are shared with the synthetic
corpus generator: both accumulate advances with the exact arithmetic the
content-stream interpreter uses, so generated ground truth and extracted
geometry agree bit-for-bit.
"""

from __future__ import annotations

from ..errors import UnsupportedFont

# fmt: off
_HELVETICA = [
    278, 278, 355, 556, 556, 889, 667, 222, 333, 333, 389, 584, 278, 333,
    278, 278, 556, 556, 556, 556, 556, 556, 556, 556, 556, 556, 278, 278,
    584, 584, 584, 556, 1015, 667, 667, 722, 722, 667, 611, 778, 722, 278,
    500, 667, 556, 833, 722, 778, 667, 778, 722, 667, 611, 722, 667, 944,
    667, 667, 611, 278, 278, 278, 469, 556, 222, 556, 556, 500, 556, 556,
    278, 556, 556, 222, 222, 500, 222, 833, 556, 556, 556, 556, 333, 500,
    278, 556, 500, 722, 500, 500, 500, 334, 260, 334, 584,
]
_HELVETICA_BOLD = [
    278, 333, 474, 556, 556, 889, 722, 278, 333, 333, 389, 584, 278, 333,
    278, 278, 556, 556, 556, 556, 556, 556, 556, 556, 556, 556, 333, 333,
    584, 584, 584, 611, 975, 722, 722, 722, 722, 667, 611, 778, 722, 278,
    556, 722, 611, 833, 722, 778, 667, 778, 722, 667, 611, 722, 667, 944,
    667, 667, 611, 333, 278, 333, 584, 556, 278, 556, 611, 556, 611, 556,
    333, 611, 611, 278, 278, 556, 278, 889, 611, 611, 611, 611, 389, 556,
    333, 611, 556, 778, 556, 556, 500, 389, 280, 389, 584,
]
_TIMES_ROMAN = [
    250, 333, 408, 500, 500, 833, 778, 333, 333, 333, 500, 564, 250, 333,
    250, 278, 500, 500, 500, 500, 500, 500, 500, 500, 500, 500, 278, 278,
    564, 564, 564, 444, 921, 722, 667, 667, 722, 611, 556, 722, 722, 333,
    389, 722, 611, 889, 722, 722, 556, 722, 667, 556, 611, 722, 722, 944,
    722, 722, 611, 333, 278, 333, 469, 500, 333, 444, 500, 444, 500, 444,
    333, 500, 500, 278, 278, 500, 278, 778, 500, 500, 500, 500, 333, 389,
    278, 500, 500, 722, 500, 500, 444, 480, 200, 480, 541,
]
_TIMES_BOLD = [
    250, 333, 555, 500, 500, 1000, 833, 333, 333, 333, 500, 570, 250, 333,
    250, 278, 500, 500, 500, 500, 500, 500, 500, 500, 500, 500, 333, 333,
    570, 570, 570, 500, 930, 722, 667, 722, 722, 667, 611, 778, 778, 389,
    500, 778, 667, 944, 722, 778, 611, 778, 722, 556, 667, 722, 722, 1000,
    722, 722, 667, 333, 278, 333, 581, 500, 333, 500, 556, 444, 556, 444,
    333, 500, 556, 278, 333, 556, 278, 833, 556, 500, 556, 556, 444, 389,
    333, 556, 500, 722, 500, 500, 444, 394, 220, 394, 520,
]
_TIMES_ITALIC = [
    250, 333, 420, 500, 500, 833, 778, 333, 333, 333, 500, 675, 250, 333,
    250, 278, 500, 500, 500, 500, 500, 500, 500, 500, 500, 500, 333, 333,
    675, 675, 675, 500, 920, 611, 611, 667, 722, 611, 611, 722, 722, 333,
    444, 667, 556, 833, 667, 722, 611, 722, 611, 500, 556, 722, 611, 833,
    611, 556, 556, 389, 278, 389, 422, 500, 333, 500, 500, 444, 500, 444,
    278, 500, 500, 278, 278, 444, 278, 722, 500, 500, 500, 500, 389, 389,
    278, 500, 444, 667, 444, 444, 389, 400, 275, 400, 541,
]
_TIMES_BOLD_ITALIC = [
    250, 389, 555, 500, 500, 833, 778, 333, 333, 333, 500, 570, 250, 333,
    250, 278, 500, 500, 500, 500, 500, 500, 500, 500, 500, 500, 333, 333,
    570, 570, 570, 500, 832, 667, 667, 667, 722, 667, 667, 722, 778, 389,
    500, 667, 611, 889, 722, 722, 611, 722, 667, 556, 611, 722, 667, 889,
    667, 611, 611, 333, 278, 333, 570, 500, 333, 500, 500, 444, 500, 444,
    333, 500, 556, 278, 278, 500, 278, 778, 556, 500, 500, 500, 389, 389,
    278, 556, 444, 667, 500, 444, 389, 348, 220, 348, 570,
]
# fmt: on

_COURIER = [600] * 95
_UNIFORM = [600] * 95


def _table(widths):
    return {code: widths[code - 32] for code in range(32, 127)}


STANDARD_14 = {
    "Helvetica": _table(_HELVETICA),
    "Helvetica-Oblique": _table(_HELVETICA),
    "Helvetica-Bold": _table(_HELVETICA_BOLD),
    "Helvetica-BoldOblique": _table(_HELVETICA_BOLD),
    "Times-Roman": _table(_TIMES_ROMAN),
    "Times-Bold": _table(_TIMES_BOLD),
    "Times-Italic": _table(_TIMES_ITALIC),
    "Times-BoldItalic": _table(_TIMES_BOLD_ITALIC),
    "Courier": _table(_COURIER),
    "Courier-Bold": _table(_COURIER),
    "Courier-Oblique": _table(_COURIER),
    "Courier-BoldOblique": _table(_COURIER),
    "Symbol": _table(_UNIFORM),
    "ZapfDingbats": _table(_UNIFORM),
}

_DEFAULT_WIDTH = {name: 500 for name in STANDARD_14}
_DEFAULT_WIDTH["Courier"] = 600
_DEFAULT_WIDTH["Courier-Bold"] = 600
_DEFAULT_WIDTH["Courier-Oblique"] = 600
_DEFAULT_WIDTH["Courier-BoldOblique"] = 600


def resolve_font(base_font: str, offset=None) -> str:
    """Map a BaseFont name to a standard-14 name, stripping subset prefixes."""
    name = base_font
    if len(name) > 7 and name[6] == "+" and name[:6].isalpha() and name[:6].isupper():
        name = name[7:]
    if name not in STANDARD_14:
        raise UnsupportedFont(base_font, offset)
    return name


def glyph_width(font_name: str, code: int) -> int:
    table = STANDARD_14[font_name]
    return table.get(code, _DEFAULT_WIDTH[font_name])


def advance_width(font_name: str, text: str, font_size: float) -> float:
    """Total advance of ``text``, accumulated like the interpreter's pen."""
    pen = 0.0
    for ch in text:
        w0 = glyph_width(font_name, ord(ch)) / 1000.0
        pen += (w0 * font_size + 0.0 + 0.0) * 1.0
    return pen


def line_layout(font_name: str, text: str, x: float, font_size: float):
    """Word runs of a text line exactly as the interpreter would emit them.

    Returns ``(runs, end_x)`` where runs are ``(word, origin_x, width)``
    with origin and width already quantized to 3 decimals the same way the
    interpreter quantizes glyph-run geometry.
    """
    runs = []
    pen = x
    run_start = None
    run_text = []
    for ch in text:
        w0 = glyph_width(font_name, ord(ch)) / 1000.0
        adv = (w0 * font_size + 0.0 + 0.0) * 1.0
        if ch == " ":
            if run_text:
                runs.append(_close_run(run_text, run_start, pen))
                run_text = []
                run_start = None
        else:
            if not run_text:
                run_start = pen
            run_text.append(ch)
        pen += adv
    if run_text:
        runs.append(_close_run(run_text, run_start, pen))
    return runs, pen


def _close_run(chars, start, pen):
    from ..geom import quant3

    return ("".join(chars), quant3(start), quant3(pen - start))
