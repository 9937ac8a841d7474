"""Content-stream interpreter for the supported operator subset.

Text-show, path-construction, path-painting, and graphics-state operators
are interpreted; unrecognized operators are skipped and counted in the
caller-supplied warnings list.  All emitted geometry is in device space
(user space transformed by the CTM) and quantized to 3 decimals.
"""

from __future__ import annotations

from ..config import PdfConfig
from ..errors import UnbalancedStateStack
from ..geom import quant3
from . import fonts
from .geometry import FilledPolygon, GlyphRun, PageGeometry, Segment
from .syntax import Lexer, Name

IDENTITY = (1.0, 0.0, 0.0, 1.0, 0.0, 0.0)


def mat_mul(m, n):
    """Matrix product m x n for row-vector PDF matrices (a b c d e f)."""
    a1, b1, c1, d1, e1, f1 = m
    a2, b2, c2, d2, e2, f2 = n
    return (
        a1 * a2 + b1 * c2,
        a1 * b2 + b1 * d2,
        c1 * a2 + d1 * c2,
        c1 * b2 + d1 * d2,
        e1 * a2 + f1 * c2 + e2,
        e1 * b2 + f1 * d2 + f2,
    )


def mat_apply(m, x, y):
    a, b, c, d, e, f = m
    return (a * x + c * y + e, b * x + d * y + f)


def translation(tx, ty):
    return (1.0, 0.0, 0.0, 1.0, tx, ty)


class _GraphicsState:
    __slots__ = ("ctm", "line_width")

    def __init__(self, ctm=IDENTITY, line_width=1.0):
        self.ctm = ctm
        self.line_width = line_width

    def copy(self):
        return _GraphicsState(self.ctm, self.line_width)


class _RunAccumulator:
    """Groups consecutive glyphs into word-like runs.

    A run closes on a space glyph, a baseline change, a font change, or a
    horizontal gap beyond ``word_gap_em`` ems of the device font size.
    """

    def __init__(self, page_index, word_gap_em, sink):
        self.page_index = page_index
        self.word_gap_em = word_gap_em
        self.sink = sink
        self._open = False
        self._chars = []
        self._start = (0.0, 0.0)
        self._pen_x = 0.0
        self._font_size = 0.0

    def add(self, ch, origin, advance_x, font_size):
        if self._open:
            same_line = abs(origin[1] - self._start[1]) < 1e-6
            gap = origin[0] - self._pen_x
            if (not same_line or font_size != self._font_size
                    or gap > self.word_gap_em * self._font_size
                    or gap < -0.5 * self._font_size):
                self.flush()
        if ch == " ":
            if self._open:
                self.flush()
            return
        if not self._open:
            self._open = True
            self._chars = []
            self._start = origin
            self._font_size = font_size
        self._chars.append(ch)
        self._pen_x = origin[0] + advance_x

    def flush(self):
        if self._open and self._chars:
            self.sink(GlyphRun(
                text="".join(self._chars),
                origin=(quant3(self._start[0]), quant3(self._start[1])),
                width=quant3(self._pen_x - self._start[0]),
                font_size=quant3(self._font_size),
                baseline_y=quant3(self._start[1]),
                page_index=self.page_index,
            ))
        self._open = False
        self._chars = []


class ContentInterpreter:
    def __init__(self, resources, media_box, page_index, config=None, warnings=None):
        self.resources = resources  # font resource name -> standard-14 font name
        self.media_box = media_box
        self.page_index = page_index
        self.config = config or PdfConfig()
        self.warnings = warnings if warnings is not None else []

        self.gs = _GraphicsState()
        self.gs_stack = []
        self.runs: list[GlyphRun] = []
        self.segments: list[Segment] = []
        self.polygons: list[FilledPolygon] = []
        self._acc = _RunAccumulator(page_index, self.config.word_gap_em,
                                    self.runs.append)

        # text state
        self.font_name = None
        self.font_size = 0.0
        self.char_spacing = 0.0
        self.word_spacing = 0.0
        self.h_scale = 1.0
        self.leading = 0.0
        self.rise = 0.0
        self.tm = IDENTITY
        self.tlm = IDENTITY

        # current path: list of (points, closed)
        self.path = []
        self._subpath = None

    # -- main loop -----------------------------------------------------------

    def run(self, stream: bytes) -> PageGeometry:
        lex = Lexer(stream)
        operands = []
        while True:
            tok = lex.next_token()
            if tok is None:
                break
            kind, value, offset = tok
            if kind in ("int", "real"):
                operands.append(float(value))
            elif kind == "string":
                operands.append(value)
            elif kind == "name":
                operands.append(value)
            elif kind == "array_open":
                operands.append(self._read_array(lex))
            elif kind == "dict_open":
                operands.append(self._read_dict(lex))
            elif kind in ("array_close", "dict_close"):
                operands = []
            else:  # keyword = operator
                op = value.decode("latin-1")
                if op == "BI":
                    self._skip_inline_image(lex)
                    self.warnings.append("skipped inline image (BI)")
                    operands = []
                    continue
                self._execute(op, operands, offset)
                operands = []
        self._acc.flush()
        return PageGeometry(
            page_index=self.page_index,
            media_box=self.media_box,
            glyph_runs=self.runs,
            segments=self.segments,
            polygons=self.polygons,
            links=[],
        )

    def _read_array(self, lex):
        out = []
        while True:
            tok = lex.next_token()
            if tok is None or tok[0] == "array_close":
                return out
            kind, value, _ = tok
            if kind in ("int", "real"):
                out.append(float(value))
            elif kind in ("string", "name"):
                out.append(value)
            elif kind == "array_open":
                out.append(self._read_array(lex))
            elif kind == "dict_open":
                out.append(self._read_dict(lex))

    def _read_dict(self, lex):
        out = {}
        key = None
        while True:
            tok = lex.next_token()
            if tok is None or tok[0] == "dict_close":
                return out
            kind, value, _ = tok
            if key is None:
                key = value if kind == "name" else str(value)
            else:
                if kind == "array_open":
                    value = self._read_array(lex)
                elif kind == "dict_open":
                    value = self._read_dict(lex)
                out[key] = value
                key = None

    def _skip_inline_image(self, lex):
        data = lex.data
        idx = data.find(b"EI", lex.pos)
        lex.pos = len(data) if idx < 0 else idx + 2

    # -- operator dispatch ----------------------------------------------------

    def _execute(self, op, args, offset):
        handler = _HANDLERS.get(op)
        if handler is None:
            self.warnings.append(f"unrecognized operator {op!r}")
            return
        handler(self, args, offset)

    # graphics state

    def _op_q(self, args, offset):
        self.gs_stack.append(self.gs.copy())

    def _op_Q(self, args, offset):
        if not self.gs_stack:
            raise UnbalancedStateStack("Q without matching q", offset)
        self.gs = self.gs_stack.pop()

    def _op_cm(self, args, offset):
        if len(args) == 6:
            self.gs.ctm = mat_mul(tuple(args), self.gs.ctm)

    def _op_w(self, args, offset):
        if args:
            self.gs.line_width = args[-1]

    # text object and state

    def _op_BT(self, args, offset):
        self.tm = IDENTITY
        self.tlm = IDENTITY

    def _op_ET(self, args, offset):
        self._acc.flush()

    def _op_Tf(self, args, offset):
        if len(args) >= 2 and isinstance(args[0], Name):
            font = self.resources.get(str(args[0]))
            if font is None:
                self.warnings.append(f"unknown font resource {args[0]!r}")
            self.font_name = font
            self.font_size = float(args[1])

    def _op_Tc(self, args, offset):
        if args:
            self.char_spacing = args[-1]

    def _op_Tw(self, args, offset):
        if args:
            self.word_spacing = args[-1]

    def _op_Tz(self, args, offset):
        if args:
            self.h_scale = args[-1] / 100.0

    def _op_TL(self, args, offset):
        if args:
            self.leading = args[-1]

    def _op_Ts(self, args, offset):
        if args:
            self.rise = args[-1]

    def _op_Tr(self, args, offset):
        pass  # render mode has no effect on extracted geometry

    def _op_Td(self, args, offset):
        if len(args) == 2:
            self.tlm = mat_mul(translation(args[0], args[1]), self.tlm)
            self.tm = self.tlm

    def _op_TD(self, args, offset):
        if len(args) == 2:
            self.leading = -args[1]
            self._op_Td(args, offset)

    def _op_Tm(self, args, offset):
        if len(args) == 6:
            self.tlm = tuple(args)
            self.tm = self.tlm

    def _op_Tstar(self, args, offset):
        self.tlm = mat_mul(translation(0.0, -self.leading), self.tlm)
        self.tm = self.tlm

    # text showing

    def _show(self, raw: bytes):
        if self.font_name is None or self.font_size <= 0:
            return
        m = mat_mul(self.tm, self.gs.ctm)
        # device font size from the y-axis image of the combined matrix
        fs_dev = self.font_size * (m[2] * m[2] + m[3] * m[3]) ** 0.5
        for code in raw:
            ch = chr(code)
            origin = mat_apply(m, 0.0, self.rise)
            w0 = fonts.glyph_width(self.font_name, code) / 1000.0
            tx = (w0 * self.font_size + self.char_spacing
                  + (self.word_spacing if code == 32 else 0.0)) * self.h_scale
            adv = mat_apply(m, tx, self.rise)
            self._acc.add(ch, origin, adv[0] - origin[0], fs_dev)
            self.tm = mat_mul(translation(tx, 0.0), self.tm)
            m = mat_mul(self.tm, self.gs.ctm)

    def _op_Tj(self, args, offset):
        if args and isinstance(args[-1], bytes):
            self._show(args[-1])

    def _op_TJ(self, args, offset):
        if not args or not isinstance(args[-1], list):
            return
        for item in args[-1]:
            if isinstance(item, bytes):
                self._show(item)
            elif isinstance(item, float):
                tx = (-item / 1000.0) * self.font_size * self.h_scale
                self.tm = mat_mul(translation(tx, 0.0), self.tm)

    def _op_quote(self, args, offset):
        self._op_Tstar([], offset)
        self._op_Tj(args, offset)

    def _op_dquote(self, args, offset):
        if len(args) == 3 and isinstance(args[2], bytes):
            self.word_spacing = args[0]
            self.char_spacing = args[1]
            self._op_quote([args[2]], offset)

    # path construction

    def _start_subpath(self, x, y):
        p = mat_apply(self.gs.ctm, x, y)
        self._subpath = {"points": [p], "closed": False}
        self.path.append(self._subpath)

    def _op_m(self, args, offset):
        if len(args) == 2:
            self._start_subpath(args[0], args[1])

    def _op_l(self, args, offset):
        if len(args) == 2 and self._subpath is not None:
            self._subpath["points"].append(mat_apply(self.gs.ctm, args[0], args[1]))

    def _op_c(self, args, offset):
        if len(args) == 6 and self._subpath is not None:
            p0 = self._subpath["points"][-1]
            d1 = mat_apply(self.gs.ctm, args[0], args[1])
            d2 = mat_apply(self.gs.ctm, args[2], args[3])
            d3 = mat_apply(self.gs.ctm, args[4], args[5])
            self._bezier_device(p0, d1, d2, d3)

    def _op_v(self, args, offset):
        if len(args) == 4 and self._subpath is not None:
            p0 = self._subpath["points"][-1]
            # first control point coincides with the current point
            d1 = mat_apply(self.gs.ctm, args[0], args[1])
            d2 = mat_apply(self.gs.ctm, args[2], args[3])
            self._bezier_device(p0, p0, d1, d2)

    def _op_y(self, args, offset):
        if len(args) == 4 and self._subpath is not None:
            p0 = self._subpath["points"][-1]
            d1 = mat_apply(self.gs.ctm, args[0], args[1])
            d2 = mat_apply(self.gs.ctm, args[2], args[3])
            self._bezier_device(p0, d1, d2, d2)

    def _bezier_device(self, p0, d1, d2, d3):
        k = self.config.curve_chords
        for i in range(1, k + 1):
            t = i / k
            mt = 1.0 - t
            x = (mt ** 3 * p0[0] + 3 * mt * mt * t * d1[0]
                 + 3 * mt * t * t * d2[0] + t ** 3 * d3[0])
            y = (mt ** 3 * p0[1] + 3 * mt * mt * t * d1[1]
                 + 3 * mt * t * t * d2[1] + t ** 3 * d3[1])
            self._subpath["points"].append((x, y))

    def _op_h(self, args, offset):
        if self._subpath is not None:
            self._subpath["closed"] = True

    def _op_re(self, args, offset):
        if len(args) == 4:
            x, y, w, h = args
            self._start_subpath(x, y)
            self._subpath["points"].append(mat_apply(self.gs.ctm, x + w, y))
            self._subpath["points"].append(mat_apply(self.gs.ctm, x + w, y + h))
            self._subpath["points"].append(mat_apply(self.gs.ctm, x, y + h))
            self._subpath["closed"] = True

    # path painting

    def _emit_stroke(self):
        width = quant3(self.gs.line_width)
        for sp in self.path:
            pts = sp["points"]
            pairs = list(zip(pts, pts[1:]))
            if sp["closed"] and len(pts) > 2:
                pairs.append((pts[-1], pts[0]))
            for p, q in pairs:
                p = (quant3(p[0]), quant3(p[1]))
                q = (quant3(q[0]), quant3(q[1]))
                if p != q:
                    self.segments.append(Segment(p0=p, p1=q, stroke_width=width))

    def _emit_fill(self):
        for sp in self.path:
            pts = [(quant3(x), quant3(y)) for x, y in sp["points"]]
            if len(pts) > 1 and pts[0] == pts[-1]:
                pts = pts[:-1]
            if len(pts) < 3 or abs(_area(pts)) < 1e-9:
                continue
            self.polygons.append(FilledPolygon(vertices=tuple(pts),
                                               is_triangle=len(pts) == 3))

    def _clear_path(self):
        self.path = []
        self._subpath = None

    def _op_S(self, args, offset):
        self._emit_stroke()
        self._clear_path()

    def _op_s(self, args, offset):
        self._op_h(args, offset)
        self._op_S(args, offset)

    def _op_f(self, args, offset):
        self._emit_fill()
        self._clear_path()

    def _op_B(self, args, offset):
        self._emit_fill()
        self._emit_stroke()
        self._clear_path()

    def _op_b(self, args, offset):
        self._op_h(args, offset)
        self._op_B(args, offset)

    def _op_n(self, args, offset):
        self._clear_path()

    def _op_W(self, args, offset):
        pass  # clipping does not affect extracted geometry


def _area(pts):
    total = 0.0
    for i, (x0, y0) in enumerate(pts):
        x1, y1 = pts[(i + 1) % len(pts)]
        total += x0 * y1 - x1 * y0
    return total / 2.0


_HANDLERS = {
    "q": ContentInterpreter._op_q,
    "Q": ContentInterpreter._op_Q,
    "cm": ContentInterpreter._op_cm,
    "w": ContentInterpreter._op_w,
    "BT": ContentInterpreter._op_BT,
    "ET": ContentInterpreter._op_ET,
    "Tf": ContentInterpreter._op_Tf,
    "Tc": ContentInterpreter._op_Tc,
    "Tw": ContentInterpreter._op_Tw,
    "Tz": ContentInterpreter._op_Tz,
    "TL": ContentInterpreter._op_TL,
    "Ts": ContentInterpreter._op_Ts,
    "Tr": ContentInterpreter._op_Tr,
    "Td": ContentInterpreter._op_Td,
    "TD": ContentInterpreter._op_TD,
    "Tm": ContentInterpreter._op_Tm,
    "T*": ContentInterpreter._op_Tstar,
    "Tj": ContentInterpreter._op_Tj,
    "TJ": ContentInterpreter._op_TJ,
    "'": ContentInterpreter._op_quote,
    '"': ContentInterpreter._op_dquote,
    "m": ContentInterpreter._op_m,
    "l": ContentInterpreter._op_l,
    "c": ContentInterpreter._op_c,
    "v": ContentInterpreter._op_v,
    "y": ContentInterpreter._op_y,
    "h": ContentInterpreter._op_h,
    "re": ContentInterpreter._op_re,
    "S": ContentInterpreter._op_S,
    "s": ContentInterpreter._op_s,
    "f": ContentInterpreter._op_f,
    "F": ContentInterpreter._op_f,
    "f*": ContentInterpreter._op_f,
    "B": ContentInterpreter._op_B,
    "B*": ContentInterpreter._op_B,
    "b": ContentInterpreter._op_b,
    "b*": ContentInterpreter._op_b,
    "n": ContentInterpreter._op_n,
    "W": ContentInterpreter._op_W,
    "W*": ContentInterpreter._op_W,
}


def interpret_content_stream(stream, resources, media_box, page_index,
                             config=None, warnings=None) -> PageGeometry:
    """Interpret one decoded content stream into page geometry.

    ``warnings`` (optional list) collects one entry per skipped construct.
    """
    interp = ContentInterpreter(resources, media_box, page_index,
                                config=config, warnings=warnings)
    return interp.run(stream)
