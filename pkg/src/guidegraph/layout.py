"""Layout analysis: lines, node blocks, separators, labels, footnotes.

All functions are pure per-page transforms over :class:`PageGeometry`.
The thresholds live in :class:`~guidegraph.config.LayoutConfig`; the
baseline-gap / overlap rules decide block membership, and near-vertical
separator lines veto merges across drawn column boundaries.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

from .config import LayoutConfig
from .errors import DuplicateMarker
from .geom import interval_overlap, run_box, union_all


@dataclass
class TextLine:
    text: str
    bbox: tuple[float, float, float, float]
    baseline_y: float
    font_size: float
    page_index: int
    superscripts: list[tuple[str, int]] = field(default_factory=list)


@dataclass
class NodeBlock:
    id: str
    page_index: int
    bbox: tuple[float, float, float, float]
    lines: list[str]
    label: str | None = None
    footnote_markers: list[str] = field(default_factory=list)

    def joined_text(self) -> str:
        return " ".join(self.lines)


@dataclass(frozen=True)
class Footnote:
    marker: str
    text: str
    page_index: int


@dataclass
class LabelBlock:
    text: str
    bbox: tuple[float, float, float, float]
    page_index: int


@dataclass
class _Line:
    """Working line: member runs plus derived fields."""

    runs: list
    baseline_y: float = 0.0
    font_size: float = 0.0
    bbox: tuple = (0.0, 0.0, 0.0, 0.0)
    text: str = ""
    superscripts: list = field(default_factory=list)

    def finish(self, config: LayoutConfig):
        self.runs.sort(key=lambda r: r.origin[0])
        self.font_size = max(r.font_size for r in self.runs)
        self.baseline_y = self.runs[0].baseline_y
        self.bbox = union_all(
            run_box(r.origin[0], r.width, r.baseline_y, r.font_size)
            for r in self.runs
        )
        parts = [self.runs[0].text]
        for prev, cur in zip(self.runs, self.runs[1:]):
            gap = cur.origin[0] - (prev.origin[0] + prev.width)
            if gap > config.space_join_em * max(prev.font_size, cur.font_size):
                parts.append(" ")
            parts.append(cur.text)
        self.text = "".join(parts)

    def to_text_line(self, page_index: int) -> TextLine:
        return TextLine(
            text=self.text,
            bbox=self.bbox,
            baseline_y=self.baseline_y,
            font_size=self.font_size,
            page_index=page_index,
            superscripts=list(self.superscripts),
        )


def group_lines(page, config: LayoutConfig | None = None) -> list[TextLine]:
    """Group glyph runs into text lines.

    Runs are sorted by (-baseline_y, x); runs within ``line_merge_em`` ems
    of a line's baseline join it, unless the horizontal gap to the line
    exceeds ``line_split_em`` ems (separate columns).  Small raised runs
    attach as superscripts instead of joining the text.
    """
    config = config or LayoutConfig()
    if not page.glyph_runs:
        return []
    runs = sorted(page.glyph_runs, key=lambda r: (-r.baseline_y, r.origin[0]))

    lines: list[_Line] = []
    leftover = []
    for run in runs:
        target = None
        for line in lines:
            if abs(run.baseline_y - line.baseline_y) > config.line_merge_em * max(
                run.font_size, line.font_size
            ):
                continue
            line_x0 = min(r.origin[0] for r in line.runs)
            line_x1 = max(r.origin[0] + r.width for r in line.runs)
            gap = max(run.origin[0] - line_x1,
                      line_x0 - (run.origin[0] + run.width))
            if gap > config.line_split_em * max(run.font_size, line.font_size):
                continue
            target = line
            break
        if target is None:
            lines.append(_Line(runs=[run], baseline_y=run.baseline_y,
                               font_size=run.font_size))
        else:
            target.runs.append(run)
            target.font_size = max(target.font_size, run.font_size)

    # Superscript pass: pull small raised runs out of their own lines and
    # attach them to the closest line below.
    for line in lines:
        line.finish(config)
    main = []
    sup_candidates = []
    for line in lines:
        if len(line.runs) == 1 and _is_marker_sized(line, lines, config):
            sup_candidates.append(line)
        else:
            main.append(line)
    for cand in sup_candidates:
        host = _find_host_line(cand, main, config)
        if host is None:
            main.append(cand)
        else:
            anchor = _anchor_offset(host, cand, config)
            host.superscripts.append((cand.text, anchor))
    for line in main:
        line.superscripts.sort(key=lambda s: (s[1], s[0]))

    main.sort(key=lambda l: (-l.baseline_y, l.bbox[0]))
    return [l.to_text_line(page.page_index) for l in main]


def _is_marker_sized(line: _Line, lines: list[_Line], config) -> bool:
    run = line.runs[0]
    for other in lines:
        if other is line:
            continue
        raise_amt = run.baseline_y - other.baseline_y
        if (config.sup_min_raise_em * other.font_size <= raise_amt
                <= config.sup_max_raise_em * other.font_size
                and run.font_size <= config.sup_max_font_ratio * other.font_size):
            return True
    return False


def _find_host_line(cand: _Line, main: list[_Line], config):
    run = cand.runs[0]
    best = None
    for line in main:
        raise_amt = run.baseline_y - line.baseline_y
        if not (config.sup_min_raise_em * line.font_size <= raise_amt
                <= config.sup_max_raise_em * line.font_size):
            continue
        if run.font_size > config.sup_max_font_ratio * line.font_size:
            continue
        slack = config.sup_x_slack_em * line.font_size
        if not (line.bbox[0] - slack <= run.origin[0] <= line.bbox[2] + slack):
            continue
        if best is None or raise_amt < best[0]:
            best = (raise_amt, line)
    return best[1] if best else None


def _anchor_offset(host: _Line, cand: _Line, config) -> int:
    """Character offset in the host's text where the raised run attaches."""
    x = cand.runs[0].origin[0]
    offset = 0
    text_pos = 0
    for i, run in enumerate(host.runs):
        if i > 0:
            prev = host.runs[i - 1]
            gap = run.origin[0] - (prev.origin[0] + prev.width)
            if gap > config.space_join_em * max(prev.font_size, run.font_size):
                text_pos += 1
        if run.origin[0] + run.width <= x + 1.0:
            offset = text_pos + len(run.text)
        text_pos += len(run.text)
    return offset


def detect_separators(page, config: LayoutConfig | None = None):
    """Near-vertical segments of non-trivial length."""
    config = config or LayoutConfig()
    out = []
    for seg in page.segments:
        dx = abs(seg.p1[0] - seg.p0[0])
        length = ((seg.p1[0] - seg.p0[0]) ** 2 + (seg.p1[1] - seg.p0[1]) ** 2) ** 0.5
        if dx <= config.sep_max_dx_pt and length >= config.sep_min_len_pt:
            out.append(seg)
    return out


def form_blocks(lines, separators, config: LayoutConfig | None = None):
    """Merge vertically close, horizontally overlapping lines into blocks.

    A drawn separator whose x falls strictly inside the two lines' shared
    x-interval and whose y-extent covers both baselines keeps them apart.
    When a line could join more than one block, the smaller baseline gap
    wins; exact ties go to the earlier (upper) block.
    """
    config = config or LayoutConfig()
    ordered = sorted(lines, key=lambda l: (-l.baseline_y, l.bbox[0]))
    blocks: list[list[TextLine]] = []
    for line in ordered:
        candidates = []
        for bi, block in enumerate(blocks):
            last = block[-1]
            gap = last.baseline_y - line.baseline_y
            if gap < 0 or gap > config.block_gap_em * max(last.font_size,
                                                          line.font_size):
                continue
            narrower = min(last.bbox[2] - last.bbox[0], line.bbox[2] - line.bbox[0])
            overlap = interval_overlap(last.bbox[0], last.bbox[2],
                                       line.bbox[0], line.bbox[2])
            if narrower <= 0 or overlap < config.block_overlap_min * narrower:
                continue
            if _separator_between(last, line, separators):
                continue
            candidates.append((gap, bi))
        if candidates:
            candidates.sort(key=lambda c: (c[0], c[1]))
            blocks[candidates[0][1]].append(line)
        else:
            blocks.append([line])
    return [_block_from_lines(bl) for bl in blocks]


def _separator_between(a: TextLine, b: TextLine, separators) -> bool:
    lo = max(a.bbox[0], b.bbox[0])
    hi = min(a.bbox[2], b.bbox[2])
    if hi <= lo:
        return False
    y_lo = min(a.baseline_y, b.baseline_y)
    y_hi = max(a.baseline_y, b.baseline_y)
    for seg in separators:
        x = (seg.p0[0] + seg.p1[0]) / 2.0
        if not (lo < x < hi):
            continue
        s_lo = min(seg.p0[1], seg.p1[1])
        s_hi = max(seg.p0[1], seg.p1[1])
        if s_lo <= y_lo and s_hi >= y_hi:
            return True
    return False


def _block_from_lines(block_lines) -> NodeBlock:
    markers = []
    for line in block_lines:
        for text, _ in line.superscripts:
            if len(text) == 1 and text.islower() and text.isalpha():
                markers.append(text)
    return NodeBlock(
        id="",
        page_index=block_lines[0].page_index,
        bbox=union_all(l.bbox for l in block_lines),
        lines=[l.text for l in block_lines],
        label=None,
        footnote_markers=markers,
    )


def detect_labels(page, blocks, config: LayoutConfig | None = None):
    """Split underlined heading blocks out as labels and assign them.

    A block sitting directly above a horizontal segment spanning >= 90% of
    its width becomes a LabelBlock; each remaining node gets the lowest
    label above it with >= 50% x-overlap.
    """
    config = config or LayoutConfig()
    underlines = [
        seg for seg in page.segments
        if abs(seg.p1[1] - seg.p0[1]) <= config.sep_max_dx_pt
    ]
    labels: list[LabelBlock] = []
    nodes: list[NodeBlock] = []
    for block in blocks:
        if _is_underlined(block, underlines, config):
            labels.append(LabelBlock(
                text=block.joined_text(), bbox=block.bbox,
                page_index=block.page_index,
            ))
        else:
            nodes.append(block)

    # assignment keyed by block identity, covering exactly the node blocks
    assignment: dict[int, str | None] = {}
    for node in nodes:
        width = node.bbox[2] - node.bbox[0]
        best = None
        for label in labels:
            if label.bbox[1] < node.bbox[3]:  # label must sit above the node
                continue
            overlap = interval_overlap(label.bbox[0], label.bbox[2],
                                       node.bbox[0], node.bbox[2])
            narrower = min(width, label.bbox[2] - label.bbox[0])
            if narrower <= 0 or overlap < config.label_overlap_min * narrower:
                continue
            key = (label.bbox[1], label.bbox[0])
            if best is None or key < best[0]:
                best = (key, label)
        assignment[id(node)] = best[1].text if best else None
    return labels, assignment


def _is_underlined(block, underlines, config) -> bool:
    width = block.bbox[2] - block.bbox[0]
    if width <= 0:
        return False
    for seg in underlines:
        y = (seg.p0[1] + seg.p1[1]) / 2.0
        gap = block.bbox[1] - y
        if not (0.0 <= gap <= config.underline_gap_pt):
            continue
        span = interval_overlap(min(seg.p0[0], seg.p1[0]),
                                max(seg.p0[0], seg.p1[0]),
                                block.bbox[0], block.bbox[2])
        if span >= config.underline_span_ratio * width:
            return True
    return False


def detect_footnotes(page, lines, config: LayoutConfig | None = None):
    """Find footnote lines in the bottom band and key them by marker letter.

    Footnote lines use a small font (relative to the page's modal size) and
    start with a single lowercase letter plus a space; continuation lines
    without a marker append to the preceding footnote.
    """
    config = config or LayoutConfig()
    if not lines:
        return []
    mb = page.media_box
    band_top = mb[1] + config.footnote_band * (mb[3] - mb[1])
    modal = _modal_font_size(lines)
    if modal is None:
        return []

    footnotes: list[list] = []  # [marker, [text parts]]
    seen = set()
    ordered = sorted(lines, key=lambda l: (-l.baseline_y, l.bbox[0]))
    for line in ordered:
        if line.baseline_y > band_top:
            continue
        if line.font_size > config.footnote_font_ratio * modal:
            continue
        marker = _footnote_marker(line.text)
        if marker is not None:
            if marker in seen:
                raise DuplicateMarker(marker, page.page_index)
            seen.add(marker)
            footnotes.append([marker, [line.text[2:]]])
        elif footnotes:
            footnotes[-1][1].append(line.text)
    return [
        Footnote(marker=m, text=" ".join(parts), page_index=page.page_index)
        for m, parts in footnotes
    ]


def footnote_band_lines(page, lines, config: LayoutConfig | None = None):
    """The subset of ``lines`` that detect_footnotes would consume."""
    config = config or LayoutConfig()
    mb = page.media_box
    band_top = mb[1] + config.footnote_band * (mb[3] - mb[1])
    modal = _modal_font_size(lines)
    if modal is None:
        return []
    out = []
    started = False
    for line in sorted(lines, key=lambda l: (-l.baseline_y, l.bbox[0])):
        if line.baseline_y > band_top:
            continue
        if line.font_size > config.footnote_font_ratio * modal:
            continue
        if _footnote_marker(line.text) is not None:
            started = True
            out.append(line)
        elif started:
            out.append(line)
    return out


def _footnote_marker(text: str):
    if (len(text) >= 2 and text[0].isalpha() and text[0].islower()
            and text[0].isascii() and text[1] == " "):
        return text[0]
    return None


def _modal_font_size(lines):
    counts = Counter(l.font_size for l in lines)
    if not counts:
        return None
    # most frequent size over text lines; ties prefer the larger face
    return max(counts.items(), key=lambda kv: (kv[1], kv[0]))[0]
