"""Pipeline thresholds with embedded defaults and optional TOML override.

Every heuristic threshold used by the layout and graph stages lives here so
a single config file can retune the whole extractor.  The file is optional;
all defaults are embedded.  Example::

    [layout]
    block_gap_em = 0.6

    [graph]
    head_area_max_pt2 = 30.0
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass

try:
    import tomllib  # Python >= 3.11
except ImportError:  # pragma: no cover
    import tomli as tomllib

from .errors import InputError


@dataclass(frozen=True)
class LayoutConfig:
    # Runs whose baselines differ by at most this many ems merge into a line.
    line_merge_em: float = 0.25
    # A horizontal gap wider than this many ems splits a text line.
    line_split_em: float = 2.0
    # Gap above which a space is inserted when joining runs into line text.
    space_join_em: float = 0.18
    # Consecutive lines merge into a block when their baseline gap is within
    # this many ems of the larger font.
    block_gap_em: float = 0.6
    # Minimum horizontal overlap (fraction of the narrower line) for a merge.
    block_overlap_min: float = 0.30
    # Superscript attachment: raise bounds in ems and relative size cap.
    sup_min_raise_em: float = 0.25
    sup_max_raise_em: float = 1.0
    sup_max_font_ratio: float = 0.75
    sup_x_slack_em: float = 1.0
    # Vertical separators: max |dx| and minimum length, points.
    sep_max_dx_pt: float = 0.5
    sep_min_len_pt: float = 6.0
    # Label detection: underline distance below the block and required span.
    underline_gap_pt: float = 4.0
    underline_span_ratio: float = 0.9
    # Label assignment needs this much x-overlap (fraction of node width).
    label_overlap_min: float = 0.50
    # Footnotes: bottom band as a fraction of page height, font-size ratio
    # relative to the page's modal size.
    footnote_band: float = 0.15
    footnote_font_ratio: float = 0.85


@dataclass(frozen=True)
class GraphConfig:
    # Filled triangles up to this area (pt^2) count as arrowheads.
    head_area_max_pt2: float = 30.0
    # Segments chain into a polyline when endpoints are within this distance.
    chain_tol_pt: float = 1.0
    # A polyline endpoint this close to a triangle centroid takes its head.
    head_tol_pt: float = 2.0
    # Node boxes are expanded by this margin when resolving arrow endpoints.
    bbox_expand_pt: float = 5.0
    # A link rectangle overlapping a node box by this fraction of the
    # rectangle's area pins cross-page edges to that node.
    link_overlap_min: float = 0.5


@dataclass(frozen=True)
class ConceptConfig:
    # Minimum 3-gram Jaccard similarity for a lexicon mapping.
    jaccard_threshold: float = 0.7
    # Cap on concurrent remote lookups.
    remote_inflight: int = 4


@dataclass(frozen=True)
class PdfConfig:
    # Horizontal gap (ems) above which glyphs split into separate runs.
    word_gap_em: float = 0.35
    # Chords per flattened Bezier curve.
    curve_chords: int = 8


@dataclass(frozen=True)
class Config:
    layout: LayoutConfig = LayoutConfig()
    graph: GraphConfig = GraphConfig()
    concepts: ConceptConfig = ConceptConfig()
    pdf: PdfConfig = PdfConfig()


DEFAULT_CONFIG = Config()

_SECTIONS = {
    "layout": LayoutConfig,
    "graph": GraphConfig,
    "concepts": ConceptConfig,
    "pdf": PdfConfig,
}


def load_config(path=None) -> Config:
    """Load a TOML config file; missing file or None returns the defaults."""
    if path is None:
        return DEFAULT_CONFIG
    with open(path, "rb") as fh:
        try:
            raw = tomllib.load(fh)
        except tomllib.TOMLDecodeError as exc:
            raise InputError(f"bad config file {path}: {exc}") from exc
    sections = {}
    for name, value in raw.items():
        cls = _SECTIONS.get(name)
        if cls is None:
            raise InputError(f"bad config file {path}: unknown section [{name}]")
        known = {f.name for f in dataclasses.fields(cls)}
        bad = set(value) - known
        if bad:
            raise InputError(
                f"bad config file {path}: unknown key {sorted(bad)[0]!r} in [{name}]"
            )
        sections[name] = cls(**value)
    return Config(**sections)
