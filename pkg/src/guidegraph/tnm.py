"""Cancer stage and T/N/M score extraction from node text.

Pattern definitions: stages are the roman numerals I..IV with an optional
single A/B/C suffix; T carries a digit 0..4 with an optional a/b/c; N a
digit 0..3; M a digit 0/1 with an optional a/b/c.  Matching is
case-sensitive at word boundaries with no context filtering, so "IV" in
"IV contrast" is a (documented) match; consumers may post-filter.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, replace

STAGE_PATTERN = re.compile(r"\b(?:IV|III|II|I)[ABC]?\b")
T_PATTERN = re.compile(r"\bT[0-4][abc]?\b")
N_PATTERN = re.compile(r"\bN[0-3]\b")
M_PATTERN = re.compile(r"\bM[01][abc]?\b")

_AXIS_PATTERNS = (("T", T_PATTERN), ("N", N_PATTERN), ("M", M_PATTERN))


@dataclass(frozen=True)
class StageMention:
    value: str
    span: tuple[int, int]


@dataclass(frozen=True)
class TnmMention:
    axis: str
    value: str
    span: tuple[int, int]


def extract_mentions(text: str):
    """All stage and TNM mentions, each list sorted by span start."""
    stages = [
        StageMention(value=m.group(0), span=m.span())
        for m in STAGE_PATTERN.finditer(text)
    ]
    tnm = []
    for axis, pattern in _AXIS_PATTERNS:
        for m in pattern.finditer(text):
            tnm.append(TnmMention(axis=axis, value=m.group(0)[1:], span=m.span()))
    tnm.sort(key=lambda m: m.span)
    return stages, tnm


def annotate_tnm(graph):
    """Annotate every node with its stage/TNM mentions (idempotent).

    Mention spans index into the node's lines joined with single spaces.
    """
    annotations = {nid: dict(ann) for nid, ann in graph.annotations.items()}
    for node in graph.nodes:
        stages, tnm = extract_mentions(node.joined_text())
        ann = annotations.setdefault(node.id, {})
        ann["stages"] = [
            {"value": s.value, "span": [s.span[0], s.span[1]]} for s in stages
        ]
        ann["tnm"] = [
            {"axis": m.axis, "value": m.value, "span": [m.span[0], m.span[1]]}
            for m in tnm
        ]
    return replace(graph, annotations=annotations)
