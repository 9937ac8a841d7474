"""Extraction scoring against ground truth.

Nodes match when they share a page, their boxes reach IoU >= 0.8, and
their joined text is identical.  Edge comparison runs over matched nodes
only (unmatched endpoints already show up as node errors).
"""

from __future__ import annotations

from dataclasses import asdict, dataclass

from ..geom import box_iou
from ..graph import GuidelineGraph

IOU_THRESHOLD = 0.8


@dataclass
class EvalReport:
    node_formation_errors: int
    connection_errors: int
    label_errors: int
    footnote_errors: int
    node_precision: float
    node_recall: float
    node_f1: float
    edge_precision: float
    edge_recall: float
    edge_f1: float
    total_nodes: int
    total_footnotes: int

    def to_dict(self) -> dict:
        return asdict(self)

    def is_clean(self) -> bool:
        return (self.node_formation_errors == 0 and self.connection_errors == 0
                and self.label_errors == 0 and self.footnote_errors == 0)


def _prf(matched: int, n_extracted: int, n_truth: int):
    if n_extracted == 0 and n_truth == 0:
        return 1.0, 1.0, 1.0
    precision = matched / n_extracted if n_extracted else 0.0
    recall = matched / n_truth if n_truth else 0.0
    f1 = (2 * precision * recall / (precision + recall)
          if precision + recall > 0 else 0.0)
    return precision, recall, f1


def score_extraction(extracted: GuidelineGraph, truth: GuidelineGraph,
                     iou_threshold: float = IOU_THRESHOLD) -> EvalReport:
    pairs = []
    for t in truth.nodes:
        t_text = t.joined_text()
        for e in extracted.nodes:
            if e.page_index != t.page_index or e.joined_text() != t_text:
                continue
            iou = box_iou(t.bbox, e.bbox)
            if iou >= iou_threshold:
                pairs.append((-iou, t.id, e.id))
    pairs.sort()
    t_matched: dict[str, str] = {}
    e_matched: dict[str, str] = {}
    for _, t_id, e_id in pairs:
        if t_id in t_matched or e_id in e_matched:
            continue
        t_matched[t_id] = e_id
        e_matched[e_id] = t_id

    matched = len(t_matched)
    node_errors = (len(truth.nodes) - matched) + (len(extracted.nodes) - matched)
    node_p, node_r, node_f1 = _prf(matched, len(extracted.nodes),
                                   len(truth.nodes))

    # edges over matched nodes, compared in truth-id space
    truth_edges = {
        (e.from_id, e.to_id, e.kind) for e in truth.edges
        if e.from_id in t_matched and e.to_id in t_matched
    }
    extracted_edges = {
        (e_matched[e.from_id], e_matched[e.to_id], e.kind)
        for e in extracted.edges
        if e.from_id in e_matched and e.to_id in e_matched
    }
    connection_errors = len(truth_edges ^ extracted_edges)
    edge_hits = len(truth_edges & extracted_edges)
    edge_p, edge_r, edge_f1 = _prf(edge_hits, len(extracted_edges),
                                   len(truth_edges))

    extracted_by_id = {n.id: n for n in extracted.nodes}
    truth_by_id = {n.id: n for n in truth.nodes}
    label_errors = sum(
        1 for t_id, e_id in t_matched.items()
        if truth_by_id[t_id].label != extracted_by_id[e_id].label
    )

    truth_fns = {(f.page_index, f.marker): f.text for f in truth.footnotes}
    extracted_fns = {(f.page_index, f.marker): f.text
                     for f in extracted.footnotes}
    marker_diff = len(set(truth_fns) ^ set(extracted_fns))
    text_mismatch = sum(
        1 for key in set(truth_fns) & set(extracted_fns)
        if truth_fns[key] != extracted_fns[key]
    )
    footnote_errors = marker_diff + text_mismatch

    return EvalReport(
        node_formation_errors=node_errors,
        connection_errors=connection_errors,
        label_errors=label_errors,
        footnote_errors=footnote_errors,
        node_precision=node_p, node_recall=node_r, node_f1=node_f1,
        edge_precision=edge_p, edge_recall=edge_r, edge_f1=edge_f1,
        total_nodes=len(truth.nodes),
        total_footnotes=len(truth.footnotes),
    )
