"""Labeled dataset construction from graphs or TSV files."""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import InputError, MissingLabel
from ..graph import node_sort_key

CLASSES = ("Evaluation", "Result", "Decision", "Action", "Uncertain")


@dataclass
class LabeledDataset:
    rows: list[tuple[str, str]]  # (text, label)

    def texts(self):
        return [t for t, _ in self.rows]

    def labels(self):
        return [l for _, l in self.rows]


def normalize_text(text: str) -> str:
    return " ".join(text.lower().split())


def build_dataset(graph, labels: dict[str, str]) -> LabeledDataset:
    """Collapse nodes to unique normalized texts and attach labels.

    Texts deduplicate exactly after normalization; the label comes from the
    first node (in canonical id order) of each text that has an entry in
    ``labels``.  A text with no labeled node raises MissingLabel.
    """
    by_text: dict[str, str | None] = {}
    order: list[str] = []
    for node in sorted(graph.nodes, key=lambda n: node_sort_key(n.id)):
        text = normalize_text(node.joined_text())
        if not text:
            continue
        if text not in by_text:
            by_text[text] = None
            order.append(text)
        if by_text[text] is None and node.id in labels:
            label = labels[node.id]
            if label not in CLASSES:
                raise InputError(f"unknown class {label!r} for node {node.id}")
            by_text[text] = label
    rows = []
    for text in order:
        label = by_text[text]
        if label is None:
            raise MissingLabel(text)
        rows.append((text, label))
    if not rows:
        raise InputError("graph produced an empty dataset")
    return LabeledDataset(rows=rows)


def load_dataset_tsv(path) -> LabeledDataset:
    """TSV rows: label<TAB>text with the five class names, exact case."""
    rows = []
    with open(path, "r", encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line:
                continue
            parts = line.split("\t", 1)
            if len(parts) != 2:
                raise InputError(f"{path}:{line_no}: expected label<TAB>text")
            label, text = parts
            if label not in CLASSES:
                raise InputError(f"{path}:{line_no}: unknown class {label!r}")
            rows.append((text, label))
    if not rows:
        raise InputError(f"{path}: empty dataset")
    return LabeledDataset(rows=rows)
