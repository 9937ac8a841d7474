"""Synthetic guideline corpus: generator, perturbation, and scoring."""

from .generate import (
    CorpusSpec,
    generate_document,
    make_classification_dataset,
    perturb,
)
from .phrases import FOOTNOTE_POOL, LABEL_POOL, PHRASE_POOLS, QUALIFIER_POOLS
from .score import EvalReport, score_extraction

__all__ = [
    "CorpusSpec",
    "EvalReport",
    "FOOTNOTE_POOL",
    "LABEL_POOL",
    "PHRASE_POOLS",
    "QUALIFIER_POOLS",
    "generate_document",
    "make_classification_dataset",
    "perturb",
    "score_extraction",
]
