"""Bag-of-words features: tokenizer, n-gram vocabulary, tf-idf weighting."""

from __future__ import annotations

import math
import re
from dataclasses import dataclass

import numpy as np

from ..errors import EmptyVocabulary

_TOKEN_RE = re.compile(r"[^\W_]+", re.UNICODE)


def tokenize(text: str) -> list[str]:
    """Lowercased maximal alphanumeric runs; single-character tokens drop."""
    return [t for t in _TOKEN_RE.findall(text.lower()) if len(t) >= 2]


@dataclass(frozen=True)
class VocabParams:
    max_df: float = 1.0
    max_features: int = 50000
    ngram_range: tuple[int, int] = (1, 2)


@dataclass(frozen=True)
class TfidfParams:
    use_idf: bool = True
    norm: str = "L2"  # L1 | L2 | NONE


@dataclass
class Vocabulary:
    terms: list[str]
    index: dict[str, int]
    document_frequencies: list[int]
    n_documents: int
    params: VocabParams

    def __eq__(self, other):
        return (isinstance(other, Vocabulary)
                and self.terms == other.terms
                and self.document_frequencies == other.document_frequencies
                and self.n_documents == other.n_documents
                and self.params == other.params)


def doc_ngrams(text: str, ngram_range) -> list[str]:
    tokens = tokenize(text)
    lo, hi = ngram_range
    out = []
    for n in range(lo, hi + 1):
        for i in range(len(tokens) - n + 1):
            out.append(" ".join(tokens[i:i + n]))
    return out


def fit_vocabulary(corpus, params: VocabParams | None = None) -> Vocabulary:
    """Build the n-gram vocabulary with max_df and max_features filtering.

    Terms with df/n_documents strictly above max_df drop; if more than
    max_features remain, the highest-total-count terms are kept (ties by
    lexicographic order).  The final term list is sorted.
    """
    params = params or VocabParams()
    lo, hi = params.ngram_range
    if not corpus or not (1 <= lo <= hi):
        raise EmptyVocabulary("empty corpus or bad ngram_range")
    df: dict[str, int] = {}
    total: dict[str, int] = {}
    for text in corpus:
        grams = doc_ngrams(text, params.ngram_range)
        for g in grams:
            total[g] = total.get(g, 0) + 1
        for g in set(grams):
            df[g] = df.get(g, 0) + 1

    n_docs = len(corpus)
    kept = [t for t in df if df[t] / n_docs <= params.max_df]
    if len(kept) > params.max_features:
        kept.sort(key=lambda t: (-total[t], t))
        kept = kept[:params.max_features]
    kept.sort()
    if not kept:
        raise EmptyVocabulary("all terms filtered out")
    return Vocabulary(
        terms=kept,
        index={t: i for i, t in enumerate(kept)},
        document_frequencies=[df[t] for t in kept],
        n_documents=n_docs,
        params=params,
    )


def transform_counts(vocab: Vocabulary, text: str):
    """Sparse count vector (indices, values) of in-vocabulary n-grams."""
    counts: dict[int, float] = {}
    for g in doc_ngrams(text, vocab.params.ngram_range):
        idx = vocab.index.get(g)
        if idx is not None:
            counts[idx] = counts.get(idx, 0.0) + 1.0
    indices = np.array(sorted(counts), dtype=np.int64)
    values = np.array([counts[i] for i in sorted(counts)], dtype=np.float64)
    return indices, values


def idf_vector(vocab: Vocabulary) -> np.ndarray:
    """Smooth idf: ln((1 + n_documents) / (1 + df)) + 1."""
    n = vocab.n_documents
    return np.array(
        [math.log((1.0 + n) / (1.0 + df)) + 1.0
         for df in vocab.document_frequencies],
        dtype=np.float64,
    )


def tfidf_transform(vocab: Vocabulary, params: TfidfParams, counts, idf=None):
    """Weight counts by frozen idf (when enabled) and normalize.

    ``counts`` is an (indices, values) pair; the zero vector stays zero.
    """
    indices, values = counts
    if params.use_idf:
        if idf is None:
            idf = idf_vector(vocab)
        values = values * idf[indices]
    else:
        values = values.astype(np.float64, copy=True)
    if len(values):
        if params.norm == "L2":
            norm = math.sqrt(float(np.dot(values, values)))
            if norm > 0.0:
                values = values / norm
        elif params.norm == "L1":
            norm = float(np.sum(np.abs(values)))
            if norm > 0.0:
                values = values / norm
        elif params.norm != "NONE":
            raise ValueError(f"unknown norm {params.norm!r}")
    return indices, values
