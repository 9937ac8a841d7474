"""One-vs-rest linear classification trained by hinge-loss SGD.

Objective per class: mean hinge loss + alpha * R(w) with R given by the
penalty (elasticnet: l1_ratio*|w|_1 + (1-l1_ratio)/2*|w|_2^2).  The
learning rate is eta_t = 1/(alpha*(t0 + t)) with t0 = 1/(eta0*alpha) and
eta0 = sqrt(1/sqrt(alpha)).  Rows are shuffled every epoch by the seeded
generator; all classes share the per-epoch order, so training is
bit-reproducible for a given (dataset, params, seed, kernel).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..errors import DegenerateDataset, InputError
from .dataset import CLASSES, LabeledDataset
from .features import (
    TfidfParams,
    VocabParams,
    Vocabulary,
    fit_vocabulary,
    idf_vector,
    tfidf_transform,
    transform_counts,
)
from .kernels import hinge_epoch

PENALTIES = ("L2", "L1", "ELASTICNET")


@dataclass(frozen=True)
class SgdParams:
    alpha: float = 1e-5
    penalty: str = "ELASTICNET"
    l1_ratio: float = 0.15
    max_iter: int = 10
    seed: int = 0


@dataclass
class LinearModel:
    vocabulary: Vocabulary
    tfidf_params: TfidfParams
    idf: np.ndarray | None
    classes: tuple[str, ...]
    weights: np.ndarray  # (n_classes, n_features)
    bias: np.ndarray  # (n_classes,)
    sgd_params: SgdParams = field(default_factory=SgdParams)

    def __eq__(self, other):
        if not isinstance(other, LinearModel):
            return NotImplemented
        idf_eq = ((self.idf is None and other.idf is None)
                  or (self.idf is not None and other.idf is not None
                      and np.array_equal(self.idf, other.idf)))
        return (self.vocabulary == other.vocabulary
                and self.tfidf_params == other.tfidf_params
                and idf_eq
                and self.classes == other.classes
                and np.array_equal(self.weights, other.weights)
                and np.array_equal(self.bias, other.bias)
                and self.sgd_params == other.sgd_params)


def make_rng(seed: int, *stream: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(
        [int(seed) & 0xFFFFFFFF, *stream])))


def penalty_coefficients(params: SgdParams) -> tuple[float, float]:
    penalty = params.penalty.upper()
    if penalty == "L2":
        return 0.0, 1.0
    if penalty == "L1":
        return 1.0, 0.0
    if penalty == "ELASTICNET":
        return params.l1_ratio, 1.0 - params.l1_ratio
    raise InputError(f"unknown penalty {params.penalty!r}")


def vectorize_corpus(texts, vocab: Vocabulary, tfidf_params: TfidfParams, idf):
    """CSR arrays (indptr, indices, data) of tf-idf vectors."""
    indptr = [0]
    all_idx = []
    all_val = []
    for text in texts:
        idx, val = tfidf_transform(vocab, tfidf_params,
                                   transform_counts(vocab, text), idf)
        all_idx.append(idx)
        all_val.append(val)
        indptr.append(indptr[-1] + len(idx))
    indices = (np.concatenate(all_idx) if all_idx
               else np.zeros(0, dtype=np.int64)).astype(np.int64)
    data = (np.concatenate(all_val) if all_val
            else np.zeros(0, dtype=np.float64)).astype(np.float64)
    return np.array(indptr, dtype=np.int64), indices, data


def train(dataset: LabeledDataset, vocab_params: VocabParams | None = None,
          tfidf_params: TfidfParams | None = None,
          sgd_params: SgdParams | None = None,
          stream: tuple[int, ...] = ()) -> LinearModel:
    """Fit the one-vs-rest linear model.

    ``stream`` namespaces the RNG (used by cross-validation so each
    combo/fold owns an independent reproducible stream).
    """
    vocab_params = vocab_params or VocabParams()
    tfidf_params = tfidf_params or TfidfParams()
    sgd_params = sgd_params or SgdParams()

    present = set(dataset.labels())
    classes = tuple(c for c in CLASSES if c in present)
    if len(classes) < 2:
        raise DegenerateDataset(f"need at least 2 classes, got {sorted(present)}")

    vocab = fit_vocabulary(dataset.texts(), vocab_params)
    idf = idf_vector(vocab) if tfidf_params.use_idf else None
    indptr, indices, data = vectorize_corpus(dataset.texts(), vocab,
                                             tfidf_params, idf)

    n = len(dataset.rows)
    n_classes = len(classes)
    n_features = len(vocab.terms)
    targets = np.full((n_classes, n), -1.0, dtype=np.float64)
    for ci, cls in enumerate(classes):
        for ri, (_, label) in enumerate(dataset.rows):
            if label == cls:
                targets[ci, ri] = 1.0

    alpha = sgd_params.alpha
    l1_coef, l2_coef = penalty_coefficients(sgd_params)
    eta0 = math.sqrt(1.0 / math.sqrt(alpha))
    t0 = 1.0 / (eta0 * alpha)

    v = np.zeros((n_classes, n_features), dtype=np.float64)
    b = np.zeros(n_classes, dtype=np.float64)
    wscale = np.ones(n_classes, dtype=np.float64)
    u = np.zeros(n_classes, dtype=np.float64)
    q = np.zeros((n_classes, n_features), dtype=np.float64)

    rng = make_rng(sgd_params.seed, 0, *stream)
    t = 0
    for _ in range(sgd_params.max_iter):
        order = rng.permutation(n).astype(np.int64)
        t = hinge_epoch(indptr, indices, data, targets, order,
                        v, b, wscale, u, q, alpha, l1_coef, l2_coef,
                        float(t0), t)

    weights = v * wscale[:, None]
    return LinearModel(vocabulary=vocab, tfidf_params=tfidf_params, idf=idf,
                       classes=classes, weights=weights, bias=b,
                       sgd_params=sgd_params)


def decision_scores(model: LinearModel, text: str) -> np.ndarray:
    idx, val = tfidf_transform(model.vocabulary, model.tfidf_params,
                               transform_counts(model.vocabulary, text),
                               model.idf)
    if len(idx):
        return model.weights[:, idx] @ val + model.bias
    return model.bias.copy()


def predict(model: LinearModel, text: str):
    """(winning class, per-class scores); ties go to declaration order."""
    scores = decision_scores(model, text)
    winner = int(np.argmax(scores))
    return model.classes[winner], {
        cls: float(scores[i]) for i, cls in enumerate(model.classes)
    }
