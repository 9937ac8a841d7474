"""Stratified k-fold cross-validation and grid search.

Folds: within each class (declaration order), members are shuffled by the
seeded generator and dealt round-robin, so per-fold class counts stay
within one of proportional.  Vocabulary and idf are fitted on training
folds only.  Ties on mean accuracy go to the earliest grid entry.
"""

from __future__ import annotations

import itertools

import numpy as np

from ..errors import InputError, InsufficientClassMembers
from .dataset import CLASSES, LabeledDataset
from .features import TfidfParams, VocabParams
from .sgd import SgdParams, LinearModel, make_rng, predict, train

# Component parameter values explored by cross-validation, in grid order.
GRID_AXES = (
    ("max_df", (0.75, 1.0)),
    ("max_features", (5000, 50000)),
    ("ngram_range", ((1, 2),)),
    ("use_idf", (False, True)),
    ("norm", ("L1", "L2")),
    ("max_iter", (50, 10)),
    ("alpha", (1e-5,)),
    ("penalty", ("ELASTICNET",)),
)


def default_grid() -> list[dict]:
    keys = [name for name, _ in GRID_AXES]
    combos = itertools.product(*(values for _, values in GRID_AXES))
    return [dict(zip(keys, combo)) for combo in combos]


def split_params(combo: dict, seed: int = 0):
    """Split a flat combo dict into the three parameter groups."""
    known = {name for name, _ in GRID_AXES} | {"l1_ratio", "seed"}
    unknown = set(combo) - known
    if unknown:
        raise InputError(f"unknown grid parameter {sorted(unknown)[0]!r}")
    vocab = VocabParams(
        max_df=float(combo.get("max_df", 1.0)),
        max_features=int(combo.get("max_features", 50000)),
        ngram_range=tuple(combo.get("ngram_range", (1, 2))),
    )
    tfidf = TfidfParams(
        use_idf=bool(combo.get("use_idf", True)),
        norm=str(combo.get("norm", "L2")),
    )
    sgd = SgdParams(
        alpha=float(combo.get("alpha", 1e-5)),
        penalty=str(combo.get("penalty", "ELASTICNET")),
        l1_ratio=float(combo.get("l1_ratio", 0.15)),
        max_iter=int(combo.get("max_iter", 10)),
        seed=int(combo.get("seed", seed)),
    )
    return vocab, tfidf, sgd


def stratified_folds(labels, k: int, seed: int) -> np.ndarray:
    """Fold id per row; round-robin within each shuffled class."""
    if k < 2:
        raise InputError(f"need at least 2 folds, got {k}")
    rng = make_rng(seed, 1)
    folds = np.full(len(labels), -1, dtype=np.int64)
    for cls in CLASSES:
        idxs = [i for i, l in enumerate(labels) if l == cls]
        if not idxs:
            continue
        if len(idxs) < k:
            raise InsufficientClassMembers(cls, k)
        perm = rng.permutation(len(idxs))
        for j, p in enumerate(perm):
            folds[idxs[p]] = j % k
    return folds


def grid_search_cv(dataset: LabeledDataset, grid, k: int, seed: int = 0):
    """Mean held-out accuracy per combo; returns (best, score, table)."""
    grid = list(grid)
    if not grid:
        raise InputError("empty parameter grid")
    labels = dataset.labels()
    folds = stratified_folds(labels, k, seed)

    table = []
    best = None
    for ci, combo in enumerate(grid):
        vocab_params, tfidf_params, sgd_params = split_params(combo, seed=seed)
        fold_accuracies = []
        for f in range(k):
            train_rows = [row for i, row in enumerate(dataset.rows)
                          if folds[i] != f]
            test_rows = [row for i, row in enumerate(dataset.rows)
                         if folds[i] == f]
            model = train(LabeledDataset(rows=train_rows), vocab_params,
                          tfidf_params, sgd_params, stream=(2, ci, f))
            correct = sum(1 for text, label in test_rows
                          if predict(model, text)[0] == label)
            fold_accuracies.append(correct / len(test_rows))
        mean = sum(fold_accuracies) / k
        table.append({
            "params": dict(combo),
            "fold_accuracies": fold_accuracies,
            "mean_accuracy": mean,
        })
        if best is None or mean > best[1]:
            best = (ci, mean)
    best_index, best_mean = best
    return dict(grid[best_index]), best_mean, table
